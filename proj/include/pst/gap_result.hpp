#pragma once

#include <cmath>
#include <limits>
#include <string_view>

#include "pst/double_double.hpp"

namespace pst {

enum class GapMethod { exact, perturbative, asymptotic, transcendental, lowest_order };

std::string_view to_string(GapMethod m);
std::string_view to_string(Precision p);

/// Energies of the symmetric (+) and antisymmetric (-) boundary levels and
/// the transfer time pi / (E+ - E-).
template <class Scalar>
struct GapResult {
  Scalar e_plus{};
  Scalar e_minus{};
  Scalar splitting{};
  Scalar transfer_time{};
  GapMethod method = GapMethod::exact;
  Precision precision = precision_of<Scalar>;

  /// Transfer time rounded to the nearest integer.
  long long rounded_transfer_time() const { return std::llround(to_double(transfer_time)); }

  template <class Other>
  GapResult<Other> cast() const {
    return {Other(e_plus), Other(e_minus), Other(splitting), Other(transfer_time), method, precision};
  }
};

/// Assembles a result from a precomputed (cancellation-free) splitting.
template <class Scalar>
GapResult<Scalar> make_gap(Scalar e_plus, Scalar e_minus, Scalar splitting, GapMethod method) {
  GapResult<Scalar> g;
  g.e_plus = e_plus;
  g.e_minus = e_minus;
  g.splitting = splitting;
  g.transfer_time = splitting > Scalar(0.0) ? constant_pi<Scalar>() / splitting
                                            : Scalar(std::numeric_limits<double>::infinity());
  g.method = method;
  return g;
}

template <class Scalar>
GapResult<Scalar> make_gap(Scalar e_plus, Scalar e_minus, GapMethod method) {
  return make_gap(e_plus, e_minus, Scalar(e_plus - e_minus), method);
}

}  // namespace pst
