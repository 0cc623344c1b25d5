#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "pst/chain_model.hpp"
#include "pst/tridiag_eigen.hpp"

namespace pst {

/// <to| e^{-iHt} |from> by the spectral sum. Sites are 0-based. At t = 0
/// the identity is returned exactly.
std::complex<double> transition_amplitude(const EigenDecomposition<double>& d, int from, int to, double t);

/// <1| e^{-iHt} |N>.
std::complex<double> transfer_amplitude(const EigenDecomposition<double>& d, double t);

/// f_1N(t) = |<1| e^{-iHt} |N>|^2.
double transfer_fidelity(const EigenDecomposition<double>& d, double t);

/// e^{-iHt} |site>.
Eigen::VectorXcd evolve_site(const EigenDecomposition<double>& d, int site, double t);

/// Gaussian time average of f_1N,
///   F(t) = sum_{a,b} w_a w_b cos((E_a - E_b) t) exp(-(E_a - E_b)^2 width^2 / 2),
/// with w_a = <1|a><a|N>. With width between 1/Omega and 1/dE (Omega the
/// distance from the localized pair to the band, dE their splitting) it
/// removes the fast band-induced ripple and keeps the slow transfer envelope.
class FidelityEnvelope {
 public:
  FidelityEnvelope(const EigenDecomposition<double>& d, double width);

  /// sqrt(1/(dE Omega)) when the top pair is separated from the rest by at
  /// least 10 dE, otherwise 0 (no smoothing).
  static double default_width(const EigenDecomposition<double>& d);

  double width() const { return width_; }
  double operator()(double t) const;

 private:
  struct Term {
    double frequency;
    double weight;
  };
  double constant_ = 0.0;
  std::vector<Term> terms_;
  double width_;
};

struct FidelitySeries {
  std::vector<double> times;
  std::vector<double> fidelities;
  std::vector<double> envelope;  ///< FidelityEnvelope at default width
  double peak_time = 0.0;        ///< refined maximum of the raw fidelity
  double peak_value = 0.0;
  double smoothing_width = 0.0;
  ChainSpec spec;
};

/// f_1N on the uniform grid t_k = k t_max / (n_samples - 1).
FidelitySeries fidelity_series(const ChainSpec& spec, double t_max, int n_samples,
                               std::uint64_t seed = kDefaultSeed);

struct TransferPeak {
  double time;          ///< refined peak of the transfer envelope
  double fidelity;      ///< envelope value at `time`
  double raw_fidelity;  ///< f_1N(time) including the fast ripple
  double smoothing_width;
};

/// Locates the transfer peak in [(1 - window) hint, (1 + window) hint]: the
/// envelope is scanned on a grid of step <= pi/(8 ||H||) and the best grid
/// point is refined by golden-section search. Throws NoPeakInWindow if the
/// maximum sits on the window edge.
TransferPeak detect_transfer_time(const ChainSpec& spec, double hint, double window = 0.5,
                                  std::uint64_t seed = kDefaultSeed);

/// Maximizer of a unimodal f on [a, b] by golden-section search.
double golden_section_maximize(const std::function<double(double)>& f, double a, double b,
                               double tolerance, int max_iterations = 200);

}  // namespace pst
