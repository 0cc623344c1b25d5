#include "pst/analytics.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pst {
namespace {

using std::numbers::pi;

// Energy of the semi-infinite bound state; asymptotic-type results are
// centred on it since they only determine the splitting.
GapResult<double> centred_gap(double coupling, double field, double splitting, GapMethod method) {
  const double centre = field + coupling * coupling / field;
  return make_gap(centre + 0.5 * splitting, centre - 0.5 * splitting, splitting, method);
}

// sin(pi p / q) with the argument reduced exactly in integers to [0, pi/2].
double sin_pi_fraction(long long p, long long q) {
  p %= 2 * q;
  if (p < 0) p += 2 * q;
  double sign = 1.0;
  if (p >= q) {
    p -= q;
    sign = -1.0;
  }
  if (2 * p > q) p = q - p;
  return sign * std::sin(pi * static_cast<double>(p) / static_cast<double>(q));
}

}  // namespace

BoundStateResult bound_state(double coupling, double field) {
  if (!(coupling > 0.0)) throw InvalidArgument("coupling must be > 0");
  if (!(field > coupling)) {
    throw NoBoundState("no bound state for h <= J (critical field not exceeded)");
  }
  const double ratio = coupling / field;
  return {std::log(field / coupling), field + coupling * ratio, 1.0 - ratio * ratio};
}

ExtendedStateResult extended_state(double coupling, double field, double wavevector) {
  if (!(coupling > 0.0)) throw InvalidArgument("coupling must be > 0");
  if (!(field >= 0.0)) throw InvalidArgument("field must be >= 0");
  if (!(wavevector > 0.0 && wavevector < pi)) throw InvalidArgument("wavevector must lie in (0, pi)");

  double delta = std::atan2(field * std::sin(wavevector), coupling - field * std::cos(wavevector));
  // The jump by pi across the singular q only flips the sign of the state.
  if (delta > pi / 2) delta -= pi;
  if (delta <= -pi / 2) delta += pi;
  return {wavevector, 2.0 * coupling * std::cos(wavevector), delta};
}

DecoupledReference decoupled_reference(int n_sites, double coupling, double field) {
  if (n_sites < 4) throw InvalidArgument("decoupled reference needs at least 4 sites");
  if (!(coupling > 0.0)) throw InvalidArgument("coupling must be > 0");

  const int inner = n_sites - 2;
  const double nm1 = n_sites - 1;
  const double amp = std::sqrt(2.0 / nm1);
  DecoupledReference ref{field, Eigen::VectorXd::Zero(n_sites), Eigen::VectorXd::Zero(n_sites),
                         Eigen::VectorXd(inner), Eigen::MatrixXd::Zero(n_sites, inner)};
  ref.plus[0] = ref.plus[n_sites - 1] = std::numbers::sqrt2 / 2;
  ref.minus[0] = std::numbers::sqrt2 / 2;
  ref.minus[n_sites - 1] = -std::numbers::sqrt2 / 2;
  for (int nu = 1; nu <= inner; ++nu) {
    ref.inner_energies[nu - 1] = 2.0 * coupling * std::cos(nu * pi / nm1);
    for (int l = 2; l <= n_sites - 1; ++l) {
      ref.inner_vectors(l - 1, nu - 1) = amp * sin_pi_fraction(static_cast<long long>(nu) * (l - 1), n_sites - 1);
    }
  }
  return ref;
}

TridiagonalMatrix<double> decoupled_hamiltonian(int n_sites, double coupling, double field) {
  auto m = build_hamiltonian(ChainSpec(n_sites, coupling, field));
  m.off_diagonal[0] = 0.0;
  m.off_diagonal[n_sites - 2] = 0.0;
  return m;
}

PerturbationElements perturbation_elements(int n_sites, double coupling, double field) {
  if (n_sites < 4) throw InvalidArgument("perturbation theory needs at least 4 sites");
  if (!(coupling > 0.0)) throw InvalidArgument("coupling must be > 0");

  const int inner = n_sites - 2;
  const double nm1 = n_sites - 1;
  const double amp = coupling * std::sqrt(2.0 / nm1);
  PerturbationElements pe{Eigen::VectorXd(inner), Eigen::VectorXd(inner), Eigen::VectorXd(inner),
                          Eigen::Matrix2d::Zero()};
  for (int nu = 1; nu <= inner; ++nu) {
    const double energy = 2.0 * coupling * std::cos(nu * pi / nm1);
    // V couples site 1 to site 2 and site N to site N-1 of the inner chain.
    const double first = amp * sin_pi_fraction(nu, n_sites - 1);
    const double last = amp * sin_pi_fraction(static_cast<long long>(nu) * (n_sites - 2), n_sites - 1);
    pe.inner_energies[nu - 1] = energy;
    pe.first_site[nu - 1] = first;
    pe.last_site[nu - 1] = last;
    const double denom = field - energy;
    pe.second_order(0, 0) += first * first / denom;
    pe.second_order(1, 1) += last * last / denom;
    pe.second_order(0, 1) += first * last / denom;
  }
  pe.second_order(1, 0) = pe.second_order(0, 1);
  return pe;
}

GapResult<double> perturbative_gap(int n_sites, double coupling, double field) {
  if (n_sites < 4) throw InvalidArgument("perturbative gap needs at least 4 sites");
  if (!(coupling > 0.0)) throw InvalidArgument("coupling must be > 0");
  if (!(field > 2.0 * coupling)) {
    throw InvalidArgument("perturbative gap needs h > 2J (level outside the band)");
  }

  const double nm1 = n_sites - 1;
  const double ratio = field / coupling;
  double sum = 0.0;
  for (int nu = 1; nu <= n_sites - 2; ++nu) {
    const double angle = nu * pi / nm1;
    const double denom = ratio - 2.0 * std::cos(angle);
    if (denom < 1e-10) {
      throw DenominatorNearZero("perturbative denominator vanishes at nu = " + std::to_string(nu));
    }
    const double s = std::sin(angle);
    sum += (nu % 2 == 1 ? 1.0 : -1.0) * s * s / denom;
  }
  const double splitting = 4.0 * coupling / nm1 * sum;

  const auto pe = perturbation_elements(n_sites, coupling, field);
  const double shift = 0.5 * (pe.second_order(0, 0) + pe.second_order(1, 1));
  return make_gap(field + shift + 0.5 * splitting, field + shift - 0.5 * splitting, splitting,
                  GapMethod::perturbative);
}

GapResult<double> asymptotic_gap(int n_sites, double coupling, double field) {
  detail::require_localized(n_sites, coupling, field, 3);
  const double x = coupling / field;
  const double n = n_sites;
  const double x2 = x * x;
  const double series = 1.0 + (n - 3.0) * x2 + 0.5 * (n * n - 3.0 * n - 2.0) * x2 * x2;
  return centred_gap(coupling, field, 2.0 * coupling * std::pow(x, n_sites - 2) * series,
                     GapMethod::asymptotic);
}

GapResult<double> lowest_order_gap(int n_sites, double coupling, double field, LowestOrderVariant variant) {
  detail::require_localized(n_sites, coupling, field, 3);
  const double x = coupling / field;
  const double factor = 1.0 - x * x;
  const double prefactor = variant == LowestOrderVariant::squared ? factor * factor : factor;
  return centred_gap(coupling, field, 2.0 * coupling * std::pow(x, n_sites - 2) * prefactor,
                     GapMethod::lowest_order);
}

double fidelity_estimate(double coupling, double field) {
  if (!(coupling > 0.0)) throw InvalidArgument("coupling must be > 0");
  if (!(field > coupling)) throw NoBoundState("fidelity estimate needs h > J");
  const double x = coupling / field;
  return 1.0 - 2.0 * x * x;
}

Eigen::VectorXd localized_ansatz(int n_sites, double kappa, int sign) {
  if (n_sites < 2) throw InvalidArgument("ansatz needs at least 2 sites");
  Eigen::VectorXd u(n_sites);
  for (int l = 1; l <= n_sites; ++l) {
    u[l - 1] = std::exp(-kappa * l) + (sign >= 0 ? 1.0 : -1.0) * std::exp(-kappa * (n_sites + 1 - l));
  }
  return u.normalized();
}

}  // namespace pst
