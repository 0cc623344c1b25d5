#pragma once

// Closed-form and semi-analytical results for the XX chain with boundary
// fields: the semi-infinite bound state, extended states, second-order
// degenerate perturbation theory, its asymptotic series, and the
// transcendental equation for the finite-chain localized levels.

#include <cmath>
#include <sstream>
#include <string>
#include <type_traits>

#include <Eigen/Core>

#include "pst/chain_model.hpp"
#include "pst/double_double.hpp"
#include "pst/errors.hpp"
#include "pst/gap_result.hpp"

namespace pst {

struct BoundStateResult {
  double kappa;            ///< inverse localization length, ln(h/J)
  double energy;           ///< 2J cosh(kappa) = h + J^2/h
  double boundary_weight;  ///< (u_1)^2 = 1 - (J/h)^2
};

/// Localized level of the semi-infinite chain. Throws NoBoundState for h <= J.
BoundStateResult bound_state(double coupling, double field);

struct ExtendedStateResult {
  double wavevector;   ///< q in (0, pi)
  double energy;       ///< 2J cos q
  double phase_shift;  ///< delta in (-pi/2, pi/2]
};

/// Scattering state u_l = sin(q l + delta) of the semi-infinite chain.
ExtendedStateResult extended_state(double coupling, double field, double wavevector);

/// Chain with the two end bonds cut: two isolated boundary sites at energy h
/// and an (N-2)-site open chain in between.
struct DecoupledReference {
  double localized_energy;       ///< h, doubly degenerate
  Eigen::VectorXd plus;          ///< (|1> + |N>)/sqrt(2)
  Eigen::VectorXd minus;         ///< (|1> - |N>)/sqrt(2)
  Eigen::VectorXd inner_energies;  ///< 2J cos(nu pi/(N-1)), nu = 1..N-2
  Eigen::MatrixXd inner_vectors;   ///< N x (N-2), zero on sites 1 and N
};

DecoupledReference decoupled_reference(int n_sites, double coupling, double field);

/// Hamiltonian of the decoupled reference (end bonds set to zero).
TridiagonalMatrix<double> decoupled_hamiltonian(int n_sites, double coupling, double field);

/// Matrix elements of the end-bond perturbation V between the degenerate
/// boundary states and the inner modes, and the resulting second-order 2x2
/// matrix in the {|1>, |N>} basis.
struct PerturbationElements {
  Eigen::VectorXd inner_energies;
  Eigen::VectorXd first_site;  ///< <1|V|nu> = J u_2^nu
  Eigen::VectorXd last_site;   ///< <N|V|nu> = J u_{N-1}^nu
  Eigen::Matrix2d second_order;
};

PerturbationElements perturbation_elements(int n_sites, double coupling, double field);

/// Splitting from second-order degenerate perturbation theory,
/// (4J/(N-1)) sum_nu (-1)^(nu+1) sin^2(nu pi/(N-1)) / (h/J - 2 cos(nu pi/(N-1))).
/// E+/E- include the common second-order shift. Requires N >= 4 and h > 2J.
GapResult<double> perturbative_gap(int n_sites, double coupling, double field);

/// Series 2J (J/h)^(N-2) [1 + (N-3)(J/h)^2 + (N^2-3N-2)/2 (J/h)^4].
GapResult<double> asymptotic_gap(int n_sites, double coupling, double field);

enum class LowestOrderVariant { as_printed, squared };

/// Leading order in (J/h)^(N-2): 2J (J/h)^(N-2) (1 - (J/h)^2)^p with p = 1
/// (as_printed) or p = 2 (squared).
GapResult<double> lowest_order_gap(int n_sites, double coupling, double field,
                                   LowestOrderVariant variant = LowestOrderVariant::squared);

/// Peak transfer fidelity 1 - 2(J/h)^2 carried by the two localized levels.
double fidelity_estimate(double coupling, double field);

/// Normalized ansatz u_l = e^{-kappa l} + sign e^{-kappa (N+1-l)}.
Eigen::VectorXd localized_ansatz(int n_sites, double kappa, int sign);

template <class Scalar>
struct KappaPair {
  Scalar kappa_plus{};
  Scalar kappa_minus{};
  int iterations_used = 0;
  bool converged = false;
};

template <class Scalar>
struct TranscendentalSolution {
  KappaPair<Scalar> kappas;
  Scalar exp_kappa_plus{};
  Scalar exp_kappa_minus{};
  Scalar residual{};  ///< max |x - h/J -+ x^-N ((h/J) x - 1)| at the last iterate
  GapResult<Scalar> gap;
};

namespace detail {

template <class Scalar>
double kappa_tolerance() {
  return std::is_same_v<Scalar, DoubleDouble> ? 1e-30 : 1e-15;
}

inline void require_localized(int n_sites, double coupling, double field, int min_sites) {
  if (n_sites < min_sites) {
    throw InvalidArgument("need at least " + std::to_string(min_sites) + " sites");
  }
  if (!(coupling > 0.0)) throw InvalidArgument("coupling must be > 0");
  if (!(field > coupling)) {
    throw NoBoundState("boundary field must exceed the coupling for localized levels");
  }
}

}  // namespace detail

/// Runs `sweeps` fixed-point sweeps of
///   x = h/J +- x^-N ((h/J) x - 1),   x = e^{kappa+-},
/// from x0 = h/J, or fewer if `stop_when_converged` and successive kappas
/// agree to the working tolerance (1e-15 relative in double, 1e-30 in
/// DoubleDouble). E+- = 2J cosh(kappa+-). The splitting is assembled from the
/// increments of the last sweep, which are both positive, so no cancellation
/// occurs.
template <class Scalar>
TranscendentalSolution<Scalar> transcendental_sweeps(int n_sites, double coupling, double field,
                                                     int sweeps, bool stop_when_converged = false) {
  using std::abs;
  using std::log;
  using std::pow;
  detail::require_localized(n_sites, coupling, field, 3);
  if (sweeps < 1) throw InvalidArgument("need at least one sweep");

  const Scalar one(1.0);
  const Scalar ratio = Scalar(field) / Scalar(coupling);
  auto increment = [&](const Scalar& x) -> Scalar { return pow(x, -n_sites) * (ratio * x - one); };

  Scalar xp = ratio;
  Scalar xm = ratio;
  Scalar kp = log(ratio);
  Scalar km = kp;
  Scalar delta(0.0);
  TranscendentalSolution<Scalar> out;
  const double tol = detail::kappa_tolerance<Scalar>();

  for (int sweep = 1; sweep <= sweeps; ++sweep) {
    const Scalar ap = increment(xp);
    const Scalar am = increment(xm);
    const Scalar xp_next = ratio + ap;
    const Scalar xm_next = ratio - am;
    if (!(xm_next > one)) {
      throw NoBoundState("antisymmetric level is not localized (e^kappa- <= 1)");
    }
    const Scalar kp_next = log(xp_next);
    const Scalar km_next = log(xm_next);
    const bool settled = to_double(abs(kp_next - kp)) <= tol * to_double(kp_next) &&
                         to_double(abs(km_next - km)) <= tol * to_double(km_next);
    delta = ap + am;
    xp = xp_next;
    xm = xm_next;
    kp = kp_next;
    km = km_next;
    out.kappas.iterations_used = sweep;
    out.kappas.converged = settled;
    if (settled && stop_when_converged) break;
  }

  out.kappas.kappa_plus = kp;
  out.kappas.kappa_minus = km;
  out.exp_kappa_plus = xp;
  out.exp_kappa_minus = xm;
  const Scalar rp = abs(xp - ratio - increment(xp));
  const Scalar rm = abs(xm - ratio + increment(xm));
  out.residual = rp > rm ? rp : rm;

  const Scalar j(coupling);
  const Scalar e_plus = j * (xp + one / xp);
  const Scalar e_minus = j * (xm + one / xm);
  const Scalar splitting = j * delta * (one - one / (xp * xm));
  out.gap = make_gap(e_plus, e_minus, splitting, GapMethod::transcendental);
  return out;
}

/// Iterates the transcendental equation to convergence. Throws NotConverged
/// with the last iterate if `max_iterations` sweeps are not enough.
template <class Scalar>
TranscendentalSolution<Scalar> transcendental_gap(int n_sites, double coupling, double field,
                                                  int max_iterations = 200) {
  auto sol = transcendental_sweeps<Scalar>(n_sites, coupling, field, max_iterations, true);
  if (!sol.kappas.converged) {
    std::ostringstream msg;
    msg << "transcendental equation did not converge in " << max_iterations << " sweeps";
    throw NotConverged(msg.str(), to_double(sol.kappas.kappa_plus), to_double(sol.kappas.kappa_minus),
                       to_double(sol.residual));
  }
  return sol;
}

}  // namespace pst
