#include "pst/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pst {
namespace {

constexpr long long kMaxScanPoints = 50'000'000;

void check_site(const EigenDecomposition<double>& d, int site) {
  if (site < 0 || site >= d.size()) throw InvalidArgument("site index out of range");
}

}  // namespace

std::complex<double> transition_amplitude(const EigenDecomposition<double>& d, int from, int to, double t) {
  check_site(d, from);
  check_site(d, to);
  if (t == 0.0) return from == to ? 1.0 : 0.0;
  std::complex<double> amp = 0.0;
  for (Eigen::Index k = 0; k < d.size(); ++k) {
    const double w = d.eigenvectors(to, k) * d.eigenvectors(from, k);
    amp += w * std::polar(1.0, -d.eigenvalues[k] * t);
  }
  return amp;
}

std::complex<double> transfer_amplitude(const EigenDecomposition<double>& d, double t) {
  return transition_amplitude(d, 0, static_cast<int>(d.size()) - 1, t);
}

double transfer_fidelity(const EigenDecomposition<double>& d, double t) {
  return std::norm(transfer_amplitude(d, t));
}

Eigen::VectorXcd evolve_site(const EigenDecomposition<double>& d, int site, double t) {
  check_site(d, site);
  const Eigen::Index n = d.size();
  if (t == 0.0) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
    psi[site] = 1.0;
    return psi;
  }
  Eigen::VectorXcd coeff(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    coeff[k] = d.eigenvectors(site, k) * std::polar(1.0, -d.eigenvalues[k] * t);
  }
  return d.eigenvectors.cast<std::complex<double>>() * coeff;
}

FidelityEnvelope::FidelityEnvelope(const EigenDecomposition<double>& d, double width) : width_(width) {
  if (!(width >= 0.0)) throw InvalidArgument("smoothing width must be >= 0");
  const Eigen::Index n = d.size();
  Eigen::VectorXd w(n);
  for (Eigen::Index k = 0; k < n; ++k) w[k] = d.eigenvectors(0, k) * d.eigenvectors(n - 1, k);
  constant_ = w.squaredNorm();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const double omega = d.eigenvalues[a] - d.eigenvalues[b];
      const double damping = std::exp(-0.5 * omega * omega * width * width);
      const double weight = 2.0 * w[a] * w[b] * damping;
      if (std::fabs(weight) > 1e-18) terms_.push_back({omega, weight});
    }
  }
}

double FidelityEnvelope::default_width(const EigenDecomposition<double>& d) {
  if (d.size() < 3) return 0.0;
  const double split = d.eigenvalues[0] - d.eigenvalues[1];
  const double separation = d.eigenvalues[1] - d.eigenvalues[2];
  if (!(split > 0.0) || separation < 10.0 * split) return 0.0;
  return 1.0 / std::sqrt(split * separation);
}

double FidelityEnvelope::operator()(double t) const {
  double f = constant_;
  for (const auto& term : terms_) f += term.weight * std::cos(term.frequency * t);
  return f;
}

double golden_section_maximize(const std::function<double(double)>& f, double a, double b, double tolerance,
                               int max_iterations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iterations && std::fabs(b - a) > tolerance; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

FidelitySeries fidelity_series(const ChainSpec& spec, double t_max, int n_samples, std::uint64_t seed) {
  if (!(t_max > 0.0)) throw InvalidArgument("t_max must be > 0");
  if (n_samples < 2) throw InvalidArgument("need at least 2 samples");

  const auto decomposition = eigen_decompose(build_hamiltonian(spec), seed);
  const double width = FidelityEnvelope::default_width(decomposition);
  const FidelityEnvelope envelope(decomposition, width);

  FidelitySeries series{{}, {}, {}, 0.0, 0.0, width, spec};
  series.times.reserve(n_samples);
  series.fidelities.reserve(n_samples);
  series.envelope.reserve(n_samples);
  for (int k = 0; k < n_samples; ++k) {
    const double t = k == n_samples - 1 ? t_max : t_max * k / (n_samples - 1);
    series.times.push_back(t);
    series.fidelities.push_back(transfer_fidelity(decomposition, t));
    series.envelope.push_back(envelope(t));
  }

  const auto best = std::max_element(series.fidelities.begin(), series.fidelities.end());
  const auto k = static_cast<int>(best - series.fidelities.begin());
  const double lo = series.times[std::max(k - 1, 0)];
  const double hi = series.times[std::min(k + 1, n_samples - 1)];
  auto f = [&](double t) { return transfer_fidelity(decomposition, t); };
  const double refined = golden_section_maximize(f, lo, hi, 1e-12 * std::max(1.0, t_max));
  const double refined_value = f(refined);
  if (refined_value >= *best) {
    series.peak_time = refined;
    series.peak_value = refined_value;
  } else {
    series.peak_time = series.times[k];
    series.peak_value = *best;
  }
  return series;
}

TransferPeak detect_transfer_time(const ChainSpec& spec, double hint, double window, std::uint64_t seed) {
  if (!(hint > 0.0) || !std::isfinite(hint)) throw InvalidArgument("hint must be finite and > 0");
  if (!(window > 0.0 && window < 1.0)) throw InvalidArgument("window must lie in (0, 1)");

  const auto matrix = build_hamiltonian(spec);
  const auto decomposition = eigen_decompose(matrix, seed);
  const double width = FidelityEnvelope::default_width(decomposition);
  const FidelityEnvelope envelope(decomposition, width);

  const double lo = (1.0 - window) * hint;
  const double hi = (1.0 + window) * hint;
  const double max_step = std::numbers::pi / (8.0 * matrix.gershgorin_norm());
  const double intervals = std::ceil((hi - lo) / max_step);
  if (intervals > static_cast<double>(kMaxScanPoints)) {
    std::ostringstream msg;
    msg << "peak window needs " << intervals << " grid points (limit " << kMaxScanPoints << ")";
    throw InvalidArgument(msg.str());
  }
  const auto count = static_cast<long long>(intervals);
  const double step = (hi - lo) / static_cast<double>(count);

  long long best = 0;
  double best_value = envelope(lo);
  for (long long k = 1; k <= count; ++k) {
    const double value = envelope(lo + step * static_cast<double>(k));
    if (value > best_value) {
      best_value = value;
      best = k;
    }
  }
  if (best == 0 || best == count) {
    throw NoPeakInWindow("transfer fidelity has no interior maximum in the search window");
  }

  const double a = lo + step * static_cast<double>(best - 1);
  const double b = lo + step * static_cast<double>(best + 1);
  double t = golden_section_maximize([&](double x) { return envelope(x); }, a, b, 1e-13 * hint);
  double value = envelope(t);
  if (value < best_value) {
    t = lo + step * static_cast<double>(best);
    value = best_value;
  }
  return {t, value, transfer_fidelity(decomposition, t), width};
}

}  // namespace pst
