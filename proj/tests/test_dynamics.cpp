#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pst/analytics.hpp"
#include "pst/dynamics.hpp"

using pst::ChainSpec;
using std::numbers::pi;

namespace {

pst::EigenDecomposition<double> decompose(const ChainSpec& spec) {
  return pst::eigen_decompose(pst::build_hamiltonian(spec));
}

double exact_transfer_time(const pst::EigenDecomposition<double>& d) {
  return pi / (d.eigenvalues[0] - d.eigenvalues[1]);
}

}  // namespace

TEST_CASE("no transfer at t = 0") {
  for (int n = 2; n <= 12; ++n) {
    const auto d = decompose(ChainSpec(n, 1.0, 3.0));
    CHECK(pst::transfer_amplitude(d, 0.0) == std::complex<double>(0.0, 0.0));
    CHECK(pst::transfer_fidelity(d, 0.0) == 0.0);
    CHECK(pst::transition_amplitude(d, 2 % n, 2 % n, 0.0) == std::complex<double>(1.0, 0.0));
  }
}

TEST_CASE("two sites transfer perfectly") {
  const auto d = decompose(ChainSpec(2, 1.0, 0.0));
  CHECK(std::abs(pst::transfer_amplitude(d, pi / 2)) == doctest::Approx(1.0).epsilon(1e-15));
  for (int k = 0; k <= 50; ++k) {
    const double t = 0.1 * k;
    CHECK(std::fabs(pst::transfer_fidelity(d, t) - std::sin(t) * std::sin(t)) <= 1e-15);
  }

  const auto series = pst::fidelity_series(ChainSpec(2, 1.0, 0.0), pi, 101);
  CHECK(series.times.size() == 101);
  CHECK(series.times.back() == pi);
  CHECK(series.peak_time == doctest::Approx(pi / 2).epsilon(1e-7));
  CHECK(series.peak_value == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    CHECK(std::fabs(series.fidelities[k] - std::pow(std::sin(series.times[k]), 2)) <= 1e-15);
  }
}

TEST_CASE("evolution is unitary") {
  for (const auto& spec : {ChainSpec(5, 2.0, 10.0), ChainSpec(12, 1.0, 3.0), ChainSpec(33, 1.0, 0.5)}) {
    const auto d = decompose(spec);
    for (int k = 0; k <= 400; ++k) {
      const double t = 1.37 * k;
      CHECK(std::fabs(pst::evolve_site(d, 0, t).squaredNorm() - 1.0) <= 1e-12);
    }
  }
  const auto d = decompose(ChainSpec(6, 1.0, 2.0));
  const Eigen::VectorXcd psi = pst::evolve_site(d, 0, 3.3);
  CHECK(std::abs(psi[5] - pst::transfer_amplitude(d, 3.3)) <= 1e-15);
}

TEST_CASE("transfer is reciprocal") {
  const auto d = decompose(ChainSpec(7, 1.0, 4.0));
  for (int k = 0; k < 200; ++k) {
    const double t = 0.913 * k;
    CHECK(std::norm(pst::transition_amplitude(d, 0, 6, t)) == std::norm(pst::transition_amplitude(d, 6, 0, t)));
  }
}

TEST_CASE("fidelity is periodic up to the band contribution") {
  for (const auto& spec : {ChainSpec(5, 2.0, 10.0), ChainSpec(6, 1.0, 5.0), ChainSpec(9, 1.0, 10.0)}) {
    const auto d = decompose(spec);
    const Eigen::Index n = d.size();
    double band = 0.0;
    for (Eigen::Index k = 2; k < n; ++k) band += std::fabs(d.eigenvectors(0, k) * d.eigenvectors(n - 1, k));
    const double period = 2.0 * exact_transfer_time(d);
    for (int i = 0; i < 500; ++i) {
      const double t = 0.731 * i;
      CHECK(std::fabs(pst::transfer_fidelity(d, t + period) - pst::transfer_fidelity(d, t)) <= 4.0 * band);
    }
  }
}

TEST_CASE("fidelity series invariants") {
  const auto series = pst::fidelity_series(ChainSpec(5, 2.0, 10.0), 250.0, 2001);
  REQUIRE(series.times.size() == 2001);
  REQUIRE(series.fidelities.size() == 2001);
  REQUIRE(series.envelope.size() == 2001);
  double max_sample = 0.0;
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    if (k > 0) CHECK(series.times[k] > series.times[k - 1]);
    CHECK(series.fidelities[k] >= 0.0);
    CHECK(series.fidelities[k] <= 1.0 + 1e-12);
    max_sample = std::max(max_sample, series.fidelities[k]);
  }
  CHECK(series.peak_value >= max_sample - 1e-12);
  CHECK(series.spec == ChainSpec(5, 2.0, 10.0));
  CHECK(series.smoothing_width > 0.0);

  CHECK_THROWS_AS(pst::fidelity_series(ChainSpec(5, 2.0, 10.0), 0.0, 10), pst::InvalidArgument);
  CHECK_THROWS_AS(pst::fidelity_series(ChainSpec(5, 2.0, 10.0), 1.0, 1), pst::InvalidArgument);
}

TEST_CASE("first transfer peak for N=5, J=2, h=10") {
  const ChainSpec spec(5, 2.0, 10.0);
  const auto d = decompose(spec);
  const double hint = exact_transfer_time(d);
  const auto peak = pst::detect_transfer_time(spec, hint);
  CHECK(peak.time >= 0.95 * hint);
  CHECK(peak.time <= 1.05 * hint);
  CHECK(peak.fidelity == doctest::Approx(0.92).epsilon(0.02 / 0.92));
  CHECK(peak.raw_fidelity == doctest::Approx(pst::transfer_fidelity(d, peak.time)));

  // The envelope peak is visible in a plain sampled series.
  const auto series = pst::fidelity_series(spec, 250.0, 5001);
  std::size_t best = 0;
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    if (series.times[k] < 150.0 && series.envelope[k] > series.envelope[best]) best = k;
  }
  CHECK(std::fabs(series.times[best] - peak.time) <= 0.1);
}

TEST_CASE("transfer peak for N=5, J=2, h=30") {
  const ChainSpec spec(5, 2.0, 30.0);
  const auto peak = pst::detect_transfer_time(spec, 2674.0);
  CHECK(std::llabs(std::llround(peak.time) - 2674) <= 2);
}

TEST_CASE("transfer peak for two sites") {
  const auto peak = pst::detect_transfer_time(ChainSpec(2, 1.0, 0.0), pi / 2);
  CHECK(peak.time == doctest::Approx(pi / 2).epsilon(1e-7));
  CHECK(peak.fidelity == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(peak.smoothing_width == 0.0);
}

TEST_CASE("peak detection needs an interior maximum") {
  CHECK_THROWS_AS(pst::detect_transfer_time(ChainSpec(2, 1.0, 0.0), pi / 4), pst::NoPeakInWindow);
  CHECK_THROWS_AS(pst::detect_transfer_time(ChainSpec(2, 1.0, 0.0), -1.0), pst::InvalidArgument);
  CHECK_THROWS_AS(pst::detect_transfer_time(ChainSpec(2, 1.0, 0.0), 1.0, 1.5), pst::InvalidArgument);
}

TEST_CASE("peak fidelity approaches the two-level estimate") {
  struct Case {
    double ratio;
    int max_sites;
  };
  for (const auto& c : {Case{5.0, 10}, Case{10.0, 8}, Case{20.0, 6}}) {
    const double x = 1.0 / c.ratio;
    for (int n = 4; n <= c.max_sites; ++n) {
      const ChainSpec spec(n, 1.0, c.ratio);
      const auto peak = pst::detect_transfer_time(spec, exact_transfer_time(decompose(spec)));
      CHECK(std::fabs(peak.fidelity - pst::fidelity_estimate(1.0, c.ratio)) <= 3.0 * x * x * x);
    }
  }
}

TEST_CASE("golden-section search") {
  const double t = pst::golden_section_maximize([](double x) { return -(x - 1.3) * (x - 1.3); }, 0.0, 3.0, 1e-12);
  CHECK(t == doctest::Approx(1.3).epsilon(1e-10));
}
