#pragma once

// Symmetric tridiagonal eigensolver built on Sturm-sequence bisection and
// inverse iteration. Everything is templated on the working scalar so the same
// code runs in double and in DoubleDouble.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include "pst/chain_model.hpp"
#include "pst/double_double.hpp"
#include "pst/errors.hpp"
#include "pst/gap_result.hpp"

namespace pst {

enum class Parity { none, symmetric, antisymmetric };

inline constexpr std::uint64_t kDefaultSeed = 42;

template <class Scalar>
struct EigenDecomposition {
  Vector<Scalar> eigenvalues;   ///< descending
  Matrix<Scalar> eigenvectors;  ///< column k belongs to eigenvalues[k]
  std::vector<Parity> parity;   ///< Parity::none unless the matrix is persymmetric
  Precision precision_tag = precision_of<Scalar>;
  std::uint64_t rng_seed = kDefaultSeed;

  Eigen::Index size() const { return eigenvalues.size(); }
};

/// Counts eigenvalues of a symmetric tridiagonal matrix below a shift via the
/// LDL^T pivots of T - lambda I, and locates single eigenvalues by bisection.
template <class Scalar>
class SturmSequence {
 public:
  explicit SturmSequence(const TridiagonalMatrix<Scalar>& m)
      : diagonal_(m.diagonal), off_squared_(m.off_diagonal.size()), norm_(m.gershgorin_norm()) {
    for (Eigen::Index i = 0; i < off_squared_.size(); ++i) {
      off_squared_[i] = m.off_diagonal[i] * m.off_diagonal[i];
    }
    const double eps = working_epsilon<Scalar>();
    const double scale = std::max(norm_, std::numeric_limits<double>::min());
    pivmin_ = Scalar(std::max(eps * eps * scale, std::numeric_limits<double>::min()));

    using std::abs;
    Scalar lo = diagonal_[0];
    Scalar hi = diagonal_[0];
    const Eigen::Index n = diagonal_.size();
    for (Eigen::Index i = 0; i < n; ++i) {
      Scalar radius(0.0);
      if (i > 0) radius += abs(m.off_diagonal[i - 1]);
      if (i + 1 < n) radius += abs(m.off_diagonal[i]);
      lo = std::min(lo, Scalar(diagonal_[i] - radius));
      hi = std::max(hi, Scalar(diagonal_[i] + radius));
    }
    const Scalar pad(2.0 * eps * scale + 4.0 * to_double(pivmin_));
    lower_ = lo - pad;
    upper_ = hi + pad;
  }

  Eigen::Index size() const { return diagonal_.size(); }
  double norm() const { return norm_; }
  const Scalar& lower_bound() const { return lower_; }
  const Scalar& upper_bound() const { return upper_; }

  /// Number of eigenvalues strictly below lambda.
  Eigen::Index count_below(const Scalar& lambda) const {
    Eigen::Index count = 0;
    Scalar q = diagonal_[0] - lambda;
    if (abs_less(q, pivmin_)) q = -pivmin_;
    if (q < Scalar(0.0)) ++count;
    for (Eigen::Index i = 1; i < diagonal_.size(); ++i) {
      q = diagonal_[i] - lambda - off_squared_[i - 1] / q;
      if (abs_less(q, pivmin_)) q = -pivmin_;
      if (q < Scalar(0.0)) ++count;
    }
    return count;
  }

  /// k-th smallest eigenvalue (0-based), bisected until the bracket is below
  /// 2 eps max(|lambda|, eps ||T||).
  Scalar eigenvalue(Eigen::Index k) const {
    using std::abs;
    Scalar lo = lower_;
    Scalar hi = upper_;
    const double eps = working_epsilon<Scalar>();
    for (int it = 0; it < 1000; ++it) {
      const Scalar mid = (lo + hi) * Scalar(0.5);
      if (!(mid > lo && mid < hi)) break;
      const double tol = 2.0 * eps * std::max(to_double(abs(mid)), eps * norm_);
      if (to_double(hi - lo) <= tol) break;
      if (count_below(mid) > k) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return (lo + hi) * Scalar(0.5);
  }

 private:
  static bool abs_less(const Scalar& q, const Scalar& bound) { return q < bound && -q < bound; }

  Vector<Scalar> diagonal_;
  Vector<Scalar> off_squared_;
  double norm_;
  Scalar pivmin_;
  Scalar lower_;
  Scalar upper_;
};

namespace detail {

/// Uniform [-1, 1) from the raw engine output, so start vectors are
/// bit-reproducible across standard libraries.
inline double symmetric_unit(std::mt19937_64& rng) {
  return 2.0 * (static_cast<double>(rng() >> 11) * 0x1p-53) - 1.0;
}

/// LU factorization with partial pivoting of T - shift I. U carries two
/// superdiagonals after row interchanges.
template <class Scalar>
class ShiftedTridiagonalLU {
 public:
  ShiftedTridiagonalLU(const TridiagonalMatrix<Scalar>& m, const Scalar& shift, const Scalar& tiny)
      : u0_(m.size()), u1_(m.size()), u2_(m.size()), mult_(m.size()), swapped_(m.size(), false) {
    using std::abs;
    const Eigen::Index n = m.size();
    const auto& e = m.off_diagonal;
    Scalar p0 = m.diagonal[0] - shift;
    Scalar p1 = n > 1 ? e[0] : Scalar(0.0);
    Scalar p2(0.0);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      const Scalar q0 = e[i];
      const Scalar q1 = m.diagonal[i + 1] - shift;
      const Scalar q2 = i + 2 < n ? e[i + 1] : Scalar(0.0);
      if (abs(q0) > abs(p0)) {
        swapped_[i] = true;
        u0_[i] = q0;
        u1_[i] = q1;
        u2_[i] = q2;
        const Scalar mlt = p0 / q0;
        mult_[i] = mlt;
        p0 = p1 - mlt * q1;
        p1 = p2 - mlt * q2;
      } else {
        if (p0 == Scalar(0.0)) p0 = tiny;
        u0_[i] = p0;
        u1_[i] = p1;
        u2_[i] = p2;
        const Scalar mlt = q0 / p0;
        mult_[i] = mlt;
        p0 = q1 - mlt * p1;
        p1 = q2 - mlt * p2;
      }
      p2 = Scalar(0.0);
    }
    if (p0 == Scalar(0.0)) p0 = tiny;
    u0_[n - 1] = p0;
    u1_[n - 1] = Scalar(0.0);
    u2_[n - 1] = Scalar(0.0);
  }

  Vector<Scalar> solve(Vector<Scalar> y) const {
    const Eigen::Index n = y.size();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      if (swapped_[i]) std::swap(y[i], y[i + 1]);
      y[i + 1] -= mult_[i] * y[i];
    }
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      Scalar acc = y[i];
      if (i + 1 < n) acc -= u1_[i] * y[i + 1];
      if (i + 2 < n) acc -= u2_[i] * y[i + 2];
      y[i] = acc / u0_[i];
    }
    return y;
  }

 private:
  Vector<Scalar> u0_, u1_, u2_, mult_;
  std::vector<bool> swapped_;
};

template <class Scalar>
double residual_tolerance(double norm) {
  if constexpr (std::same_as<Scalar, DoubleDouble>) {
    return 1e-26 * norm;
  } else {
    return 1e-11 * norm;
  }
}

/// Orients v so that its first component above sqrt(eps) max|v| is positive.
template <class Scalar>
void fix_sign(Vector<Scalar>& v) {
  using std::abs;
  Scalar peak(0.0);
  for (Eigen::Index i = 0; i < v.size(); ++i) peak = std::max(peak, Scalar(abs(v[i])));
  const Scalar floor = peak * Scalar(1e-8);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (abs(v[i]) > floor) {
      if (v[i] < Scalar(0.0)) v = -v;
      return;
    }
  }
}

/// Eigenvector for an accurate eigenvalue. `cluster` holds already accepted
/// vectors of nearby eigenvalues; the result is kept orthogonal to them.
template <class Scalar>
Vector<Scalar> inverse_iteration(const TridiagonalMatrix<Scalar>& m, const Scalar& lambda,
                                 const std::vector<Vector<Scalar>>& cluster, std::mt19937_64& rng) {
  constexpr int kMaxRestarts = 5;
  constexpr int kMaxSteps = 8;
  const Eigen::Index n = m.size();
  if (n == 1) return Vector<Scalar>::Constant(1, Scalar(1.0));
  const double norm = std::max(m.gershgorin_norm(), std::numeric_limits<double>::min());
  const Scalar tiny(working_epsilon<Scalar>() * norm);
  const ShiftedTridiagonalLU<Scalar> lu(m, lambda, tiny);
  const double tolerance = residual_tolerance<Scalar>(norm);

  auto orthogonalize = [&](Vector<Scalar>& x) {
    for (const auto& v : cluster) x -= v * v.dot(x);
  };

  double last_residual = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt <= kMaxRestarts; ++attempt) {
    Vector<Scalar> x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = Scalar(symmetric_unit(rng));
    orthogonalize(x);
    for (int step = 0; step < kMaxSteps; ++step) {
      x = lu.solve(std::move(x));
      orthogonalize(x);
      const Scalar len = x.norm();
      if (!(len > Scalar(0.0)) || !isfinite(len)) break;
      x /= len;
      const double residual = to_double((m * x - x * lambda).norm());
      last_residual = residual;
      if (residual <= tolerance) {
        fix_sign(x);
        return x;
      }
    }
  }
  std::ostringstream msg;
  msg << "inverse iteration did not converge for eigenvalue " << to_double(lambda)
      << " (last residual " << last_residual << ", tolerance " << tolerance << ")";
  throw InverseIterationStalled(msg.str());
}

/// Full eigensystem without symmetry assumptions, eigenvalues descending.
template <class Scalar>
void decompose_general(const TridiagonalMatrix<Scalar>& m, std::mt19937_64& rng,
                       std::vector<Scalar>& values, std::vector<Vector<Scalar>>& vectors) {
  const SturmSequence<Scalar> sturm(m);
  const Eigen::Index n = m.size();
  values.clear();
  vectors.clear();
  for (Eigen::Index k = n - 1; k >= 0; --k) values.push_back(sturm.eigenvalue(k));

  // Reorthogonalize within groups closer than 1e-3 ||T||.
  const double cluster_gap = 1e-3 * sturm.norm();
  std::vector<Vector<Scalar>> cluster;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k > 0 && to_double(values[k - 1] - values[k]) > cluster_gap) cluster.clear();
    Vector<Scalar> v = inverse_iteration(m, values[k], cluster, rng);
    cluster.push_back(v);
    vectors.push_back(std::move(v));
  }
}

/// The two diagonal blocks of a persymmetric tridiagonal matrix in the
/// reflection-adapted basis. Site i < N/2 pairs with N-1-i.
template <class Scalar>
struct ParitySectors {
  TridiagonalMatrix<Scalar> symmetric;
  TridiagonalMatrix<Scalar> antisymmetric;
  Eigen::Index full_size;

  Vector<Scalar> expand(const Vector<Scalar>& w, Parity parity) const {
    using std::sqrt;
    const Eigen::Index n = full_size;
    const Eigen::Index half = n / 2;
    const Scalar inv_root2 = Scalar(1.0) / sqrt(Scalar(2.0));
    const Scalar sign(parity == Parity::symmetric ? 1.0 : -1.0);
    Vector<Scalar> u = Vector<Scalar>::Constant(n, Scalar(0.0));
    for (Eigen::Index i = 0; i < half; ++i) {
      u[i] = w[i] * inv_root2;
      u[n - 1 - i] = sign * w[i] * inv_root2;
    }
    if (n % 2 == 1 && parity == Parity::symmetric) u[half] = w[half];
    return u;
  }
};

template <class Scalar>
ParitySectors<Scalar> split_parity_sectors(const TridiagonalMatrix<Scalar>& m) {
  using std::sqrt;
  const Eigen::Index n = m.size();
  const Eigen::Index half = n / 2;
  const auto& d = m.diagonal;
  const auto& e = m.off_diagonal;
  if (n % 2 == 0) {
    // Middle bond folds onto the last diagonal entry with sign +-1.
    Vector<Scalar> ds = d.head(half);
    Vector<Scalar> da = d.head(half);
    ds[half - 1] += e[half - 1];
    da[half - 1] -= e[half - 1];
    return {TridiagonalMatrix<Scalar>(std::move(ds), e.head(half - 1)),
            TridiagonalMatrix<Scalar>(std::move(da), e.head(half - 1)), n};
  }
  // Odd N: the symmetric block keeps the centre site, coupled with sqrt(2) e
  // after rescaling to keep the block symmetric; the antisymmetric block drops it.
  Vector<Scalar> es = e.head(half);
  es[half - 1] = es[half - 1] * sqrt(Scalar(2.0));
  return {TridiagonalMatrix<Scalar>(d.head(half + 1), std::move(es)),
          TridiagonalMatrix<Scalar>(d.head(half), e.head(half - 1)), n};
}

template <class Scalar>
double resolution_threshold(double norm) {
  return 64.0 * working_epsilon<Scalar>() * norm;
}

}  // namespace detail

/// Full eigensystem of a symmetric tridiagonal matrix, eigenvalues descending
/// with unit eigenvectors. Persymmetric matrices are solved per parity sector,
/// so every eigenvector has definite parity; eigenvalues closer than the
/// working resolution are ordered symmetric first.
template <class Scalar>
EigenDecomposition<Scalar> eigen_decompose(const TridiagonalMatrix<Scalar>& m,
                                           std::uint64_t seed = kDefaultSeed) {
  std::mt19937_64 rng(seed);
  const Eigen::Index n = m.size();

  struct Pair {
    Scalar value;
    Vector<Scalar> vector;
    Parity parity;
  };
  std::vector<Pair> pairs;
  pairs.reserve(n);

  if (n >= 2 && m.is_persymmetric()) {
    const auto sectors = detail::split_parity_sectors(m);
    std::vector<Scalar> sv, av;
    std::vector<Vector<Scalar>> svec, avec;
    detail::decompose_general(sectors.symmetric, rng, sv, svec);
    detail::decompose_general(sectors.antisymmetric, rng, av, avec);

    const Scalar tie(detail::resolution_threshold<Scalar>(m.gershgorin_norm()));
    std::size_t i = 0, j = 0;
    while (i < sv.size() || j < av.size()) {
      const bool take_symmetric = j >= av.size() || (i < sv.size() && sv[i] >= av[j] - tie);
      if (take_symmetric) {
        pairs.push_back({sv[i], sectors.expand(svec[i], Parity::symmetric), Parity::symmetric});
        ++i;
      } else {
        pairs.push_back({av[j], sectors.expand(avec[j], Parity::antisymmetric), Parity::antisymmetric});
        ++j;
      }
    }
  } else {
    std::vector<Scalar> values;
    std::vector<Vector<Scalar>> vectors;
    detail::decompose_general(m, rng, values, vectors);
    for (std::size_t k = 0; k < values.size(); ++k) {
      pairs.push_back({values[k], std::move(vectors[k]), Parity::none});
    }
  }

  // Tie-broken order can differ from value order only inside the resolution
  // window; keep the values themselves descending.
  std::vector<Scalar> sorted;
  sorted.reserve(pairs.size());
  for (const auto& p : pairs) sorted.push_back(p.value);
  std::sort(sorted.begin(), sorted.end(), [](const Scalar& a, const Scalar& b) { return a > b; });

  EigenDecomposition<Scalar> out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  out.parity.reserve(n);
  out.rng_seed = seed;
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues[k] = sorted[k];
    out.eigenvectors.col(k) = pairs[k].vector;
    out.parity.push_back(pairs[k].parity);
  }
  return out;
}

/// Eigenvalues only, descending.
template <class Scalar>
Vector<Scalar> eigenvalues(const TridiagonalMatrix<Scalar>& m) {
  const SturmSequence<Scalar> sturm(m);
  Vector<Scalar> out(m.size());
  for (Eigen::Index k = 0; k < m.size(); ++k) out[k] = sturm.eigenvalue(m.size() - 1 - k);
  return out;
}

/// The two largest eigenvalues, each bracketed separately by Sturm bisection,
/// and pi over their difference. For persymmetric matrices E+ is the top of the
/// symmetric sector and E- the top of the antisymmetric one.
///
/// Throws GapBelowResolution when E+ - E- < 64 eps ||T|| in the working
/// precision.
template <class Scalar>
GapResult<Scalar> top_gap(const TridiagonalMatrix<Scalar>& m) {
  if (m.size() < 3) throw InvalidArgument("top_gap needs at least 3 sites");
  Scalar upper, lower;
  if (m.is_persymmetric()) {
    const auto sectors = detail::split_parity_sectors(m);
    const SturmSequence<Scalar> sym(sectors.symmetric);
    const SturmSequence<Scalar> anti(sectors.antisymmetric);
    upper = sym.eigenvalue(sym.size() - 1);
    lower = anti.eigenvalue(anti.size() - 1);
    if (upper < lower) std::swap(upper, lower);
  } else {
    const SturmSequence<Scalar> sturm(m);
    upper = sturm.eigenvalue(m.size() - 1);
    lower = sturm.eigenvalue(m.size() - 2);
  }
  const Scalar splitting = upper - lower;
  const double threshold = detail::resolution_threshold<Scalar>(m.gershgorin_norm());
  if (to_double(splitting) < threshold) {
    std::ostringstream msg;
    msg << "splitting " << to_double(splitting) << " is below the resolution " << threshold
        << " of " << to_string(precision_of<Scalar>) << " precision; use extended precision";
    throw GapBelowResolution(msg.str(), to_double(splitting), threshold);
  }
  return make_gap(upper, lower, splitting, GapMethod::exact);
}

/// Top two eigenpairs of a full decomposition as a gap result.
template <class Scalar>
GapResult<Scalar> gap_from_decomposition(const EigenDecomposition<Scalar>& d) {
  if (d.size() < 2) throw InvalidArgument("need at least two eigenvalues");
  return make_gap(d.eigenvalues[0], d.eigenvalues[1], GapMethod::exact);
}

}  // namespace pst
