#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "pst/double_double.hpp"
#include "pst/errors.hpp"

namespace pst {

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Physical parameters of an XX chain with equal fields h on both end sites.
/// Energies are in units of the coupling J (hbar = 1).
class ChainSpec {
 public:
  /// Uniform chain. Throws InvalidSpec unless n_sites >= 2, coupling > 0 and
  /// boundary_field >= 0.
  ChainSpec(int n_sites, double coupling, double boundary_field);

  /// Chain with explicit per-bond couplings (n_sites - 1 nonzero entries).
  /// `coupling` remains the reference energy scale.
  ChainSpec(int n_sites, double coupling, double boundary_field, std::vector<double> bond_couplings);

  int n_sites() const { return n_sites_; }
  double coupling() const { return coupling_; }
  double boundary_field() const { return boundary_field_; }
  const std::optional<std::vector<double>>& bond_couplings() const { return bond_couplings_; }

  /// Coupling on bond (i, i+1), 0-based.
  double bond(int i) const { return bond_couplings_ ? (*bond_couplings_)[i] : coupling_; }

  bool is_uniform() const;

  /// Throws InvalidArgument for specs with non-uniform bonds; every closed-form
  /// result assumes a homogeneous chain.
  void require_uniform() const;

  friend bool operator==(const ChainSpec&, const ChainSpec&) = default;

 private:
  int n_sites_;
  double coupling_;
  double boundary_field_;
  std::optional<std::vector<double>> bond_couplings_;
};

/// Symmetric tridiagonal matrix in compact form.
template <class Scalar>
struct TridiagonalMatrix {
  Vector<Scalar> diagonal;
  Vector<Scalar> off_diagonal;

  TridiagonalMatrix(Vector<Scalar> diag, Vector<Scalar> off)
      : diagonal(std::move(diag)), off_diagonal(std::move(off)) {
    if (diagonal.size() < 1 || off_diagonal.size() + 1 != diagonal.size()) {
      throw InvalidArgument("tridiagonal matrix needs |diagonal| = |off_diagonal| + 1 >= 1");
    }
  }

  Eigen::Index size() const { return diagonal.size(); }

  /// Invariant under the site reflection l -> N+1-l.
  bool is_persymmetric() const {
    const Eigen::Index n = size();
    for (Eigen::Index i = 0; i < n / 2; ++i) {
      if (!(diagonal[i] == diagonal[n - 1 - i])) return false;
    }
    const Eigen::Index m = off_diagonal.size();
    for (Eigen::Index i = 0; i < m / 2; ++i) {
      if (!(off_diagonal[i] == off_diagonal[m - 1 - i])) return false;
    }
    return true;
  }

  /// Gershgorin bound max_i (|d_i| + |e_{i-1}| + |e_i|).
  double gershgorin_norm() const {
    using std::abs;
    double norm = 0.0;
    const Eigen::Index n = size();
    for (Eigen::Index i = 0; i < n; ++i) {
      double row = to_double(abs(diagonal[i]));
      if (i > 0) row += to_double(abs(off_diagonal[i - 1]));
      if (i + 1 < n) row += to_double(abs(off_diagonal[i]));
      norm = std::max(norm, row);
    }
    return norm;
  }

  Vector<Scalar> operator*(const Vector<Scalar>& x) const {
    const Eigen::Index n = size();
    Vector<Scalar> y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      Scalar acc = diagonal[i] * x[i];
      if (i > 0) acc += off_diagonal[i - 1] * x[i - 1];
      if (i + 1 < n) acc += off_diagonal[i] * x[i + 1];
      y[i] = acc;
    }
    return y;
  }

  Matrix<Scalar> dense() const {
    const Eigen::Index n = size();
    Matrix<Scalar> m = Matrix<Scalar>::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diagonal[i];
    for (Eigen::Index i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = off_diagonal[i];
    return m;
  }

  template <class Other>
  TridiagonalMatrix<Other> cast() const {
    return TridiagonalMatrix<Other>(diagonal.template cast<Other>(), off_diagonal.template cast<Other>());
  }
};

/// Single-excitation Hamiltonian: H_{i,i+1} = J_i, H_11 = H_NN = h, zero
/// elsewhere on the diagonal.
template <class Scalar = double>
TridiagonalMatrix<Scalar> build_hamiltonian(const ChainSpec& spec) {
  const int n = spec.n_sites();
  Vector<Scalar> diag = Vector<Scalar>::Constant(n, Scalar(0.0));
  Vector<Scalar> off(n - 1);
  diag[0] = Scalar(spec.boundary_field());
  diag[n - 1] = Scalar(spec.boundary_field());
  for (int i = 0; i + 1 < n; ++i) off[i] = Scalar(spec.bond(i));
  return TridiagonalMatrix<Scalar>(std::move(diag), std::move(off));
}

struct ZeroFieldMode {
  int index;  ///< nu = 1..N
  double energy;
  Eigen::VectorXd vector;
};

/// Closed-form eigenpairs of the uniform chain without field:
/// E_nu = 2J cos(nu pi/(N+1)), u_l = sqrt(2/(N+1)) sin(nu pi l/(N+1)).
/// Returned in order nu = 1..N, i.e. descending energy.
std::vector<ZeroFieldMode> zero_field_spectrum(int n_sites, double coupling);

}  // namespace pst
