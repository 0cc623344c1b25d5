#include "pst/chain_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace pst {
namespace {

void validate_scalars(int n_sites, double coupling, double boundary_field) {
  if (n_sites < 2) throw InvalidSpec("n_sites must be >= 2, got " + std::to_string(n_sites));
  if (!(coupling > 0.0) || !std::isfinite(coupling)) {
    throw InvalidSpec("coupling must be finite and > 0");
  }
  if (!(boundary_field >= 0.0) || !std::isfinite(boundary_field)) {
    throw InvalidSpec("boundary_field must be finite and >= 0");
  }
}

}  // namespace

ChainSpec::ChainSpec(int n_sites, double coupling, double boundary_field)
    : n_sites_(n_sites), coupling_(coupling), boundary_field_(boundary_field) {
  validate_scalars(n_sites, coupling, boundary_field);
}

ChainSpec::ChainSpec(int n_sites, double coupling, double boundary_field, std::vector<double> bond_couplings)
    : n_sites_(n_sites), coupling_(coupling), boundary_field_(boundary_field) {
  validate_scalars(n_sites, coupling, boundary_field);
  if (static_cast<int>(bond_couplings.size()) != n_sites - 1) {
    throw InvalidSpec("bond_couplings must have exactly n_sites - 1 entries");
  }
  for (double b : bond_couplings) {
    if (b == 0.0 || !std::isfinite(b)) throw InvalidSpec("bond couplings must be finite and nonzero");
  }
  bond_couplings_ = std::move(bond_couplings);
}

bool ChainSpec::is_uniform() const {
  if (!bond_couplings_) return true;
  return std::all_of(bond_couplings_->begin(), bond_couplings_->end(),
                     [this](double b) { return b == coupling_; });
}

void ChainSpec::require_uniform() const {
  if (!is_uniform()) {
    throw InvalidArgument("closed-form results require uniform couplings");
  }
}

std::vector<ZeroFieldMode> zero_field_spectrum(int n_sites, double coupling) {
  if (n_sites < 2) throw InvalidArgument("zero_field_spectrum: n_sites must be >= 2");
  if (!(coupling > 0.0)) throw InvalidArgument("zero_field_spectrum: coupling must be > 0");

  const double np1 = n_sites + 1;
  const double norm = std::sqrt(2.0 / np1);
  std::vector<ZeroFieldMode> modes;
  modes.reserve(n_sites);
  for (int nu = 1; nu <= n_sites; ++nu) {
    ZeroFieldMode mode{nu, 2.0 * coupling * std::cos(nu * std::numbers::pi / np1), Eigen::VectorXd(n_sites)};
    for (int l = 1; l <= n_sites; ++l) {
      mode.vector[l - 1] = norm * std::sin(nu * std::numbers::pi * l / np1);
    }
    modes.push_back(std::move(mode));
  }
  return modes;
}

}  // namespace pst
