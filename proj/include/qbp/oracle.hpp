#pragma once

#include <map>
#include <string>

#include "qbp/models.hpp"
#include "qbp/operator.hpp"

namespace qbp {

/// Energy density of the infinite transverse-field Ising chain
/// H = sum_i sigma^z_i sigma^z_{i+1} + B sigma^x_i at temperature T, from the
/// Jordan-Wigner free-fermion dispersion eps(k) = 2 sqrt(1 + B^2 - 2B cos k).
/// The sublattice rotation bridging the +zz convention to the free-fermion
/// form happens here, so callers compare in the model's own convention.
/// T = 0 returns the ground-state energy density.
double jw_energy_density(double B, double T);

/// Exact thermal equilibrium of a finite model via full diagonalization.
/// Total Hilbert dimension is capped at 2^14.
class ExactThermal {
 public:
  ExactThermal(const InteractionGraph& graph, double beta);

  double beta() const { return beta_; }
  double log_z() const;
  double energy() const;
  /// Thermal density operator e^{-beta H}/Z.
  MultiSiteOperator thermal_state() const;
  /// Reduced thermal state on the kept sites.
  MultiSiteOperator reduced_state(const std::vector<int>& kept_sites) const;
  double expectation(const MultiSiteOperator& op) const;

  /// Effective thermal potential induced on the kept sites by tracing the
  /// rest: traceless(-(1/beta) Log rho_kept - bare terms inside the kept set).
  MultiSiteOperator effective_potential(const std::vector<int>& kept_sites) const;

 private:
  const InteractionGraph& graph_;
  double beta_;
  std::vector<Site> all_sites_;
  RealVector eigenvalues_;
  Matrix eigenvectors_;
  double e0_;  // ground energy, used to stabilize exponentials
};

/// Exact partition function and marginals of a diagonal (classical) model by
/// direct configuration sum; capped at 24 spins.
struct ClassicalEnumeration {
  double log_z = 0.0;
  double energy = 0.0;
  /// P(x_i) for every site, keyed by site index.
  std::map<int, Eigen::Vector2d> marginals1;
  /// P(x_a, x_b) for every edge, keyed by (a, b); rows index x_a.
  std::map<std::pair<int, int>, Eigen::Matrix2d> marginals2;
};

ClassicalEnumeration classical_enumerate(const InteractionGraph& graph, double beta);

}  // namespace qbp
