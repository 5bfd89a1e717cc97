#pragma once

#include "qbp/operator.hpp"

namespace qbp {

/// Eigendecomposition of a Hermitian operator (ascending eigenvalues).
struct EigSystem {
  RealVector values;
  Matrix vectors;
};

EigSystem herm_eig(const MultiSiteOperator& op);

/// e^{-beta H} for Hermitian H, via full eigendecomposition.
MultiSiteOperator herm_exp(const MultiSiteOperator& h, double beta);

/// Principal logarithm of a positive operator. Eigenvalues below
/// 1e-14 * (max eigenvalue) are clamped up to that floor; thermal operators at
/// large beta are numerically rank-deficient and the log must stay finite.
/// With clamping disabled, a non-positive eigenvalue raises SingularityError.
MultiSiteOperator herm_log(const MultiSiteOperator& a, bool clamp = true);

/// odot-product of positive operators: exp(Log A + Log B) on the union support.
MultiSiteOperator odot(const MultiSiteOperator& a, const MultiSiteOperator& b);

/// exp(K) for Hermitian K, computed as e^{K - mu} with mu = max eigenvalue so
/// the returned matrix never overflows; mu is reported to the caller.
/// BP message pipelines use this and track mu in their log-normalizations.
MultiSiteOperator herm_exp_shifted(const MultiSiteOperator& k, double& mu);

/// Operator norm (largest absolute eigenvalue) of a Hermitian operator.
double op_norm(const MultiSiteOperator& op);

/// Trace distance (1/2)||A - B||_1 between Hermitian operators on one support.
double trace_distance(const MultiSiteOperator& a, const MultiSiteOperator& b);

/// Von Neumann entropy -sum p ln p of a positive trace-1 operator.
double von_neumann_entropy(const MultiSiteOperator& rho);

/// Conditional mutual information I(a:c|b) = S(ab) + S(bc) - S(b) - S(abc)
/// of a positive trace-1 state whose support is the disjoint union of a, b, c.
/// Small negative values from eigenvalue noise are clamped to zero;
/// returns a value >= -1e-9 before clamping is considered a contract failure.
double conditional_mutual_information(const MultiSiteOperator& rho, const std::vector<int>& a,
                                      const std::vector<int>& b, const std::vector<int>& c);

/// Union of two ascending site lists; dims must agree on shared sites.
std::vector<Site> support_union(const std::vector<Site>& a, const std::vector<Site>& b);

}  // namespace qbp
