#include "qbp/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace qbp {

EigSystem herm_eig(const MultiSiteOperator& op) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.matrix());
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed to converge");
  return EigSystem{es.eigenvalues(), es.eigenvectors()};
}

MultiSiteOperator herm_exp(const MultiSiteOperator& h, double beta) {
  const double scale = h.matrix().norm();
  if ((h.matrix() - h.matrix().adjoint()).norm() > 1e-12 * std::max(scale, 1.0))
    throw ContractError("herm_exp requires a Hermitian operator");
  EigSystem es = herm_eig(h);
  RealVector w(es.values.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::exp(-beta * es.values(i));
  Matrix m = es.vectors * w.asDiagonal() * es.vectors.adjoint();
  // Symmetrize away the eigensolver's rounding so downstream contracts hold.
  m = (m + m.adjoint().eval()) / 2.0;
  return MultiSiteOperator(h.support(), std::move(m), true, true);
}

MultiSiteOperator herm_log(const MultiSiteOperator& a, bool clamp) {
  EigSystem es = herm_eig(a);
  const double max_eig = es.values.maxCoeff();
  if (max_eig <= 0.0) throw SingularityError("herm_log of a non-positive operator");
  const double floor = 1e-14 * max_eig;
  RealVector w(es.values.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    double v = es.values(i);
    if (v < floor) {
      if (!clamp) throw SingularityError("herm_log eigenvalue below floor with clamping disabled");
      v = floor;
    }
    w(i) = std::log(v);
  }
  Matrix m = es.vectors * w.asDiagonal() * es.vectors.adjoint();
  m = (m + m.adjoint().eval()) / 2.0;
  return MultiSiteOperator(a.support(), std::move(m), true, false);
}

MultiSiteOperator odot(const MultiSiteOperator& a, const MultiSiteOperator& b) {
  const std::vector<Site> target = support_union(a.support(), b.support());
  MultiSiteOperator log_a = embed(herm_log(a), target);
  MultiSiteOperator log_b = embed(herm_log(b), target);
  return herm_exp(log_a + log_b, -1.0);
}

MultiSiteOperator herm_exp_shifted(const MultiSiteOperator& k, double& mu) {
  EigSystem es = herm_eig(k);
  mu = es.values.maxCoeff();
  RealVector w(es.values.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::exp(es.values(i) - mu);
  Matrix m = es.vectors * w.asDiagonal() * es.vectors.adjoint();
  m = (m + m.adjoint().eval()) / 2.0;
  return MultiSiteOperator(k.support(), std::move(m), true, true);
}

double op_norm(const MultiSiteOperator& op) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.matrix(), Eigen::EigenvaluesOnly);
  return std::max(std::abs(es.eigenvalues().maxCoeff()), std::abs(es.eigenvalues().minCoeff()));
}

double trace_distance(const MultiSiteOperator& a, const MultiSiteOperator& b) {
  if (a.support() != b.support()) throw SupportError("trace_distance requires identical supports");
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double von_neumann_entropy(const MultiSiteOperator& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 1e-300) s -= p * std::log(p);
  }
  return s;
}

double conditional_mutual_information(const MultiSiteOperator& rho, const std::vector<int>& a,
                                      const std::vector<int>& b, const std::vector<int>& c) {
  std::vector<int> all;
  all.insert(all.end(), a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  all.insert(all.end(), c.begin(), c.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw SupportError("CMI regions must be disjoint");
  if (static_cast<int>(all.size()) != rho.n_sites())
    throw SupportError("CMI regions must cover the state's support");
  if (std::abs(rho.trace() - Complex(1, 0)) > 1e-10)
    throw NormalizationError("CMI requires a trace-1 state");

  auto marginal_entropy = [&rho](const std::vector<int>& traced) {
    if (traced.empty()) return von_neumann_entropy(rho);
    return von_neumann_entropy(partial_trace(rho, traced));
  };

  const double s_ab = marginal_entropy(c);
  const double s_bc = marginal_entropy(a);
  std::vector<int> ac = a;
  ac.insert(ac.end(), c.begin(), c.end());
  const double s_b = marginal_entropy(ac);
  const double s_abc = von_neumann_entropy(rho);

  const double cmi = s_ab + s_bc - s_b - s_abc;
  if (cmi < -1e-9) throw ContractError("conditional mutual information below -1e-9");
  return std::max(cmi, 0.0);
}

std::vector<Site> support_union(const std::vector<Site>& a, const std::vector<Site>& b) {
  std::vector<Site> out;
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].index < b[j].index)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].index < a[i].index) {
      out.push_back(b[j++]);
    } else {
      if (a[i].dim != b[j].dim)
        throw DimensionError("shared site has conflicting dimensions in support union");
      out.push_back(a[i]);
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace qbp
