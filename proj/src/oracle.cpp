#include "qbp/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "qbp/algebra.hpp"

namespace qbp {

double jw_energy_density(double B, double T) {
  if (T < 0.0) throw ConfigError("temperature must be non-negative");
  const double pi = std::acos(-1.0);
  auto integrand = [B, T, pi](double k) {
    const double eps = 2.0 * std::sqrt(std::max(1.0 + B * B - 2.0 * B * std::cos(k), 0.0));
    const double occ = (T == 0.0) ? 1.0 : std::tanh(eps / (2.0 * T));
    return (eps / 2.0) * occ / pi;
  };
  double err = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      integrand, 0.0, pi, /*max_depth=*/15, /*tol=*/1e-13, &err);
  if (err > 1e-12) throw Error("jw quadrature did not reach 1e-12");
  return -integral;
}

ExactThermal::ExactThermal(const InteractionGraph& graph, double beta)
    : graph_(graph), beta_(beta) {
  if (graph.geometry == Geometry::InfiniteChain)
    throw SizeError("exact thermal state needs a finite model");
  if (product_dim(graph.sites) > (Eigen::Index(1) << 14))
    throw SizeError("exact thermal state capped at total dimension 2^14");
  MultiSiteOperator h = global_hamiltonian(graph);
  all_sites_ = h.support();
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  if (es.info() != Eigen::Success) throw Error("exact diagonalization failed");
  eigenvalues_ = es.eigenvalues();
  eigenvectors_ = es.eigenvectors();
  e0_ = eigenvalues_.minCoeff();
}

double ExactThermal::log_z() const {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i)
    acc += std::exp(-beta_ * (eigenvalues_(i) - e0_));
  return std::log(acc) - beta_ * e0_;
}

double ExactThermal::energy() const {
  double z = 0.0, ez = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i) {
    const double w = std::exp(-beta_ * (eigenvalues_(i) - e0_));
    z += w;
    ez += eigenvalues_(i) * w;
  }
  return ez / z;
}

MultiSiteOperator ExactThermal::thermal_state() const {
  RealVector w(eigenvalues_.size());
  double z = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    w(i) = std::exp(-beta_ * (eigenvalues_(i) - e0_));
    z += w(i);
  }
  w /= z;
  Matrix rho = eigenvectors_ * w.asDiagonal() * eigenvectors_.adjoint();
  rho = (rho + rho.adjoint().eval()) / 2.0;
  return MultiSiteOperator(all_sites_, std::move(rho), true, true);
}

MultiSiteOperator ExactThermal::reduced_state(const std::vector<int>& kept_sites) const {
  std::vector<int> traced;
  for (const Site& s : all_sites_)
    if (std::find(kept_sites.begin(), kept_sites.end(), s.index) == kept_sites.end())
      traced.push_back(s.index);
  return partial_trace(thermal_state(), traced);
}

double ExactThermal::expectation(const MultiSiteOperator& op) const {
  MultiSiteOperator rho = reduced_state([&] {
    std::vector<int> kept;
    for (const Site& s : op.support()) kept.push_back(s.index);
    return kept;
  }());
  return (rho.matrix() * op.matrix()).trace().real();
}

MultiSiteOperator ExactThermal::effective_potential(const std::vector<int>& kept_sites) const {
  MultiSiteOperator rho = reduced_state(kept_sites);
  MultiSiteOperator h_eff = Complex(-1.0 / beta_, 0.0) * herm_log(rho);
  MultiSiteOperator bare = MultiSiteOperator::zero(rho.support());
  for (const Edge& e : graph_.edges) {
    const bool a_in = std::find(kept_sites.begin(), kept_sites.end(), e.a) != kept_sites.end();
    const bool b_in = std::find(kept_sites.begin(), kept_sites.end(), e.b) != kept_sites.end();
    if (a_in && b_in) bare += embed(e.term, rho.support());
  }
  return (h_eff - bare).traceless();
}

ClassicalEnumeration classical_enumerate(const InteractionGraph& graph, double beta) {
  if (graph.geometry == Geometry::InfiniteChain)
    throw SizeError("classical enumeration needs a finite model");
  const int n = static_cast<int>(graph.sites.size());
  if (n > 24) throw SizeError("classical enumeration capped at 24 spins");

  // Verify diagonality and collect per-edge energy tables e(x_a, x_b).
  struct DiagEdge {
    int pa, pb;  // positions in the site list
    Eigen::Matrix2d e;
  };
  std::vector<Site> order = graph.sites;
  std::sort(order.begin(), order.end());
  auto position = [&order](int index) {
    for (size_t i = 0; i < order.size(); ++i)
      if (order[i].index == index) return static_cast<int>(i);
    throw SupportError("edge endpoint not in site list");
  };
  std::vector<DiagEdge> diag_edges;
  for (const Edge& e : graph.edges) {
    const Matrix& m = e.term.matrix();
    if ((m - Matrix(m.diagonal().asDiagonal())).norm() > 1e-12 * std::max(1.0, m.norm()))
      throw ContractError("classical enumeration requires diagonal edge terms");
    DiagEdge d;
    d.pa = position(e.a);
    d.pb = position(e.b);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) d.e(x, y) = m(2 * x + y, 2 * x + y).real();
    diag_edges.push_back(d);
  }

  // Energies of all configurations; bit i of the configuration word is the
  // state of site order[i] (0 = up in the sigma^z basis used by the matrices).
  const long n_conf = 1L << n;
  std::vector<double> energy(n_conf);
  double e_min = 0.0;
  for (long conf = 0; conf < n_conf; ++conf) {
    double e = 0.0;
    for (const DiagEdge& d : diag_edges) {
      const int xa = (conf >> (n - 1 - d.pa)) & 1;
      const int xb = (conf >> (n - 1 - d.pb)) & 1;
      e += d.e(xa, xb);
    }
    energy[conf] = e;
    if (conf == 0 || e < e_min) e_min = e;
  }

  ClassicalEnumeration out;
  double z = 0.0, ez = 0.0;
  std::vector<Eigen::Vector2d> m1(n, Eigen::Vector2d::Zero());
  std::map<std::pair<int, int>, Eigen::Matrix2d> m2;
  for (const Edge& e : graph.edges) m2[{e.a, e.b}] = Eigen::Matrix2d::Zero();

  for (long conf = 0; conf < n_conf; ++conf) {
    const double w = std::exp(-beta * (energy[conf] - e_min));
    z += w;
    ez += w * energy[conf];
    for (int i = 0; i < n; ++i) m1[i]((conf >> (n - 1 - i)) & 1) += w;
    for (const Edge& e : graph.edges) {
      const int xa = (conf >> (n - 1 - position(e.a))) & 1;
      const int xb = (conf >> (n - 1 - position(e.b))) & 1;
      m2[{e.a, e.b}](xa, xb) += w;
    }
  }

  out.log_z = std::log(z) - beta * e_min;
  out.energy = ez / z;
  for (int i = 0; i < n; ++i) out.marginals1[order[i].index] = m1[i] / z;
  for (auto& [key, table] : m2) out.marginals2[key] = table / z;
  return out;
}

}  // namespace qbp
