#include "qbp/models.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "qbp/rng.hpp"

namespace qbp {

namespace {

constexpr Eigen::Index kGlobalDimCap = Eigen::Index(1) << 20;

MultiSiteOperator bond_term(int a, int b, double field_a, double field_b, double leaf_field_b) {
  std::vector<Site> sup{{a, 2}, {b, 2}};
  Matrix zz(4, 4), xa(4, 4), xb(4, 4), zb(4, 4);
  auto kron2 = [](const Matrix& p, const Matrix& q) {
    Matrix out(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.block(2 * i, 2 * j, 2, 2) = p(i, j) * q;
    return out;
  };
  zz = kron2(pauli_z(), pauli_z());
  xa = kron2(pauli_x(), pauli_id());
  xb = kron2(pauli_id(), pauli_x());
  zb = kron2(pauli_id(), pauli_z());
  Matrix m = zz + field_a * xa + field_b * xb + leaf_field_b * zb;
  return MultiSiteOperator::hermitian(std::move(sup), std::move(m));
}

}  // namespace

const Site& InteractionGraph::site(int index) const {
  for (const Site& s : sites)
    if (s.index == index) return s;
  throw SupportError("graph has no site " + std::to_string(index));
}

const Edge& InteractionGraph::edge_between(int a, int b) const {
  for (const Edge& e : edges)
    if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return e;
  throw SupportError("graph has no edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
}

std::vector<int> InteractionGraph::boundary_sites() const {
  std::vector<int> leaves;
  for (const Site& s : sites) {
    const bool has_kids = children.count(s.index) && !children.at(s.index).empty();
    if (geometry == Geometry::CayleyTree && !has_kids) leaves.push_back(s.index);
  }
  return leaves;
}

InteractionGraph tfim_chain(double B, int n) {
  if (n < 2) throw SizeError("tfim_chain needs at least 2 sites");
  InteractionGraph g;
  g.geometry = Geometry::Chain;
  for (int i = 0; i < n; ++i) g.sites.push_back({i, 2});
  for (int i = 0; i + 1 < n; ++i) {
    const double fa = (i == 0) ? B : B / 2.0;
    const double fb = (i + 1 == n - 1) ? B : B / 2.0;
    g.edges.push_back({i, i + 1, bond_term(i, i + 1, fa, fb, 0.0)});
  }
  return g;
}

InteractionGraph tfim_chain_infinite(double B) {
  InteractionGraph g;
  g.geometry = Geometry::InfiniteChain;
  g.sites = {{0, 2}, {1, 2}};
  g.edges.push_back({0, 1, bond_term(0, 1, B / 2.0, B / 2.0, 0.0)});
  return g;
}

InteractionGraph cayley_skeleton(int depth) {
  if (depth < 1) throw SizeError("cayley tree needs depth >= 1");
  InteractionGraph g;
  g.geometry = Geometry::CayleyTree;
  g.tree_depth = depth;

  g.sites.push_back({0, 2});
  std::vector<int> frontier{0};
  int next_id = 1;
  for (int gen = 1; gen <= depth; ++gen) {
    std::vector<int> next_frontier;
    for (int node : frontier) {
      const int n_kids = (gen == 1) ? 3 : 2;
      for (int k = 0; k < n_kids; ++k) {
        const int id = next_id++;
        g.sites.push_back({id, 2});
        g.parent[id] = node;
        g.children[node].push_back(id);
        next_frontier.push_back(id);
      }
    }
    frontier = std::move(next_frontier);
  }
  return g;
}

InteractionGraph cayley_glass(double B, int depth, const BoundaryFieldConfig& config) {
  InteractionGraph g = cayley_skeleton(depth);
  g.boundary_fields = config;

  auto degree = [&g](int node) {
    int d = g.parent.count(node) ? 1 : 0;
    if (g.children.count(node)) d += static_cast<int>(g.children.at(node).size());
    return d;
  };

  for (const auto& [child, par] : g.parent) {
    const bool child_is_leaf = !g.children.count(child) || g.children.at(child).empty();
    double leaf_field = 0.0;
    if (child_is_leaf) {
      auto it = config.values.find(child);
      if (it == config.values.end())
        throw ConfigError("boundary field missing for leaf " + std::to_string(child));
      if (std::abs(it->second) > 1.0)
        throw ConfigError("boundary field outside [-1, 1] on leaf " + std::to_string(child));
      leaf_field = it->second;
    }
    // parent ids precede children in BFS order, so (par, child) is canonical
    g.edges.push_back({par, child,
                       bond_term(par, child, B / degree(par), B / degree(child), leaf_field)});
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  return g;
}

BoundaryFieldConfig sample_boundary_fields(uint64_t seed, const InteractionGraph& graph) {
  std::vector<int> leaves = graph.boundary_sites();
  if (leaves.empty()) throw ConfigError("graph has no boundary sites to sample fields on");
  std::sort(leaves.begin(), leaves.end());
  BoundaryFieldConfig cfg;
  cfg.seed = seed;
  Rng rng(seed);
  for (int leaf : leaves) cfg.values[leaf] = rng.uniform_sym();
  return cfg;
}

MultiSiteOperator global_hamiltonian(const InteractionGraph& graph) {
  if (graph.geometry == Geometry::InfiniteChain)
    throw SizeError("global Hamiltonian of an infinite chain is not a finite matrix");
  if (product_dim(graph.sites) > kGlobalDimCap)
    throw SizeError("global Hamiltonian dimension above cap");
  std::vector<Site> all = graph.sites;
  std::sort(all.begin(), all.end());
  MultiSiteOperator h = MultiSiteOperator::zero(all);
  for (const Edge& e : graph.edges) h += embed(e.term, all);
  return h;
}

namespace {

const char* geometry_name(Geometry g) {
  switch (g) {
    case Geometry::Chain: return "chain";
    case Geometry::InfiniteChain: return "infinite-chain";
    case Geometry::CayleyTree: return "cayley-tree";
  }
  return "unknown";
}

nlohmann::json pauli_polynomial(const MultiSiteOperator& term) {
  static const char* labels = "IXYZ";
  const Matrix paulis[4] = {pauli_id(), pauli_x(), pauli_y(), pauli_z()};
  nlohmann::json out = nlohmann::json::object();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Matrix basis(4, 4);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) basis.block(2 * i, 2 * j, 2, 2) = paulis[a](i, j) * paulis[b];
      const Complex c = (basis.adjoint() * term.matrix()).trace() / 4.0;
      if (std::abs(c) > 1e-14) {
        std::string key{labels[a], labels[b]};
        out[key] = c.real();
      }
    }
  return out;
}

}  // namespace

std::string graph_to_json(const InteractionGraph& graph) {
  nlohmann::json j;
  j["geometry"] = geometry_name(graph.geometry);
  j["sites"] = nlohmann::json::array();
  for (const Site& s : graph.sites) j["sites"].push_back({{"index", s.index}, {"dim", s.dim}});
  j["edges"] = nlohmann::json::array();
  for (const Edge& e : graph.edges) {
    nlohmann::json je{{"sites", {e.a, e.b}}};
    if (e.term.support()[0].dim == 2 && e.term.support()[1].dim == 2) {
      je["pauli"] = pauli_polynomial(e.term);
    } else {
      nlohmann::json rows = nlohmann::json::array();
      for (Eigen::Index r = 0; r < e.term.dim(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < e.term.dim(); ++c)
          row.push_back({e.term.matrix()(r, c).real(), e.term.matrix()(r, c).imag()});
        rows.push_back(row);
      }
      je["matrix"] = rows;
    }
    j["edges"].push_back(je);
  }
  if (graph.geometry == Geometry::CayleyTree) {
    j["depth"] = graph.tree_depth;
    if (graph.boundary_fields) {
      j["boundary_seed"] = graph.boundary_fields->seed;
      nlohmann::json f = nlohmann::json::object();
      for (const auto& [site, r] : graph.boundary_fields->values) f[std::to_string(site)] = r;
      j["boundary_fields"] = f;
    }
  }
  return j.dump(2);
}

}  // namespace qbp
