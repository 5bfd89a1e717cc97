#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "qbp/operator.hpp"

namespace qbp {

enum class Geometry { Chain, InfiniteChain, CayleyTree };

/// Two-body interaction term between sites a and b (a < b).
struct Edge {
  int a = 0;
  int b = 0;
  MultiSiteOperator term;  // Hermitian, supported on exactly {a, b}
};

/// Random boundary fields r_i in [-1, 1] on the leaves of a Cayley tree.
struct BoundaryFieldConfig {
  std::map<int, double> values;
  uint64_t seed = 0;
};

/// A lattice model as an interaction graph with two-body Hermitian edge terms.
/// One-body fields are absorbed into edge terms (equal split among incident
/// edges; sole edges carry full weight), so BP sees purely two-body factors.
struct InteractionGraph {
  std::vector<Site> sites;
  std::vector<Edge> edges;
  Geometry geometry = Geometry::Chain;

  // Cayley-tree metadata (depth in generations; parent/children maps).
  int tree_depth = 0;
  std::map<int, int> parent;                 // node -> parent (center absent)
  std::map<int, std::vector<int>> children;  // node -> children
  std::optional<BoundaryFieldConfig> boundary_fields;

  const Site& site(int index) const;
  const Edge& edge_between(int a, int b) const;
  std::vector<int> boundary_sites() const;  // leaves, for trees
};

/// Transverse-field Ising chain H = sum_i sigma^z_i sigma^z_{i+1} + B sigma^x_i.
/// Finite chains (n >= 2) fold each site's field into its incident bonds;
/// the infinite chain is a single translation-invariant edge template on (0,1).
InteractionGraph tfim_chain(double B, int n);
InteractionGraph tfim_chain_infinite(double B);

/// Degree-3 Cayley tree Ising glass with transverse field B and random
/// parallel boundary fields on the leaves.
InteractionGraph cayley_glass(double B, int depth, const BoundaryFieldConfig& config);

/// Draw i.i.d. boundary fields uniform on [-1, 1] for the graph's leaves.
BoundaryFieldConfig sample_boundary_fields(uint64_t seed, const InteractionGraph& graph);

/// Bare structure of the tree (sites and adjacency) without edge terms;
/// used to enumerate leaves before fields are drawn.
InteractionGraph cayley_skeleton(int depth);

/// Sum of all embedded edge terms: the global Hamiltonian of a finite graph.
MultiSiteOperator global_hamiltonian(const InteractionGraph& graph);

/// Serialize the graph (sites, Pauli-polynomial edge terms, seed) to JSON text.
std::string graph_to_json(const InteractionGraph& graph);

}  // namespace qbp
