#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <set>

#include "qbp/models.hpp"
#include "qbp/rng.hpp"
#include "test_oracles.hpp"

using namespace qbp;
namespace oracle = test_oracle;

TEST_CASE("tfim_chain: classical two-site limit is a bare zz bond") {
  InteractionGraph g = tfim_chain(0.0, 2);
  REQUIRE(g.edges.size() == 1);
  Matrix expect = oracle::kron(pauli_z(), pauli_z());
  CHECK((g.edges[0].term.matrix() - expect).norm() < 1e-15);
}

TEST_CASE("tfim_chain: infinite chain is a single translation-invariant template") {
  InteractionGraph g = tfim_chain_infinite(1.0);
  CHECK(g.geometry == Geometry::InfiniteChain);
  REQUIRE(g.edges.size() == 1);
  Matrix expect = oracle::kron(pauli_z(), pauli_z()) +
                  0.5 * oracle::kron(pauli_x(), pauli_id()) +
                  0.5 * oracle::kron(pauli_id(), pauli_x());
  CHECK((g.edges[0].term.matrix() - expect).norm() < 1e-15);
}

TEST_CASE("tfim_chain: edge terms sum to the directly constructed Hamiltonian") {
  const int n = 4;
  const double B = 0.7;
  InteractionGraph g = tfim_chain(B, n);
  MultiSiteOperator h = global_hamiltonian(g);

  Matrix expect = Matrix::Zero(1 << n, 1 << n);
  Matrix zz = oracle::kron(pauli_z(), pauli_z());
  for (int i = 0; i + 1 < n; ++i) expect += oracle::place_on_chain(zz, i, 2, n);
  for (int i = 0; i < n; ++i) expect += B * oracle::place_on_chain(pauli_x(), i, 1, n);
  CHECK((h.matrix() - expect).norm() < 1e-12);
}

TEST_CASE("tfim_chain: fewer than two sites is rejected") {
  CHECK_THROWS_AS(tfim_chain(1.0, 1), SizeError);
}

TEST_CASE("cayley tree: depth 1 is a center with three leaves") {
  InteractionGraph g = cayley_glass(1.0, 1, sample_boundary_fields(7, cayley_skeleton(1)));
  CHECK(g.sites.size() == 4);
  CHECK(g.edges.size() == 3);
  CHECK(g.boundary_sites() == std::vector<int>{1, 2, 3});
}

TEST_CASE("cayley tree: structure is loop-free and connected") {
  for (int depth : {1, 2, 3, 4}) {
    InteractionGraph g = cayley_skeleton(depth);
    CHECK(g.edges.empty());
    // sites = 1 + 3(2^depth - 1), parents = sites - 1
    const int expect_sites = 1 + 3 * ((1 << depth) - 1);
    CHECK(static_cast<int>(g.sites.size()) == expect_sites);
    CHECK(static_cast<int>(g.parent.size()) == expect_sites - 1);
  }
}

TEST_CASE("cayley glass: depth-2 Hamiltonian matches direct construction") {
  const double B = 1.3;
  InteractionGraph skel = cayley_skeleton(2);
  BoundaryFieldConfig fields = sample_boundary_fields(42, skel);
  InteractionGraph g = cayley_glass(B, 2, fields);
  const int n = 10;
  REQUIRE(static_cast<int>(g.sites.size()) == n);

  MultiSiteOperator h = global_hamiltonian(g);

  Matrix expect = Matrix::Zero(1 << n, 1 << n);
  Matrix zz = oracle::kron(pauli_z(), pauli_z());
  for (const auto& [child, par] : g.parent) {
    Matrix bond = Matrix::Zero(1 << n, 1 << n);
    // zz on the (parent, child) pair via explicit single-site placements
    bond = oracle::place_on_chain(pauli_z(), par, 1, n) *
           oracle::place_on_chain(pauli_z(), child, 1, n);
    expect += bond;
  }
  for (const Site& s : g.sites) expect += B * oracle::place_on_chain(pauli_x(), s.index, 1, n);
  for (const auto& [leaf, r] : fields.values)
    expect += r * oracle::place_on_chain(pauli_z(), leaf, 1, n);
  CHECK((h.matrix() - expect).norm() < 1e-12);
}

TEST_CASE("boundary fields: deterministic per seed, fresh per instance stream") {
  InteractionGraph skel = cayley_skeleton(3);
  BoundaryFieldConfig a = sample_boundary_fields(123, skel);
  BoundaryFieldConfig b = sample_boundary_fields(123, skel);
  CHECK(a.values == b.values);
  BoundaryFieldConfig c = sample_boundary_fields(derive_stream_seed(123, 1), skel);
  CHECK(a.values != c.values);
  for (const auto& [site, r] : a.values) {
    CHECK(r >= -1.0);
    CHECK(r < 1.0);
  }
}

TEST_CASE("boundary fields: empirical mean vanishes") {
  InteractionGraph skel = cayley_skeleton(2);
  double acc = 0.0;
  int count = 0;
  for (int inst = 0; inst < 1700; ++inst) {  // 1700 * 6 leaves > 10^4 draws
    BoundaryFieldConfig cfg = sample_boundary_fields(derive_stream_seed(9, inst), skel);
    for (const auto& [site, r] : cfg.values) {
      acc += r;
      ++count;
    }
  }
  CHECK(count >= 10000);
  CHECK(std::abs(acc / count) < 0.02);
}

TEST_CASE("field splitting is gauge invariant at the level of the total Hamiltonian") {
  // Alternative convention: full transverse field on the left endpoint of each
  // bond, none on the right (endpoint corrections at the last site).
  const int n = 5;
  const double B = 0.9;
  InteractionGraph alt = tfim_chain(B, n);
  for (int i = 0; i + 1 < n; ++i) {
    const double fa = B;
    const double fb = (i + 1 == n - 1) ? B : 0.0;
    Matrix m = oracle::kron(pauli_z(), pauli_z()) + fa * oracle::kron(pauli_x(), pauli_id()) +
               fb * oracle::kron(pauli_id(), pauli_x());
    alt.edges[i].term = MultiSiteOperator::hermitian({{i, 2}, {i + 1, 2}}, m);
  }
  MultiSiteOperator h_alt = global_hamiltonian(alt);
  MultiSiteOperator h_std = global_hamiltonian(tfim_chain(B, n));
  CHECK((h_alt.matrix() - h_std.matrix()).norm() < 1e-12);
}

TEST_CASE("graph serialization round-trips through JSON text") {
  InteractionGraph g = tfim_chain(0.7, 3);
  nlohmann::json j = nlohmann::json::parse(graph_to_json(g));
  CHECK(j["geometry"] == "chain");
  CHECK(j["sites"].size() == 3);
  REQUIRE(j["edges"].size() == 2);
  CHECK(j["edges"][0]["pauli"]["ZZ"].get<double>() == doctest::Approx(1.0));
  CHECK(j["edges"][0]["pauli"]["XI"].get<double>() == doctest::Approx(0.7));
  CHECK(j["edges"][0]["pauli"]["IX"].get<double>() == doctest::Approx(0.35));

  InteractionGraph tree = cayley_glass(1.0, 2, sample_boundary_fields(5, cayley_skeleton(2)));
  nlohmann::json jt = nlohmann::json::parse(graph_to_json(tree));
  CHECK(jt["boundary_seed"] == 5);
  CHECK(jt["edges"].size() == 9);
}
