#include <doctest.h>

#include "theon/density.hpp"
#include "theon/rng.hpp"
#include "theon/sampler.hpp"
#include "theon/stats.hpp"

using namespace theon;

namespace {

Injection random_injection(VertexSetPtr dom, VertexSetPtr cod, std::uint64_t key) {
  std::vector<std::uint8_t> pool(cod->size());
  for (int i = 0; i < cod->size(); ++i) pool[i] = static_cast<std::uint8_t>(i);
  Injection a;
  a.dom = dom;
  a.cod = cod;
  for (int i = 0; i < dom->size(); ++i) {
    std::uint32_t j = rng::below(rng::key_of({key, static_cast<std::uint64_t>(i)}),
                                 static_cast<std::uint32_t>(pool.size()));
    a.map.push_back(pool[j]);
    pool.erase(pool.begin() + j);
  }
  return a;
}

}  // namespace

TEST_CASE("realize_structure basic cases") {
  EuclideanStructure qr = gallery("qr_graph");
  std::map<Subset, Coord> coords{{1, Coord{{0.6}, {}}},
                                 {2, Coord{{0.6}, {}}},
                                 {3, Coord{{0.2}, {}}}};
  Point x = Point::materialized(VertexSet::range(2), qr.desc, coords);
  Structure st = realize_structure(qr, x);
  CHECK(st.holds(0, {0, 1}));
  CHECK(st.holds(0, {1, 0}));

  // empty language: just the bare vertex set
  EuclideanStructure bare;
  bare.lang = Language::of({});
  bare.desc = SpaceDescriptor{1, 0};
  Structure b = sample_structure(bare, VertexSet::range(3), 1);
  CHECK(b.vertices->size() == 3);
  CHECK(b.rels.empty());
}

TEST_CASE("oriented samples satisfy the orientation axioms") {
  for (const char* name : {"kqrO_1theon", "kqrO_0theon"}) {
    EuclideanStructure n = gallery(name, 2);
    for (std::uint64_t t = 0; t < 2000; ++t) {
      Structure st = sample_structure(n, VertexSet::range(3),
                                      rng::key_of({21, rng::hash_bytes(name), t}));
      CHECK(is_k_orientation(st));
    }
  }
}

TEST_CASE("sampling distributions: uniform graphs, tournaments, orientations") {
  const int n = 100000;
  {
    EuclideanStructure qr = gallery("qr_graph");
    std::map<Structure, std::uint64_t> counts;
    for (int t = 0; t < n; ++t)
      counts[sample_structure(qr, VertexSet::range(3),
                              rng::key_of({31, static_cast<std::uint64_t>(t)}))] += 1;
    CHECK(counts.size() == 8);
    std::vector<std::uint64_t> c;
    for (const auto& [st, v] : counts) c.push_back(v);
    CHECK(stats::chisq_uniform(c).p_value > 0.01);
  }
  {
    EuclideanStructure qrt = gallery("qr_tournament_0");
    std::map<Structure, std::uint64_t> counts;
    for (int t = 0; t < n; ++t)
      counts[sample_structure(qrt, VertexSet::range(3),
                              rng::key_of({32, static_cast<std::uint64_t>(t)}))] += 1;
    CHECK(counts.size() == 8);  // the 8 labeled tournaments on 3 vertices
    for (const auto& [st, v] : counts) CHECK(is_k_orientation(st));
    std::vector<std::uint64_t> c;
    for (const auto& [st, v] : counts) c.push_back(v);
    CHECK(stats::chisq_uniform(c).p_value > 0.01);
  }
  {
    EuclideanStructure o3 = gallery("kqrO_0theon", 3);
    std::map<Structure, std::uint64_t> counts;
    const int m = 60000;
    for (int t = 0; t < m; ++t)
      counts[sample_structure(o3, VertexSet::range(3),
                              rng::key_of({33, static_cast<std::uint64_t>(t)}))] += 1;
    CHECK(counts.size() == 6);
    for (const auto& [st, v] : counts)
      CHECK(std::abs(static_cast<double>(v) / m - 1.0 / 6.0) < 0.01);
  }
}

TEST_CASE("conditional sampling matches the flat and skewed regimes") {
  EuclideanStructure disc = gallery("disc_3hypergraph");

  // any unary pinning keeps the 3-edge probability at 1/2
  {
    VertexSetPtr vs = VertexSet::range(3);
    PartialPoint pins;
    pins.vs = vs;
    pins.desc = disc.desc;
    pins.pins[0b001] = Coord{{0.83}, {}};
    pins.pins[0b010] = Coord{{0.12}, {}};
    pins.pins[0b100] = Coord{{0.37}, {}};
    int edges = 0;
    const int n = 10000;
    for (int t = 0; t < n; ++t) {
      Structure st = sample_conditional(disc, vs, pins,
                                        rng::key_of({41, static_cast<std::uint64_t>(t)}));
      if (!st.rels[0].empty()) ++edges;
    }
    CHECK(std::abs(edges / static_cast<double>(n) - 0.5) < 0.015);
  }

  // all unary values below 1/2: the conditional law is uniform over all
  // 3-hypergraphs on 4 vertices
  {
    VertexSetPtr vs = VertexSet::range(4);
    PartialPoint pins;
    pins.vs = vs;
    pins.desc = disc.desc;
    for (Subset a : r_sets(4, 1)) pins.pins[a] = Coord{{0.2}, {}};
    std::map<Structure, std::uint64_t> counts;
    const int n = 32000;
    for (int t = 0; t < n; ++t)
      counts[sample_conditional(disc, vs, pins,
                                rng::key_of({42, static_cast<std::uint64_t>(t)}))] += 1;
    CHECK(counts.size() == 16);
    std::vector<std::uint64_t> c;
    for (const auto& [st, v] : counts) c.push_back(v);
    CHECK(stats::chisq_uniform(c).p_value > 0.01);
  }

  // all unary values at least 1/2: an odd number of 3-edges never appears
  {
    VertexSetPtr vs = VertexSet::range(4);
    PartialPoint pins;
    pins.vs = vs;
    pins.desc = disc.desc;
    for (Subset a : r_sets(4, 1)) pins.pins[a] = Coord{{0.8}, {}};
    for (int t = 0; t < 10000; ++t) {
      Structure st = sample_conditional(disc, vs, pins,
                                        rng::key_of({43, static_cast<std::uint64_t>(t)}));
      CHECK((st.rels[0].size() / 6) % 2 == 0);  // 6 tuples per symmetric 3-edge
    }
  }
}

TEST_CASE("realization is equivariant under pullbacks") {
  EuclideanStructure qr = gallery("qr_graph");
  EuclideanStructure o2 = gallery("kqrO_1theon", 2);
  VertexSetPtr v4 = VertexSet::range(4);
  VertexSetPtr v3 = VertexSet::range(3);
  for (const EuclideanStructure* n : {&qr, &o2}) {
    for (std::uint64_t t = 0; t < 500; ++t) {
      Point x = Point::sampled(v4, n->desc, rng::key_of({51, t}));
      Injection alpha = random_injection(v3, v4, rng::key_of({52, t}));
      Structure lhs = realize_structure(*n, pullback_point(alpha, x));
      Structure rhs = pullback_structure(alpha, realize_structure(*n, x));
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("exact tables are exchangeable and local") {
  // exchangeability: the table is invariant under every vertex permutation
  for (const char* name : {"qr_graph", "disc_3hypergraph"}) {
    EuclideanStructure n = gallery(name);
    VertexSetPtr v3 = VertexSet::range(3);
    DistributionTable t = distribution_exact(n, v3);
    for (const Perm& p : all_perms(3)) {
      Injection alpha;
      alpha.dom = v3;
      alpha.cod = v3;
      alpha.map.assign(p.begin(), p.end());
      for (const auto& [st, prob] : t.probs)
        CHECK(t.exact_prob(pullback_structure(alpha, st)) == prob);
    }
  }

  // locality: restrictions to disjoint vertex sets are independent
  EuclideanStructure qr = gallery("qr_graph");
  VertexSetPtr v4 = VertexSet::range(4);
  DistributionTable t4 = distribution_exact(qr, v4);
  Injection a01 = Injection::order_preserving(v4, 0b0011);
  Injection a23 = Injection::order_preserving(v4, 0b1100);
  std::map<std::pair<Structure, Structure>, Rational> joint;
  std::map<Structure, Rational> ma, mb;
  for (const auto& [st, p] : t4.probs) {
    Structure ra = pullback_structure(a01, st);
    Structure rb = pullback_structure(a23, st);
    joint[{ra, rb}] += p;
    ma[ra] += p;
    mb[rb] += p;
  }
  for (const auto& [pair, p] : joint)
    CHECK(p == ma.at(pair.first) * mb.at(pair.second));
}

TEST_CASE("sampling is reproducible and lazy points agree with materialized") {
  EuclideanStructure qr = gallery("qr_graph");
  Structure a = sample_structure(qr, VertexSet::range(5), 77);
  Structure b = sample_structure(qr, VertexSet::range(5), 77);
  CHECK(a == b);

  Limits saved = limits();
  limits().lazy_point_threshold = 0;  // force the streaming path
  Structure c = sample_structure(qr, VertexSet::range(5), 77);
  limits() = saved;
  CHECK(a == c);
}
