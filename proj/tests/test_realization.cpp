#include <doctest.h>

#include "theon/density.hpp"
#include "theon/realization.hpp"
#include "theon/rng.hpp"
#include "theon/sampler.hpp"
#include "theon/stats.hpp"

using namespace theon;

namespace {

Point pair_point(int k, std::uint64_t seed) {
  return Point::sampled(VertexSet::range(k), SpaceDescriptor{2, 0}, seed);
}

Injection perm_injection(VertexSetPtr vs, const Perm& p) {
  Injection a;
  a.dom = vs;
  a.cod = vs;
  a.map.assign(p.begin(), p.end());
  return a;
}

}  // namespace

TEST_CASE("sigma_sort on the defining examples") {
  // vals[r] is the value of the co-singleton missing local index r
  CHECK(sigma_sort({0.1, 0.9}) == perm_identity(2));   // removing 1 gives the smaller
  CHECK(sigma_sort({0.9, 0.1}) == Perm{1, 0});
  CHECK(sigma_sort({0.5}) == perm_identity(1));
}

TEST_CASE("tau picks lexicographic permutations by scaled floor") {
  CHECK(tau(2, 0.3) == perm_identity(2));
  CHECK(tau(2, 0.7) == Perm{1, 0});
  CHECK(tau(1, 0.99) == perm_identity(1));
  CHECK(tau(3, 0.0) == perm_identity(3));
  CHECK(tau(3, 0.999999) == Perm{2, 1, 0});
}

TEST_CASE("forward level on the worked example") {
  // y_{2} < y_{1} and y_top = 0.7: sigma = id, tau = swap, order = (2,1)
  std::map<Subset, Coord> coords{{0b01, Coord{{0.5, 0.9}, {}}},
                                 {0b10, Coord{{0.5, 0.1}, {}}},
                                 {0b11, Coord{{0.25, 0.7}, {}}}};
  Point x = Point::materialized(VertexSet::range(2), SpaceDescriptor{2, 0}, coords);
  BaseAccess acc(x);
  auto [w, ord] = realize_f(acc);
  CHECK(w == 0.25);
  CHECK(ord.ranked == std::vector<std::uint8_t>{1, 0});
}

TEST_CASE("forward level is symmetric") {
  for (int i : {2, 3, 4}) {
    VertexSetPtr vs = VertexSet::range(i);
    for (std::uint64_t t = 0; t < 250; ++t) {
      Point x = pair_point(i, rng::key_of({81, static_cast<std::uint64_t>(i), t}));
      BaseAccess acc(x);
      auto [w, ord] = realize_f(acc);
      for (const Perm& p : all_perms(i)) {
        Injection sigma = perm_injection(vs, p);
        Point pulled = x.pullback(sigma);
        BaseAccess pacc(pulled);
        auto [w2, ord2] = realize_f(pacc);
        CHECK(w2 == w);
        Order expect;
        for (auto e : ord.ranked) {
          int u = sigma.preimage(e);
          expect.ranked.push_back(static_cast<std::uint8_t>(u));
        }
        CHECK(ord2 == expect);
      }
    }
  }
}

TEST_CASE("inverse level: base case and brute-forced k at level 2") {
  // level 1: k is trivial and h passes the y value through
  {
    std::map<Subset, Coord> coords{{0b1, Coord{{0.3, 0.8}, {Order{{0}}}}}};
    Point x = Point::materialized(VertexSet::range(1), SpaceDescriptor{2, 1}, coords);
    BaseAccess acc(x);
    auto [xv, hv] = realize_g(acc);
    CHECK(xv == 0.3);
    CHECK(hv == 0.8);
  }

  // level 2: the selected k is the unique one satisfying the defining equation
  for (std::uint64_t t = 0; t < 500; ++t) {
    Point x = Point::sampled(VertexSet::range(2), SpaceDescriptor{2, 1},
                             rng::key_of({82, t}));
    HkValues hk = compute_hk(
        0b11, [&](Subset b) { return x.weight(b, 1); },
        [&](Subset b) { return x.order(b, 0); });
    // sigma sorts the two level-1 values
    std::vector<double> co{hk.h.at(0b10), hk.h.at(0b01)};
    Perm sigma = sigma_sort(co);
    Order target = x.order(0b11, 0);
    int matches = 0;
    std::int64_t selected = -1;
    for (std::int64_t kk = 0; kk < 2; ++kk) {
      Perm cand = perm_compose(perm_unrank(2, kk), sigma);
      Order induced = perm_to_order(cand, {0, 1});
      if (induced == target) {
        ++matches;
        selected = kk;
      }
    }
    CHECK(matches == 1);
    CHECK(selected == hk.k.at(0b11));
  }
}

TEST_CASE("h and k are invariant under vertex permutations") {
  for (int i : {2, 3}) {
    VertexSetPtr vs = VertexSet::range(i);
    for (std::uint64_t t = 0; t < 100; ++t) {
      Point x = Point::sampled(vs, SpaceDescriptor{2, 1}, rng::key_of({83, t, static_cast<std::uint64_t>(i)}));
      HkValues base = compute_hk(
          full_subset(i), [&](Subset b) { return x.weight(b, 1); },
          [&](Subset b) { return x.order(b, 0); });
      for (const Perm& p : all_perms(i)) {
        Point pulled = x.pullback(perm_injection(vs, p));
        HkValues moved = compute_hk(
            full_subset(i), [&](Subset b) { return pulled.weight(b, 1); },
            [&](Subset b) { return pulled.order(b, 0); });
        CHECK(moved.h.at(full_subset(i)) == base.h.at(full_subset(i)));
        CHECK(moved.k.at(full_subset(i)) == base.k.at(full_subset(i)));
      }
    }
  }
}

TEST_CASE("h is measure-preserving on the highest-order argument") {
  // fix the lower coordinates, redraw the top; the output must be KS-uniform
  const int i = 3;
  VertexSetPtr vs = VertexSet::range(i);
  Point base = Point::sampled(vs, SpaceDescriptor{2, 1}, 991);
  std::vector<double> out;
  const int n = 10000;
  out.reserve(n);
  for (int t = 0; t < n; ++t) {
    Coord top = sample_coord(*vs, full_subset(i), SpaceDescriptor{2, 1},
                             rng::key_of({84, static_cast<std::uint64_t>(t)}));
    Point x = base.with_coord(full_subset(i), top);
    HkValues hk = compute_hk(
        full_subset(i), [&](Subset b) { return x.weight(b, 1); },
        [&](Subset b) { return x.order(b, 0); });
    out.push_back(hk.h.at(full_subset(i)));
  }
  CHECK(stats::ks_uniform(out).p_value > 0.01);
}

TEST_CASE("round trip: forward after inverse recovers weights and orders exactly") {
  RealizationFamily fam(SpaceDescriptor{1, 1});
  std::uint64_t degenerate = 0;
  for (int i = 1; i <= 4; ++i) {
    VertexSetPtr vs = VertexSet::range(i);
    for (std::uint64_t t = 0; t < 2500; ++t) {
      events().reset();
      Point xyo = Point::sampled(vs, fam.inverse_input(),
                                 rng::key_of({85, static_cast<std::uint64_t>(i), t}));
      Point back = fam.hat_f(fam.hat_g(xyo));
      if (events().total() > 0) {
        ++degenerate;
        continue;
      }
      for (Subset a : r_sets(i)) {
        CHECK(back.weight(a, 0) == xyo.weight(a, 0));  // bit-exact
        CHECK(back.order(a, 0) == xyo.order(a, 0));
      }
    }
  }
  CHECK(degenerate == 0);
}

TEST_CASE("lift of a whole point is equivariant and measure-preserving") {
  RealizationFamily fam(SpaceDescriptor{1, 1});

  // equivariance against order-preserving and permuting injections
  VertexSetPtr v3 = VertexSet::range(3);
  VertexSetPtr v2 = VertexSet::range(2);
  for (std::uint64_t t = 0; t < 1000; ++t) {
    Point x = Point::sampled(v3, fam.source(), rng::key_of({86, t}));
    Perm p = perm_unrank(3, static_cast<std::int64_t>(t % 6));
    Injection beta = perm_injection(v3, p);
    Point lhs = fam.hat_f(x).pullback(beta);
    Point rhs = fam.hat_f(x.pullback(beta));
    for (Subset a : r_sets(3)) {
      CHECK(lhs.weight(a, 0) == rhs.weight(a, 0));
      CHECK(lhs.order(a, 0) == rhs.order(a, 0));
    }
    Injection incl = Injection::order_preserving(v3, 0b101);
    Point l2 = fam.hat_f(x).pullback(incl);
    Point r2 = fam.hat_f(x.pullback(incl));
    for (Subset a : r_sets(2)) {
      CHECK(l2.weight(a, 0) == r2.weight(a, 0));
      CHECK(l2.order(a, 0) == r2.order(a, 0));
    }
  }

  // measure preservation: every lifted weight KS-uniform, every lifted order
  // uniform over the orders of its subset
  const int n = 30000;
  std::map<Subset, std::vector<double>> weights;
  std::map<Subset, std::map<std::vector<std::uint8_t>, std::uint64_t>> orders;
  for (int t = 0; t < n; ++t) {
    Point x = Point::sampled(v3, fam.source(), rng::key_of({87, static_cast<std::uint64_t>(t)}));
    Point y = fam.hat_f(x);
    for (Subset a : r_sets(3)) {
      weights[a].push_back(y.weight(a, 0));
      orders[a][y.order(a, 0).ranked] += 1;
    }
  }
  for (Subset a : r_sets(3)) {
    CHECK(stats::ks_uniform(weights[a]).p_value > 0.01);
    std::int64_t fact = 1;
    for (int j = 2; j <= subset_size(a); ++j) fact *= j;
    CHECK(orders[a].size() == static_cast<std::size_t>(fact));
    std::vector<std::uint64_t> counts;
    for (const auto& [o, c] : orders[a]) counts.push_back(c);
    if (counts.size() > 1) CHECK(stats::chisq_uniform(counts).p_value > 0.01);
  }
}

TEST_CASE("membership pullback matches the order-free orientation form") {
  // strip the orders from the oriented representation and compare pointwise
  // against the grid form, identifying its weights with the y copy
  for (int k : {2, 3}) {
    EuclideanStructure oriented = gallery("kqrO_1theon", k);
    EuclideanStructure grid = gallery("kqrO_0theon", k);
    RealizationFamily fam(oriented.desc);
    EuclideanStructure pulled = fam.pull_theon(oriented);
    VertexSetPtr vs = VertexSet::range(k);
    std::uint64_t agree = 0;
    const std::uint64_t total = 100000;
    for (std::uint64_t t = 0; t < total; ++t) {
      Point z = Point::sampled(vs, fam.source(),
                               rng::key_of({88, static_cast<std::uint64_t>(k), t}));
      std::map<Subset, Coord> yc;
      for (Subset a : r_sets(k)) yc[a] = Coord{{z.weight(a, 1)}, {}};
      Point y = Point::materialized(vs, SpaceDescriptor{1, 0}, yc);
      if (pulled.peons[0].eval_point(z) == grid.peons[0].eval_point(y)) ++agree;
    }
    CHECK(static_cast<double>(agree) / static_cast<double>(total) >= 0.999);
  }
}

TEST_CASE("stripping orders preserves the induced distribution") {
  EuclideanStructure oriented = gallery("kqrO_1theon", 2);
  RealizationFamily fam(oriented.desc);
  EuclideanStructure pulled = fam.pull_theon(oriented);
  EquivalenceReport r = equivalence_test(pulled, oriented, 3, 100000, 0.01, 89);
  CHECK(!r.distinguishable);
}

TEST_CASE("stripping orders reduces the effective dependency") {
  EuclideanStructure oriented = gallery("kqrO_1theon", 3);
  RealizationFamily fam(oriented.desc);
  EuclideanStructure pulled = fam.pull_theon(oriented);
  for (Subset a : r_sets(3))
    if (subset_size(a) <= 1)
      CHECK(dependency_check(pulled.peons[0], a, 10000, 90 + a).independent);
}

TEST_CASE("order simulation reconstructs the source membership") {
  EuclideanStructure oriented = gallery("kqrO_1theon", 2);
  SimulationBundle bundle = simulate_orders(oriented, 1, 2000, 91);
  CHECK(bundle.derived_lang->size() == 2);  // one predicate per pair order

  // the derived predicates never read the orders of (ell+1)-subsets
  for (const Peon& peon : bundle.derived.peons)
    for (Subset a : r_sets(peon.arity()))
      if (subset_size(a) == 2) {
        CHECK(!peon.mask().reads_order(a, 0));
        CHECK(dependency_check(peon, a, 10000, 92 + a).independent);
      }

  EuclideanStructure round = interpret_theon(bundle.interp, bundle.coupled);
  VertexSetPtr vs = VertexSet::range(2);
  std::uint64_t agree = 0;
  const std::uint64_t total = 100000;
  for (std::uint64_t t = 0; t < total; ++t) {
    Point x = Point::sampled(vs, oriented.desc, rng::key_of({93, t}));
    if (round.peons[0].eval_point(x) == oriented.peons[0].eval_point(x)) ++agree;
  }
  CHECK(static_cast<double>(agree) / static_cast<double>(total) >= 0.999);

  // sampled interpreted structures are uniform tournaments
  EquivalenceReport r = equivalence_test(round, oriented, 3, 60000, 0.01, 94);
  CHECK(!r.distinguishable);
}

TEST_CASE("order simulation below the cut arity keeps a single branch") {
  // arity 2 with ell = 2: no (ell+1)-subsets of [2], so one derived
  // predicate; 2-independence forces the membership to ignore everything
  EuclideanStructure always;
  always.lang = graph_language();
  always.desc = SpaceDescriptor{1, 1};
  always.name = "complete_graph";
  always.peons.push_back(Peon::opaque(2, always.desc, DependencyMask{},
                                      [](const PointAccess<double>&) {
                                        return true;
                                      }));
  SimulationBundle bundle = simulate_orders(always, 2, 1000, 95);
  CHECK(bundle.derived_lang->size() == 1);
  CHECK(bundle.interp.defs[0].kind == Formula::Kind::Or);
  CHECK(bundle.interp.defs[0].kids.size() == 1);
  REQUIRE(bundle.interp.defs[0].kids[0].kind == Formula::Kind::And);
  CHECK(bundle.interp.defs[0].kids[0].kids.size() == 1);  // no orientation atoms
}

TEST_CASE("simulation refuses theons that read low-arity coordinates") {
  EuclideanStructure qrt = gallery("qr_tournament_0");
  EuclideanStructure with_orders;
  with_orders.lang = qrt.lang;
  with_orders.desc = SpaceDescriptor{1, 1};
  with_orders.name = "qrt_orders";
  DependencyMask m;
  m.weight(0b01, 0).weight(0b10, 0).weight(0b11, 0);
  const Peon inner = qrt.peons[0];
  with_orders.peons.push_back(Peon::opaque(
      2, with_orders.desc, m, [inner](const PointAccess<double>& a) {
        // same unary-sensitive membership, ignoring the order slot
        return (a.weight(0b01, 0) < a.weight(0b10, 0)) !=
               (2.0 * a.weight(0b11, 0) < 1.0);
      }));
  CHECK_THROWS(simulate_orders(with_orders, 1, 2000, 96));
}
