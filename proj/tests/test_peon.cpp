#include <doctest.h>

#include "theon/density.hpp"
#include "theon/peon.hpp"
#include "theon/rng.hpp"
#include "theon/sampler.hpp"

using namespace theon;

namespace {

// point over [k] with one weight per subset, no orders
Point weight_point(int k, std::map<Subset, double> w) {
  std::map<Subset, Coord> coords;
  for (auto& [a, v] : w) coords[a] = Coord{{v}, {}};
  return Point::materialized(VertexSet::range(k), SpaceDescriptor{1, 0},
                             std::move(coords));
}

Structure edge_structure() {
  Structure m = Structure::empty(graph_language(), VertexSet::range(2));
  m.add_tuple(0, {0, 1});
  m.add_tuple(0, {1, 0});
  m.normalize();
  return m;
}

}  // namespace

TEST_CASE("gallery membership values") {
  EuclideanStructure qr = gallery("qr_graph");
  CHECK(qr.peons[0].eval_point(weight_point(2, {{1, 0.9}, {2, 0.9}, {3, 0.3}})));
  CHECK(!qr.peons[0].eval_point(weight_point(2, {{1, 0.1}, {2, 0.1}, {3, 0.7}})));

  EuclideanStructure twist = gallery("twist_graph");
  // 0.4 + 0.4 + 0.3 = 1.1, mod 1 = 0.1 < 1/2
  CHECK(twist.peons[0].eval_point(weight_point(2, {{1, 0.4}, {2, 0.4}, {3, 0.3}})));
  CHECK(!twist.peons[0].eval_point(weight_point(2, {{1, 0.4}, {2, 0.4}, {3, 0.8}})));

  EuclideanStructure bp = gallery("bipartite_graph");
  CHECK(bp.peons[0].eval_point(weight_point(2, {{1, 0.25}, {2, 0.75}, {3, 0.0}})));
  CHECK(!bp.peons[0].eval_point(weight_point(2, {{1, 0.25}, {2, 0.25}, {3, 0.0}})));

  EuclideanStructure odd = gallery("odd_3hypergraph");
  // exactly one pair value below 1/2
  CHECK(odd.peons[0].eval_point(weight_point(
      3, {{1, 0}, {2, 0}, {4, 0}, {3, 0.1}, {5, 0.6}, {6, 0.6}, {7, 0}})));
  CHECK(!odd.peons[0].eval_point(weight_point(
      3, {{1, 0}, {2, 0}, {4, 0}, {3, 0.1}, {5, 0.2}, {6, 0.6}, {7, 0}})));

  EuclideanStructure disc = gallery("disc_3hypergraph");
  CHECK(disc.peons[0].eval_point(weight_point(
      3, {{1, 0.1}, {2, 0.9}, {4, 0.9}, {3, 0.9}, {5, 0.9}, {6, 0.9}, {7, 0.2}})));
  CHECK(!disc.peons[0].eval_point(weight_point(
      3, {{1, 0.1}, {2, 0.9}, {4, 0.9}, {3, 0.9}, {5, 0.9}, {6, 0.9}, {7, 0.8}})));
}

TEST_CASE("orientation membership reads the top order only") {
  EuclideanStructure o2 = gallery("kqrO_1theon", 2);
  std::map<Subset, Coord> coords;
  coords[1] = Coord{{0.5}, {Order{{0}}}};
  coords[2] = Coord{{0.5}, {Order{{1}}}};
  coords[3] = Coord{{0.5}, {Order{{0, 1}}}};  // 1 before 2
  Point x = Point::materialized(VertexSet::range(2), SpaceDescriptor{1, 1}, coords);
  CHECK(o2.peons[0].eval_point(x));
  coords[3] = Coord{{0.5}, {Order{{1, 0}}}};
  Point y = Point::materialized(VertexSet::range(2), SpaceDescriptor{1, 1}, coords);
  CHECK(!o2.peons[0].eval_point(y));
}

TEST_CASE("masked evaluation never reads outside the declared mask") {
  DependencyMask m;
  m.weight(0b11, 0);
  Peon bad = Peon::opaque(2, SpaceDescriptor{1, 0}, m,
                          [](const PointAccess<double>& a) {
                            return a.weight(0b01, 0) < 0.5;  // outside the mask
                          });
  Point x = weight_point(2, {{1, 0.2}, {2, 0.2}, {3, 0.2}});
  CHECK_THROWS(bad.eval_point(x));
}

TEST_CASE("dependency_check on the gallery") {
  EuclideanStructure qr = gallery("qr_graph");
  CHECK(dependency_check(qr.peons[0], 0b01, 10000, 11).independent);
  CHECK(dependency_check(qr.peons[0], 0b10, 10000, 12).independent);

  EuclideanStructure twist = gallery("twist_graph");
  DependencyWitness w = dependency_check(twist.peons[0], 0b01, 10000, 13);
  CHECK(!w.independent);
  REQUIRE(w.before.has_value());
  CHECK(twist.peons[0].eval_point(*w.before) != twist.peons[0].eval_point(*w.after));

  for (int k : {2, 3}) {
    EuclideanStructure o = gallery("kqrO_1theon", k);
    for (Subset a : r_sets(k))
      if (subset_size(a) < k)
        CHECK(dependency_check(o.peons[0], a, 2000, 14 + a).independent);
  }
}

TEST_CASE("every gallery peon is insensitive outside its mask") {
  for (const std::string& name : gallery_names()) {
    int k = (name.rfind("kqrO", 0) == 0) ? 2 : 0;
    EuclideanStructure n = gallery(name, k);
    for (const Peon& peon : n.peons)
      for (Subset a : r_sets(peon.arity())) {
        if (peon.mask().reads(a)) continue;
        CHECK(dependency_check(peon, a, 10000, 900 + a).independent);
      }
  }
}

TEST_CASE("chamber_volume closed forms and partition of unity") {
  CHECK(chamber_volume(2, {0}, {}) == Rational(1, 2));
  CHECK(chamber_volume(2, {0, 0}, {}) == Rational(1, 8));
  CHECK(chamber_volume(2, {0, 1}, {}) == Rational(1, 4));
  CHECK(chamber_volume(1, {}, {3}) == Rational(1, 6));

  for (const std::string& name :
       {std::string("qr_graph"), std::string("bipartite_graph"),
        std::string("qr_tournament_0"), std::string("disc_3hypergraph"),
        std::string("odd_3hypergraph"), std::string("cycle_3hypergraph")}) {
    EuclideanStructure n = gallery(name);
    const Peon& peon = n.peons[0];
    auto table = ChamberTable::build(
        peon.arity(), peon.descriptor(), peon.chamber_resolution(), peon.mask(),
        [&](const PointAccess<Rational>& a) { return peon.eval_exact(a); });
    std::vector<int> order_sizes;
    for (const auto& [a, slot] : table->ocoords())
      order_sizes.push_back(subset_size(a));
    Rational total = 0;
    for (const auto& [key, holds] : table->entries()) {
      std::vector<int> cells(key.begin(),
                             key.begin() + static_cast<long>(table->wcoords().size()));
      total += chamber_volume(table->resolution(), cells, order_sizes);
    }
    CHECK(total == 1);
  }
}

TEST_CASE("chamber table lookup equals direct formula evaluation") {
  for (int k : {2, 3}) {
    EuclideanStructure table_form = gallery("kqrO_0theon", k);
    VertexSetPtr vs = VertexSet::range(k);
    auto direct = [&](const Point& x) {
      const Subset full = full_subset(k);
      std::vector<std::pair<double, int>> vals;
      for (int r = 0; r < k; ++r)
        vals.push_back({x.weight(full ^ (Subset{1} << r), 0), r});
      std::sort(vals.begin(), vals.end());
      std::int64_t fact = 1;
      for (int i = 2; i <= k; ++i) fact *= i;
      auto cell = static_cast<std::int64_t>(x.weight(full, 0) * fact);
      Perm target = perm_unrank(k, cell);
      for (int j = 0; j < k; ++j)
        if (vals[j].second != target[j]) return false;
      return true;
    };
    for (int t = 0; t < 10000; ++t) {
      Point x = Point::sampled(vs, SpaceDescriptor{1, 0},
                               rng::key_of({55, static_cast<std::uint64_t>(k),
                                            static_cast<std::uint64_t>(t)}));
      CHECK(table_form.peons[0].eval_point(x) == direct(x));
    }
  }
}

TEST_CASE("interpret_theon: complement sampling and reduct identity") {
  EuclideanStructure qr = gallery("qr_graph");
  LanguagePtr gl = graph_language();
  Interpretation compl_ = Interpretation::of(
      gl, gl, {Formula::negate(Formula::atom("E", {1, 2}))});
  EuclideanStructure neg = interpret_theon(compl_, qr);
  VertexSetPtr vs = VertexSet::range(3);
  for (std::uint64_t t = 0; t < 1000; ++t) {
    Point x = Point::sampled(vs, qr.desc, rng::key_of({66, t}));
    Structure a = realize_structure(qr, x);
    Structure b = realize_structure(neg, x);
    for (Subset s : r_sets(3)) {
      if (subset_size(s) != 2) continue;
      std::vector<int> e = subset_elements(s);
      std::vector<std::uint8_t> tup{static_cast<std::uint8_t>(e[0]),
                                    static_cast<std::uint8_t>(e[1])};
      CHECK(a.holds(0, tup) != b.holds(0, tup));
    }
  }

  Interpretation red = Interpretation::reduct_map(gl, gl);
  EuclideanStructure same = interpret_theon(red, qr);
  Point x = Point::sampled(VertexSet::range(2), qr.desc, 3);
  CHECK(same.peons[0].eval_point(x) == qr.peons[0].eval_point(x));
}

TEST_CASE("interpretation commutes with realization pointwise") {
  EuclideanStructure qr = gallery("qr_graph");
  LanguagePtr gl = graph_language();
  Interpretation compl_ = Interpretation::of(
      gl, gl, {Formula::negate(Formula::atom("E", {1, 2}))});
  EuclideanStructure neg = interpret_theon(compl_, qr);
  for (int nv : {2, 3, 4}) {
    VertexSetPtr vs = VertexSet::range(nv);
    for (std::uint64_t t = 0; t < 250; ++t) {
      Point x = Point::sampled(vs, qr.desc,
                               rng::key_of({67, static_cast<std::uint64_t>(nv), t}));
      CHECK(realize_structure(neg, x) ==
            interpret_structure(compl_, realize_structure(qr, x)));
    }
  }
}

TEST_CASE("independent coupling: joint membership and marginals") {
  EuclideanStructure qr = gallery("qr_graph");
  EuclideanStructure two = independent_coupling(qr, qr);
  CHECK(two.desc.weight_width == 2);
  CHECK(two.lang->size() == 2);
  CHECK(two.lang->at(1).name == "E_2");

  VertexSetPtr vs = VertexSet::range(2);
  int both = 0;
  const int n = 10000;
  for (int t = 0; t < n; ++t) {
    Point x = Point::sampled(vs, two.desc, rng::key_of({68, static_cast<std::uint64_t>(t)}));
    if (two.peons[0].eval_point(x) && two.peons[1].eval_point(x)) ++both;
  }
  CHECK(std::abs(both / static_cast<double>(n) - 0.25) < 0.011);
}

TEST_CASE("coupling with an always-false factor keeps the other marginal") {
  EuclideanStructure qr = gallery("qr_graph");
  EuclideanStructure never;
  never.lang = Language::of({{"Z", 1, false}});
  never.desc = SpaceDescriptor{1, 0};
  never.name = "never";
  never.peons.push_back(Peon::with_exact(
      1, never.desc, DependencyMask{},
      [](const PointAccess<double>&) { return false; },
      [](const PointAccess<Rational>&) { return false; }, 1));
  EuclideanStructure c = independent_coupling(qr, never);
  Rational edge = t_ind_exact(qr, edge_structure());
  CHECK(edge == Rational(1, 2));

  Structure joint = Structure::empty(c.lang, VertexSet::range(2));
  joint.add_tuple(0, {0, 1});
  joint.add_tuple(0, {1, 0});
  joint.normalize();
  CHECK(t_ind_exact(c, joint) == edge);
}
