#include <doctest.h>

#include "theon/rng.hpp"
#include "theon/symbols.hpp"

using namespace theon;

namespace {

Structure tournament_cycle123() {
  // 1 -> 2 -> 3 -> 1
  Structure m = Structure::empty(orientation_language(2), VertexSet::range(3));
  m.add_tuple(0, {0, 1});
  m.add_tuple(0, {1, 2});
  m.add_tuple(0, {2, 0});
  m.normalize();
  return m;
}

Structure graph_on3(std::initializer_list<std::pair<int, int>> edges) {
  Structure m = Structure::empty(graph_language(), VertexSet::range(3));
  for (auto [u, v] : edges) {
    m.add_tuple(0, {static_cast<std::uint8_t>(u), static_cast<std::uint8_t>(v)});
    m.add_tuple(0, {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(u)});
  }
  m.normalize();
  return m;
}

}  // namespace

TEST_CASE("language invariants") {
  CHECK_THROWS(Language::of({{"E", 2}, {"E", 3}}));
  CHECK_THROWS(Language::of({{"E", 0}}));
  CHECK(graph_language()->at(0).symmetric);
}

TEST_CASE("pullback_structure matches the defining equation") {
  Structure m = tournament_cycle123();

  // identity leaves the structure unchanged
  Structure same = pullback_structure(Injection::identity(m.vertices), m);
  CHECK(same == m);

  // a -> 2, b -> 1: edge 1 -> 2 pulls back to (b, a)
  VertexSetPtr ab = VertexSet::of({"a", "b"});
  Injection alpha = Injection::of_labels(ab, m.vertices, {{"a", "2"}, {"b", "1"}});
  Structure pulled = pullback_structure(alpha, m);
  CHECK(pulled.holds(0, {1, 0}));
  CHECK(!pulled.holds(0, {0, 1}));
  CHECK(pulled.rels[0].size() == 1);

  // any 2-subset of a complete graph is a single edge
  Structure k3 = graph_on3({{0, 1}, {0, 2}, {1, 2}});
  Injection incl = Injection::order_preserving(k3.vertices, 0b101);
  Structure sub = pullback_structure(incl, k3);
  CHECK(sub.rels[0].size() == 2);  // both orderings of one edge
}

TEST_CASE("eval_formula: tautology, tournament atom, canonicity") {
  Structure m = tournament_cycle123();
  Formula taut = Formula::eq(1, 1);
  CHECK(eval_formula(taut, m, {0, 1}));

  Formula asym = Formula::conj(
      {Formula::atom("P", {1, 2}), Formula::negate(Formula::atom("P", {2, 1}))});
  CHECK(eval_formula(asym, m, {0, 1}));   // edge 1 -> 2
  CHECK(!eval_formula(asym, m, {1, 0}));  // reversed

  Formula atom = Formula::atom("P", {1, 2});
  CHECK(!eval_formula(atom, m, {0, 0}));  // repeated vertices never hold
}

TEST_CASE("interpret_structure: reduct and complement") {
  Structure empty3 = graph_on3({});
  LanguagePtr gl = graph_language();

  Interpretation red = Interpretation::reduct_map(gl, gl);
  CHECK(interpret_structure(red, empty3) == empty3);

  Interpretation compl_ = Interpretation::of(
      gl, gl, {Formula::negate(Formula::atom("E", {1, 2}))});
  Structure k3 = interpret_structure(compl_, empty3);
  CHECK(k3 == graph_on3({{0, 1}, {0, 2}, {1, 2}}));
}

TEST_CASE("interpret_structure commutes with pullback") {
  LanguagePtr gl = graph_language();
  Interpretation compl_ = Interpretation::of(
      gl, gl, {Formula::negate(Formula::atom("E", {1, 2}))});
  Structure m = graph_on3({{0, 1}, {1, 2}});
  VertexSetPtr v2 = VertexSet::of({"1", "3"});
  Injection alpha = Injection::of_labels(v2, m.vertices, {{"1", "1"}, {"3", "3"}});
  CHECK(interpret_structure(compl_, pullback_structure(alpha, m)) ==
        pullback_structure(alpha, interpret_structure(compl_, m)));
}

TEST_CASE("reduct and disjoint union invert each other") {
  Structure g = graph_on3({{0, 1}});
  Structure t = tournament_cycle123();
  Structure both = disjoint_union_structure(g, t);
  CHECK(reduct(both, g.lang) == g);
  Structure back = reduct(both, t.lang);
  CHECK(back.rels == t.rels);
  CHECK_THROWS(reduct(g, orientation_language(2)));

  Structure g2 = Structure::empty(graph_language(), VertexSet::range(2));
  CHECK_THROWS(disjoint_union_structure(g, g2));
}

TEST_CASE("enumerate_structures counts") {
  CHECK(enumerate_structures(graph_language(), VertexSet::range(2)).size() == 2);
  CHECK(enumerate_structures(graph_language(), VertexSet::range(3)).size() == 8);
  CHECK(enumerate_structures(orientation_language(2), VertexSet::range(2)).size() == 4);
  CHECK(enumerate_structures(hypergraph3_language(), VertexSet::range(4)).size() == 16);

  auto all = enumerate_structures(graph_language(), VertexSet::range(3));
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) CHECK(!(all[i] == all[j]));
}

TEST_CASE("automorphism_count by brute force") {
  CHECK(automorphism_count(graph_on3({})) == 6);
  CHECK(automorphism_count(graph_on3({{0, 1}})) == 2);
  CHECK(automorphism_count(tournament_cycle123()) == 3);
}

TEST_CASE("k-orientation axiom checker") {
  CHECK(is_k_orientation(tournament_cycle123()));
  Structure bad = Structure::empty(orientation_language(2), VertexSet::range(3));
  bad.add_tuple(0, {0, 1});
  bad.add_tuple(0, {1, 0});
  bad.normalize();
  CHECK(!is_k_orientation(bad));
}

TEST_CASE("negation normal form agrees on all assignments, exhaustively") {
  LanguagePtr lang = orientation_language(2);
  Formula f = Formula::negate(Formula::disj(
      {Formula::conj({Formula::atom("P", {1, 2}), Formula::eq(1, 2)}),
       Formula::negate(Formula::atom("P", {2, 1}))}));
  Formula nf = f.nnf();
  for (const Structure& m : enumerate_structures(lang, VertexSet::range(3))) {
    for (std::uint8_t a = 0; a < 3; ++a)
      for (std::uint8_t b = 0; b < 3; ++b) {
        std::vector<std::uint8_t> assign{a, b};
        CHECK(eval_formula(f, m, assign) == eval_formula(nf, m, assign));
      }
  }
}

TEST_CASE("canonicity is preserved: no relation on repeated tuples") {
  Structure m = Structure::empty(graph_language(), VertexSet::range(2));
  CHECK_THROWS(m.add_tuple(0, {0, 0}));
  CHECK_THROWS(m.add_tuple(0, {0, 3}));
}
