#include <doctest.h>

#include <algorithm>
#include <set>

#include "theon/rng.hpp"
#include "theon/space.hpp"
#include "theon/stats.hpp"

using namespace theon;

namespace {

VertexSetPtr vs123() { return VertexSet::of({"1", "2", "3"}); }

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

bool points_equal(const Point& a, const Point& b) {
  if (a.vertex_set()->labels() != b.vertex_set()->labels()) return false;
  for (Subset s : r_sets(a.vertex_set()->size(), a.ell())) {
    Coord ca = a.coord(s), cb = b.coord(s);
    if (ca.w != cb.w) return false;
    for (std::size_t i = 0; i < ca.ord.size(); ++i)
      if (!(ca.ord[i] == cb.ord[i])) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("r_sets enumerates non-empty subsets in ascending mask order") {
  CHECK(r_sets(1) == std::vector<Subset>{1});
  CHECK(r_sets(2) == std::vector<Subset>{1, 2, 3});
  CHECK(r_sets(3, 1) == std::vector<Subset>{1, 2, 4});
  CHECK(r_sets(4).size() == 15);
  CHECK(r_sets_count(5) == 31);
  CHECK(r_sets_count(5, 2) == 15);
}

TEST_CASE("permutation enumeration is lexicographic and self-consistent") {
  auto perms = all_perms(3);
  CHECK(perms.size() == 6);
  CHECK(perms.front() == perm_identity(3));
  CHECK(perms.back() == Perm{2, 1, 0});
  for (std::int64_t r = 0; r < 6; ++r) {
    CHECK(perm_rank(perms[r]) == r);
    CHECK(perm_unrank(3, r) == perms[r]);
  }
  for (const auto& p : perms)
    CHECK(perm_compose(p, perm_invert(p)) == perm_identity(3));
}

TEST_CASE("all_orders is exhaustive and duplicate-free") {
  CHECK(all_orders({0}).size() == 1);
  CHECK(all_orders({0, 1}).size() == 2);
  auto o4 = all_orders({0, 1, 2, 3});
  CHECK(o4.size() == 24);
  std::set<std::vector<std::uint8_t>> seen;
  for (const auto& o : o4) seen.insert(o.ranked);
  CHECK(seen.size() == 24);
  for (std::size_t i = 0; i < o4.size(); ++i)
    CHECK(order_index(o4[i], {0, 1, 2, 3}) == static_cast<std::int64_t>(i));
}

TEST_CASE("pullback_order relabels by the defining equivalence") {
  // a -> 2, b -> 1 against the order (1, 2) yields (b, a)
  VertexSetPtr ab = VertexSet::of({"a", "b"});
  VertexSetPtr v12 = VertexSet::of({"1", "2"});
  Injection alpha = Injection::of_labels(ab, v12, {{"a", "2"}, {"b", "1"}});
  Order ord{{0, 1}};  // 1 before 2
  Order pulled = pullback_order(alpha, ord, 0b11);
  CHECK(pulled.ranked == std::vector<std::uint8_t>{1, 0});  // b before a

  Injection ident = Injection::identity(v12);
  CHECK(pullback_order(ident, ord, 0b11) == ord);
}

TEST_CASE("pullback functoriality on orders, exhaustively for 3 elements") {
  VertexSetPtr v3 = vs123();
  for (std::uint64_t t = 0; t < 20; ++t) {
    Injection beta = random_injection(v3, v3, rng::key_of({9, t}));
    Injection alpha = random_injection(v3, v3, rng::key_of({10, t}));
    for (const Order& o : all_orders({0, 1, 2})) {
      Order lhs = pullback_order(compose(beta, alpha), o, 0b111);
      Order rhs = pullback_order(alpha, pullback_order(beta, o, 0b111), 0b111);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("sampled points have the right index set and ranges") {
  SpaceDescriptor d{1, 1};
  Point x = Point::sampled(VertexSet::of({"1", "2"}), d, 42);
  int coords = 0;
  for (Subset a : r_sets(2)) {
    Coord c = x.coord(a);
    ++coords;
    CHECK(c.w.size() == 1);
    CHECK(c.w[0] >= 0.0);
    CHECK(c.w[0] < 1.0);
    CHECK(c.ord.size() == 1);
    CHECK(c.ord[0].ranked.size() == static_cast<std::size_t>(subset_size(a)));
  }
  CHECK(coords == 3);

  Point capped = Point::sampled(vs123(), d, 42, 1);
  CHECK(capped.has(0b001));
  CHECK(!capped.has(0b011));
}

TEST_CASE("point sampling is seed-deterministic and lazy access agrees") {
  SpaceDescriptor d{2, 1};
  VertexSetPtr v = VertexSet::of({"a", "b", "c", "d"});
  Point x = Point::sampled(v, d, 7);
  Point y = Point::sampled(v, d, 7);
  CHECK(points_equal(x, y));
  // a lazy view backed by the same seed yields identical coordinates
  Limits saved = limits();
  limits().lazy_point_threshold = 0;
  Point lazy = Point::sampled(v, d, 7);
  CHECK(lazy.lazy());
  CHECK(points_equal(x, lazy));
  limits() = saved;
}

TEST_CASE("weight marginals are uniform and order marginals equidistributed") {
  SpaceDescriptor d{1, 1};
  VertexSetPtr v = VertexSet::of({"1", "2"});
  const int n = 100000;
  std::vector<double> w;
  w.reserve(n);
  double mean = 0.0;
  std::map<std::vector<std::uint8_t>, int> order_counts;
  for (int i = 0; i < n; ++i) {
    Point x = Point::sampled(v, d, rng::key_of({1237, static_cast<std::uint64_t>(i)}));
    double val = x.weight(0b11, 0);
    w.push_back(val);
    mean += val;
    if (i < 10000) order_counts[x.order(0b11, 0).ranked] += 1;
  }
  mean /= n;
  CHECK(std::abs(mean - 0.5) < 0.005);
  auto ks = stats::ks_uniform(w);
  CHECK(ks.p_value > 0.01);
  CHECK(order_counts.size() == 2);
  for (const auto& [o, c] : order_counts)
    CHECK(std::abs(c / 10000.0 - 0.5) < 0.01);
}

TEST_CASE("pairwise independence of coordinates (2x2 binning)") {
  SpaceDescriptor d{1, 0};
  VertexSetPtr v = VertexSet::of({"1", "2"});
  const int n = 40000;
  std::vector<std::uint64_t> cells(4, 0);
  for (int i = 0; i < n; ++i) {
    Point x = Point::sampled(v, d, rng::key_of({77, static_cast<std::uint64_t>(i)}));
    int b0 = x.weight(0b01, 0) < 0.5 ? 0 : 1;
    int b1 = x.weight(0b10, 0) < 0.5 ? 0 : 1;
    cells[2 * b0 + b1] += 1;
  }
  auto r = stats::chisq_uniform(cells);
  CHECK(r.p_value > 0.01);
}

TEST_CASE("point pullback: identity, functoriality, index bookkeeping") {
  SpaceDescriptor d{1, 1};
  VertexSetPtr v3 = vs123();
  Point x = Point::sampled(v3, d, 5);
  CHECK(points_equal(x.pullback(Injection::identity(v3)), x));

  VertexSetPtr v2 = VertexSet::of({"1", "2"});
  for (std::uint64_t t = 0; t < 100; ++t) {
    Point base = Point::sampled(v3, d, rng::key_of({3, t}));
    Injection beta = random_injection(v3, v3, rng::key_of({4, t}));
    Injection alpha = random_injection(v2, v3, rng::key_of({5, t}));
    Point lhs = base.pullback(compose(beta, alpha));
    Point rhs = base.pullback(beta).pullback(alpha);
    CHECK(points_equal(lhs, rhs));
  }

  Injection incl = Injection::order_preserving(v3, 0b101);
  Point pulled = x.pullback(incl);
  CHECK(pulled.vertex_set()->size() == 2);
  CHECK(pulled.weight(0b01, 0) == x.weight(0b001, 0));
  CHECK(pulled.weight(0b10, 0) == x.weight(0b100, 0));
  CHECK(pulled.weight(0b11, 0) == x.weight(0b101, 0));
}

TEST_CASE("interleaving round trip and measure preservation") {
  CHECK(interleave_weights(0.0, 0.0) == 0.0);
  const double grid = 0x1.0p-26;
  for (std::uint64_t t = 0; t < 10000; ++t) {
    double a = rng::u01(rng::key_of({100, t}));
    double b = rng::u01(rng::key_of({101, t}));
    auto [ra, rb] = split_weights(interleave_weights(a, b));
    CHECK(std::abs(ra - a) < grid);
    CHECK(std::abs(rb - b) < grid);
  }
  std::vector<double> out;
  out.reserve(100000);
  for (std::uint64_t t = 0; t < 100000; ++t)
    out.push_back(interleave_weights(rng::u01(rng::key_of({102, t})),
                                     rng::u01(rng::key_of({103, t}))));
  CHECK(stats::ks_uniform(out).p_value > 0.01);
}
