#include "theon/space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "theon/rng.hpp"

namespace theon {

// --------------------------------------------------------------- permutations

Perm perm_identity(int n) {
  Perm p(n);
  for (int i = 0; i < n; ++i) p[i] = static_cast<std::uint8_t>(i);
  return p;
}

Perm perm_compose(const Perm& f, const Perm& g) {
  Perm r(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) r[i] = f[g[i]];
  return r;
}

Perm perm_invert(const Perm& p) {
  Perm r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[p[i]] = static_cast<std::uint8_t>(i);
  return r;
}

std::int64_t perm_rank(const Perm& p) {
  const int n = static_cast<int>(p.size());
  std::int64_t rank = 0;
  std::int64_t fact = 1;
  for (int i = 2; i <= n; ++i) fact *= i;
  for (int i = 0; i < n; ++i) {
    fact /= (n - i);
    int smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (p[j] < p[i]) ++smaller;
    rank += smaller * fact;
  }
  return rank;
}

Perm perm_unrank(int n, std::int64_t r) {
  std::vector<std::uint8_t> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = static_cast<std::uint8_t>(i);
  std::int64_t fact = 1;
  for (int i = 2; i < n; ++i) fact *= i;
  Perm p;
  p.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::int64_t q = (n - 1 - i) ? r / fact : 0;
    r -= q * fact;
    p.push_back(pool[q]);
    pool.erase(pool.begin() + q);
    if (n - 1 - i > 1) fact /= (n - 1 - i);
  }
  return p;
}

std::vector<Perm> all_perms(int n) {
  if (n > limits().max_order_size)
    throw Error("all_perms: size exceeds the factorial cap");
  std::vector<Perm> out;
  Perm p = perm_identity(n);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// ----------------------------------------------------------------- vertex set

VertexSet::VertexSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  label_hash_.reserve(labels_.size());
  for (const auto& l : labels_) label_hash_.push_back(rng::hash_bytes(l));
}

std::shared_ptr<const VertexSet> VertexSet::of(std::vector<std::string> labels) {
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
    throw Error("vertex labels must be unique");
  if (labels.size() > 32) throw Error("vertex sets are capped at 32 elements");
  for (const auto& l : labels) {
    if (l.empty()) throw Error("vertex labels must be non-empty");
    if (l.find(',') != std::string::npos)
      throw Error("vertex labels must not contain ','");
  }
  return std::shared_ptr<const VertexSet>(new VertexSet(std::move(labels)));
}

std::shared_ptr<const VertexSet> VertexSet::range(int n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  int width = 1;
  for (int t = n; t >= 10; t /= 10) ++width;
  for (int i = 1; i <= n; ++i) {
    std::string s = std::to_string(i);
    labels.push_back(std::string(width - s.size(), '0') + s);
  }
  return of(std::move(labels));
}

int VertexSet::index_of(const std::string& l) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), l);
  if (it == labels_.end() || *it != l) return -1;
  return static_cast<int>(it - labels_.begin());
}

std::uint64_t VertexSet::coord_hash(Subset subset) const {
  // order-independent over the subset: labels are visited in sorted order
  std::uint64_t h = 0x2545f4914f6cdd1dULL;
  for (int i : subset_elements(subset)) h = rng::chain(h, label_hash_[i]);
  return h;
}

// -------------------------------------------------------------------- subsets

int subset_size(Subset s) { return std::popcount(s); }

std::vector<int> subset_elements(Subset s) {
  std::vector<int> out;
  while (s) {
    int i = std::countr_zero(s);
    out.push_back(i);
    s &= s - 1;
  }
  return out;
}

Subset full_subset(int n) {
  return n == 32 ? ~Subset{0} : ((Subset{1} << n) - 1);
}

std::vector<Subset> r_sets(int n, int cap) {
  std::vector<Subset> out;
  const Subset top = full_subset(n);
  for (Subset s = 1; s <= top; ++s) {
    if (cap > 0 && subset_size(s) > cap) continue;
    out.push_back(s);
    if (s == top) break;
  }
  return out;
}

std::size_t r_sets_count(int n, int cap) {
  if (cap <= 0 || cap >= n) return (std::size_t{1} << n) - 1;
  std::size_t c = 0;
  for (int k = 1; k <= cap; ++k)
    c += static_cast<std::size_t>(binomial(n, k));
  return c;
}

// --------------------------------------------------------------------- orders

std::vector<Order> all_orders(const std::vector<int>& elems) {
  const int n = static_cast<int>(elems.size());
  std::vector<Order> out;
  for (const Perm& p : all_perms(n)) {
    Order o;
    o.ranked.reserve(n);
    for (int r = 0; r < n; ++r) o.ranked.push_back(static_cast<std::uint8_t>(elems[p[r]]));
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<Order> all_orders_of_subset(Subset s) {
  return all_orders(subset_elements(s));
}

Perm order_to_perm(const Order& o, const std::vector<int>& elems) {
  Perm p(elems.size());
  for (std::size_t r = 0; r < o.ranked.size(); ++r) {
    auto it = std::lower_bound(elems.begin(), elems.end(), o.ranked[r]);
    if (it == elems.end() || *it != o.ranked[r])
      throw Error("order_to_perm: element not in ground set");
    p[it - elems.begin()] = static_cast<std::uint8_t>(r);
  }
  return p;
}

Order perm_to_order(const Perm& p, const std::vector<int>& elems) {
  Perm inv = perm_invert(p);
  Order o;
  o.ranked.reserve(elems.size());
  for (std::size_t r = 0; r < elems.size(); ++r)
    o.ranked.push_back(static_cast<std::uint8_t>(elems[inv[r]]));
  return o;
}

std::int64_t order_index(const Order& o, const std::vector<int>& elems) {
  // index in all_orders(elems): rank of the ranked list as a permutation
  Perm seq(o.ranked.size());
  for (std::size_t r = 0; r < o.ranked.size(); ++r) {
    auto it = std::lower_bound(elems.begin(), elems.end(), o.ranked[r]);
    seq[r] = static_cast<std::uint8_t>(it - elems.begin());
  }
  return perm_rank(seq);
}

// ----------------------------------------------------------------- injections

Injection Injection::identity(VertexSetPtr vs) {
  Injection a;
  a.dom = vs;
  a.cod = vs;
  a.map.resize(vs->size());
  for (int i = 0; i < vs->size(); ++i) a.map[i] = static_cast<std::uint8_t>(i);
  return a;
}

Injection Injection::order_preserving(VertexSetPtr cod, Subset image) {
  std::vector<int> elems = subset_elements(image);
  std::vector<std::string> dom_labels;
  dom_labels.reserve(elems.size());
  for (int i : elems) dom_labels.push_back(cod->label(i));
  Injection a;
  a.dom = VertexSet::of(dom_labels);  // same labels, so order is preserved
  a.cod = cod;
  a.map.reserve(elems.size());
  for (int i : elems) a.map.push_back(static_cast<std::uint8_t>(i));
  return a;
}

Injection Injection::of_labels(VertexSetPtr dom, VertexSetPtr cod,
                               const std::map<std::string, std::string>& m) {
  Injection a;
  a.dom = dom;
  a.cod = cod;
  a.map.resize(dom->size());
  std::vector<bool> hit(cod->size(), false);
  for (int i = 0; i < dom->size(); ++i) {
    auto it = m.find(dom->label(i));
    if (it == m.end()) throw Error("injection is not total on its domain");
    int j = cod->index_of(it->second);
    if (j < 0) throw Error("injection maps outside the codomain");
    if (hit[j]) throw Error("map is not injective");
    hit[j] = true;
    a.map[i] = static_cast<std::uint8_t>(j);
  }
  return a;
}

Subset Injection::image() const {
  Subset s = 0;
  for (auto j : map) s |= Subset{1} << j;
  return s;
}

Subset Injection::map_subset(Subset s) const {
  Subset out = 0;
  for (int i : subset_elements(s)) out |= Subset{1} << map[i];
  return out;
}

int Injection::preimage(int cod_index) const {
  for (std::size_t i = 0; i < map.size(); ++i)
    if (map[i] == cod_index) return static_cast<int>(i);
  return -1;
}

Injection compose(const Injection& beta, const Injection& alpha) {
  Injection c;
  c.dom = alpha.dom;
  c.cod = beta.cod;
  c.map.reserve(alpha.map.size());
  for (auto i : alpha.map) c.map.push_back(beta.map[i]);
  return c;
}

Order pullback_order(const Injection& alpha, const Order& ord, Subset ground) {
  if (alpha.image() != ground)
    throw Error("pullback_order: map is not bijective onto the ground set");
  Order out;
  out.ranked.reserve(alpha.map.size());
  for (auto v : ord.ranked) {
    int u = alpha.preimage(v);
    if (u < 0) throw Error("pullback_order: order element outside the image");
    out.ranked.push_back(static_cast<std::uint8_t>(u));
  }
  return out;
}

// --------------------------------------------------------------------- points

namespace {
constexpr std::uint64_t kWeightKind = 0x77;
constexpr std::uint64_t kOrderKind = 0x6f;
}  // namespace

Coord sample_coord(const VertexSet& vs, Subset a, const SpaceDescriptor& d,
                   std::uint64_t seed) {
  const std::uint64_t ch = vs.coord_hash(a);
  Coord c;
  c.w.resize(d.weight_width);
  for (int j = 0; j < d.weight_width; ++j)
    c.w[j] = rng::u01(rng::key_of({seed, ch, kWeightKind, static_cast<std::uint64_t>(j)}));
  c.ord.resize(d.order_degree);
  std::vector<int> elems = subset_elements(a);
  for (int i = 0; i < d.order_degree; ++i) {
    // Fisher-Yates keyed by (seed, coordinate, slot, step)
    std::vector<std::uint8_t> arr(elems.begin(), elems.end());
    for (int j = static_cast<int>(arr.size()) - 1; j >= 1; --j) {
      std::uint32_t t = rng::below(
          rng::key_of({seed, ch, kOrderKind, static_cast<std::uint64_t>(i),
                       static_cast<std::uint64_t>(j)}),
          static_cast<std::uint32_t>(j + 1));
      std::swap(arr[j], arr[t]);
    }
    c.ord[i].ranked = std::move(arr);
  }
  return c;
}

Point Point::sampled(VertexSetPtr vs, SpaceDescriptor d, std::uint64_t seed, int ell) {
  Point p;
  p.vs_ = std::move(vs);
  p.desc_ = d;
  p.ell_ = ell;
  p.seed_ = seed;
  std::size_t coords = r_sets_count(p.vs_->size(), ell);
  std::size_t draws = coords * (d.weight_width + d.order_degree);
  if (draws <= limits().lazy_point_threshold && p.vs_->size() <= 20)
    return p.materialize();
  return p;
}

Point Point::materialized(VertexSetPtr vs, SpaceDescriptor d,
                          std::map<Subset, Coord> coords, int ell) {
  Point p;
  p.vs_ = std::move(vs);
  p.desc_ = d;
  p.ell_ = ell;
  p.data_ = std::move(coords);
  // index set must be exactly r(V) (or r(V, ell))
  for (Subset a : r_sets(p.vs_->size(), ell))
    if (!p.data_.count(a)) throw Error("point is missing a coordinate");
  if (p.data_.size() != r_sets_count(p.vs_->size(), ell))
    throw Error("point has coordinates outside its index set");
  for (auto& [a, c] : p.data_) {
    if (static_cast<int>(c.w.size()) != d.weight_width ||
        static_cast<int>(c.ord.size()) != d.order_degree)
      throw Error("coordinate shape does not match the descriptor");
    for (double w : c.w)
      if (!(w >= 0.0 && w < 1.0)) throw Error("weight outside [0,1)");
    for (auto& o : c.ord) {
      auto sorted = o.ranked;
      std::sort(sorted.begin(), sorted.end());
      std::vector<int> elems = subset_elements(a);
      if (!std::equal(sorted.begin(), sorted.end(), elems.begin(), elems.end()))
        throw Error("order is not a permutation of its subset");
    }
  }
  return p;
}

void Point::check_subset(Subset a) const {
  if (a == 0 || (a & ~full_subset(vs_->size())))
    throw Error("subset outside the vertex set");
  if (ell_ > 0 && subset_size(a) > ell_)
    throw Error("subset above the point's arity cap");
}

bool Point::has(Subset a) const {
  if (a == 0 || (a & ~full_subset(vs_->size()))) return false;
  if (ell_ > 0 && subset_size(a) > ell_) return false;
  return true;
}

Coord Point::generate(Subset a) const {
  return sample_coord(*vs_, a, desc_, *seed_);
}

Coord Point::coord(Subset a) const {
  check_subset(a);
  auto it = data_.find(a);
  if (it != data_.end()) return it->second;
  if (!seed_) throw Error("point has no value at this coordinate");
  return generate(a);
}

double Point::weight(Subset a, int comp) const {
  check_subset(a);
  auto it = data_.find(a);
  if (it != data_.end()) return it->second.w.at(comp);
  if (!seed_) throw Error("point has no value at this coordinate");
  const std::uint64_t ch = vs_->coord_hash(a);
  return rng::u01(rng::key_of({*seed_, ch, kWeightKind, static_cast<std::uint64_t>(comp)}));
}

Order Point::order(Subset a, int slot) const {
  check_subset(a);
  auto it = data_.find(a);
  if (it != data_.end()) return it->second.ord.at(slot);
  if (!seed_) throw Error("point has no value at this coordinate");
  return generate(a).ord.at(slot);
}

Point Point::with_coord(Subset a, Coord c) const {
  check_subset(a);
  Point p = *this;
  p.data_[a] = std::move(c);
  return p;
}

Point Point::pullback(const Injection& alpha) const {
  Point p;
  p.vs_ = alpha.dom;
  p.desc_ = desc_;
  p.ell_ = ell_;
  for (Subset a : r_sets(alpha.dom->size(), ell_)) {
    Subset b = alpha.map_subset(a);
    Coord c = coord(b);
    for (auto& o : c.ord) {
      // pull back along the bijective restriction of alpha to a
      Order pulled;
      pulled.ranked.reserve(o.ranked.size());
      for (auto v : o.ranked) {
        int u = alpha.preimage(v);
        if (u < 0) throw Error("pullback: order element outside the image");
        pulled.ranked.push_back(static_cast<std::uint8_t>(u));
      }
      o = std::move(pulled);
    }
    p.data_[a] = std::move(c);
  }
  return p;
}

Point Point::materialize() const {
  Point p;
  p.vs_ = vs_;
  p.desc_ = desc_;
  p.ell_ = ell_;
  for (Subset a : r_sets(vs_->size(), ell_)) p.data_[a] = coord(a);
  return p;
}

Point sample_point(VertexSetPtr vs, const SpaceDescriptor& d, std::uint64_t seed, int ell) {
  return Point::sampled(std::move(vs), d, seed, ell);
}

Point pullback_point(const Injection& alpha, const Point& x) {
  if (x.vertex_set() != alpha.cod &&
      x.vertex_set()->labels() != alpha.cod->labels())
    throw Error("pullback_point: codomain does not match the point");
  return x.pullback(alpha);
}

// --------------------------------------------------------------- interleaving

double interleave_many(const std::vector<double>& parts) {
  const int p = static_cast<int>(parts.size());
  if (p == 1) return parts[0];
  const int bits_each = 64 / p;
  std::uint64_t out = 0;
  int out_pos = 63;
  for (int b = 0; b < bits_each && out_pos >= 0; ++b) {
    for (int j = 0; j < p && out_pos >= 0; ++j) {
      std::uint64_t u = static_cast<std::uint64_t>(parts[j] * 0x1.0p53);  // 53-bit grid
      std::uint64_t bit = (b < 53) ? ((u >> (52 - b)) & 1) : 0;
      out |= bit << out_pos;
      --out_pos;
    }
  }
  return static_cast<double>(out >> 11) * 0x1.0p-53;
}

std::vector<double> split_many(double x, int parts) {
  if (parts == 1) return {x};
  const int bits_each = 64 / parts;
  std::uint64_t u = static_cast<std::uint64_t>(x * 0x1.0p53) << 11;
  std::vector<std::uint64_t> acc(parts, 0);
  int pos = 63;
  for (int b = 0; b < bits_each && pos >= 0; ++b) {
    for (int j = 0; j < parts && pos >= 0; ++j) {
      std::uint64_t bit = (u >> pos) & 1;
      if (b < 53) acc[j] |= bit << (52 - b);
      --pos;
    }
  }
  std::vector<double> out(parts);
  for (int j = 0; j < parts; ++j) out[j] = static_cast<double>(acc[j]) * 0x1.0p-53;
  return out;
}

double interleave_weights(double a, double b) { return interleave_many({a, b}); }

std::pair<double, double> split_weights(double x) {
  auto v = split_many(x, 2);
  return {v[0], v[1]};
}

}  // namespace theon
