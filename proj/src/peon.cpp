#include "theon/peon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chamber_enum.hpp"
#include "theon/rng.hpp"

namespace theon {

// ------------------------------------------------------------------ accessors

const ExactCoord& ExactPoint::at(Subset a) const {
  auto it = coords.find(a);
  if (it == coords.end()) throw Error("exact point has no value at this coordinate");
  return it->second;
}

BaseAccess::BaseAccess(const Point& p, std::vector<std::uint8_t> vmap)
    : point_(&p), vmap_(std::move(vmap)) {}

BaseAccess::BaseAccess(const Point& p) : point_(&p) {
  vmap_.resize(p.vertex_set()->size());
  std::iota(vmap_.begin(), vmap_.end(), 0);
}

namespace {

Subset map_through(const std::vector<std::uint8_t>& vmap, Subset local) {
  Subset out = 0;
  for (int i : subset_elements(local)) out |= Subset{1} << vmap[i];
  return out;
}

Order localize(const std::vector<std::uint8_t>& vmap, const Order& o) {
  Order out;
  out.ranked.reserve(o.ranked.size());
  for (auto e : o.ranked)
    for (std::size_t i = 0; i < vmap.size(); ++i)
      if (vmap[i] == e) {
        out.ranked.push_back(static_cast<std::uint8_t>(i));
        break;
      }
  if (out.ranked.size() != o.ranked.size())
    throw Error("order element outside the tuple image");
  return out;
}

}  // namespace

double BaseAccess::weight(Subset local, int comp) const {
  return point_->weight(map_through(vmap_, local), comp);
}

Order BaseAccess::order(Subset local, int slot) const {
  return localize(vmap_, point_->order(map_through(vmap_, local), slot));
}

ExactAccess::ExactAccess(const ExactPoint& p, std::vector<std::uint8_t> vmap)
    : point_(&p), vmap_(std::move(vmap)) {}

ExactAccess::ExactAccess(const ExactPoint& p) : point_(&p) {
  vmap_.resize(p.vs->size());
  std::iota(vmap_.begin(), vmap_.end(), 0);
}

Rational ExactAccess::weight(Subset local, int comp) const {
  return point_->at(map_through(vmap_, local)).w.at(comp);
}

Order ExactAccess::order(Subset local, int slot) const {
  return localize(vmap_, point_->at(map_through(vmap_, local)).ord.at(slot));
}

// ---------------------------------------------------------------------- masks

DependencyMask& DependencyMask::weight(Subset a, int comp) {
  use[a].weights |= 1u << comp;
  return *this;
}

DependencyMask& DependencyMask::order(Subset a, int slot) {
  use[a].orders |= 1u << slot;
  return *this;
}

DependencyMask& DependencyMask::all_of(Subset a, const SpaceDescriptor& d) {
  for (int j = 0; j < d.weight_width; ++j) weight(a, j);
  for (int i = 0; i < d.order_degree; ++i) order(a, i);
  return *this;
}

DependencyMask DependencyMask::everything(int k, const SpaceDescriptor& d) {
  DependencyMask m;
  for (Subset a : r_sets(k)) m.all_of(a, d);
  return m;
}

bool DependencyMask::reads_weight(Subset a, int comp) const {
  auto it = use.find(a);
  return it != use.end() && (it->second.weights & (1u << comp));
}

bool DependencyMask::reads_order(Subset a, int slot) const {
  auto it = use.find(a);
  return it != use.end() && (it->second.orders & (1u << slot));
}

bool DependencyMask::reads(Subset a) const {
  auto it = use.find(a);
  return it != use.end() && (it->second.weights || it->second.orders);
}

std::vector<Subset> DependencyMask::subsets() const {
  std::vector<Subset> out;
  for (const auto& [a, u] : use)
    if (u.weights || u.orders) out.push_back(a);
  return out;
}

// ------------------------------------------------------------- chamber tables

std::vector<int> ChamberKey::flat() const {
  std::vector<int> out = cell;
  out.insert(out.end(), rank.begin(), rank.end());
  out.insert(out.end(), order_idx.begin(), order_idx.end());
  return out;
}

namespace {

template <class S>
std::int64_t scaled_floor(S v, std::int64_t f);

template <>
std::int64_t scaled_floor<double>(double v, std::int64_t f) {
  auto c = static_cast<std::int64_t>(v * static_cast<double>(f));
  if (c >= f) c = f - 1;
  if (c < 0) c = 0;
  return c;
}

template <>
std::int64_t scaled_floor<Rational>(Rational v, std::int64_t f) {
  return floor_div(v * f);
}

detail::ChamberSpec table_spec(int m,
                               const std::vector<std::pair<Subset, int>>& wcoords,
                               const std::vector<std::pair<Subset, int>>& ocoords) {
  detail::ChamberSpec spec;
  spec.boundaries.reserve(m + 1);
  for (int i = 0; i <= m; ++i) spec.boundaries.push_back(Rational(i, m));
  spec.n_w = static_cast<int>(wcoords.size());
  for (const auto& [a, slot] : ocoords)
    spec.order_choices.push_back(all_orders_of_subset(a));
  return spec;
}

}  // namespace

std::shared_ptr<const ChamberTable> ChamberTable::build(
    int arity, SpaceDescriptor desc, int m, const DependencyMask& mask,
    const std::function<bool(const PointAccess<Rational>&)>& exact_pred) {
  auto t = std::make_shared<ChamberTable>();
  t->arity_ = arity;
  t->desc_ = desc;
  t->m_ = m;
  for (const auto& [a, u] : mask.use) {
    for (int j = 0; j < desc.weight_width; ++j)
      if (u.weights & (1u << j)) t->wcoords_.push_back({a, j});
    for (int i = 0; i < desc.order_degree; ++i)
      if (u.orders & (1u << i)) t->ocoords_.push_back({a, i});
  }
  detail::ChamberSpec spec = table_spec(m, t->wcoords_, t->ocoords_);
  std::vector<std::size_t> order_counts;
  for (const auto& c : spec.order_choices) order_counts.push_back(c.size());
  if (detail::chamber_count(spec.n_w, m, order_counts) >
      static_cast<double>(limits().max_chamber_table))
    throw Error("chamber table exceeds the configured size cap");

  VertexSetPtr vs = VertexSet::range(arity);
  detail::enumerate_chambers(spec, [&](const detail::Chamber& ch) {
    ExactPoint pt;
    pt.vs = vs;
    pt.desc = desc;
    for (std::size_t i = 0; i < t->wcoords_.size(); ++i) {
      auto& c = pt.coords[t->wcoords_[i].first];
      c.w.resize(desc.weight_width, Rational(0));
      c.ord.resize(desc.order_degree);
      c.w[t->wcoords_[i].second] = ch.value[i];
    }
    for (std::size_t i = 0; i < t->ocoords_.size(); ++i) {
      auto& c = pt.coords[t->ocoords_[i].first];
      c.w.resize(desc.weight_width, Rational(0));
      c.ord.resize(desc.order_degree);
      c.ord[t->ocoords_[i].second] =
          spec.order_choices[i][ch.order_idx[i]];
    }
    ChamberKey key{ch.interval, ch.rank, ch.order_idx};
    ExactAccess acc(pt);
    MaskedAccess<Rational> masked(acc, mask);
    t->entries_[key.flat()] = exact_pred(masked);
  });
  return t;
}

std::shared_ptr<const ChamberTable> ChamberTable::from_parts(
    int arity, SpaceDescriptor desc, int m,
    std::vector<std::pair<Subset, int>> wcoords,
    std::vector<std::pair<Subset, int>> ocoords,
    std::map<std::vector<int>, bool> entries) {
  auto t = std::make_shared<ChamberTable>();
  t->arity_ = arity;
  t->desc_ = desc;
  t->m_ = m;
  t->wcoords_ = std::move(wcoords);
  t->ocoords_ = std::move(ocoords);
  t->entries_ = std::move(entries);
  t->check_coverage();
  return t;
}

void ChamberTable::check_coverage() const {
  detail::ChamberSpec spec = table_spec(m_, wcoords_, ocoords_);
  std::size_t expected = 0;
  detail::enumerate_chambers(spec, [&](const detail::Chamber& ch) {
    ++expected;
    ChamberKey key{ch.interval, ch.rank, ch.order_idx};
    if (!entries_.count(key.flat()))
      throw Error("chamber table does not cover every chamber");
  });
  if (entries_.size() != expected)
    throw Error("chamber table has entries for non-chambers");
}

DependencyMask ChamberTable::mask() const {
  DependencyMask m;
  for (const auto& [a, j] : wcoords_) m.weight(a, j);
  for (const auto& [a, i] : ocoords_) m.order(a, i);
  return m;
}

template <class S>
bool ChamberTable::lookup(const PointAccess<S>& a) const {
  ChamberKey key;
  key.cell.resize(wcoords_.size());
  key.rank.resize(wcoords_.size());
  std::vector<S> vals(wcoords_.size());
  for (std::size_t i = 0; i < wcoords_.size(); ++i) {
    vals[i] = a.weight(wcoords_[i].first, wcoords_[i].second);
    key.cell[i] = static_cast<int>(scaled_floor<S>(vals[i], m_));
  }
  // rank within shared cells; ties are measure-zero, logged, index-broken
  for (int cell = 0; cell < m_; ++cell) {
    std::vector<int> group;
    for (std::size_t i = 0; i < wcoords_.size(); ++i)
      if (key.cell[i] == cell) group.push_back(static_cast<int>(i));
    std::sort(group.begin(), group.end(), [&](int x, int y) {
      if (vals[x] < vals[y]) return true;
      if (vals[y] < vals[x]) return false;
      events().weight_ties++;
      return x < y;
    });
    for (std::size_t r = 0; r < group.size(); ++r)
      key.rank[group[r]] = static_cast<int>(r);
  }
  key.order_idx.resize(ocoords_.size());
  for (std::size_t i = 0; i < ocoords_.size(); ++i) {
    Order o = a.order(ocoords_[i].first, ocoords_[i].second);
    key.order_idx[i] = static_cast<int>(
        order_index(o, subset_elements(ocoords_[i].first)));
  }
  auto it = entries_.find(key.flat());
  if (it == entries_.end()) throw Error("point falls outside the chamber table");
  return it->second;
}

template bool ChamberTable::lookup<double>(const PointAccess<double>&) const;
template bool ChamberTable::lookup<Rational>(const PointAccess<Rational>&) const;

Rational chamber_volume(int m, const std::vector<int>& cells,
                        const std::vector<int>& order_sizes) {
  Rational v = 1;
  std::map<int, int> occupancy;
  for (int c : cells) {
    v /= m;
    occupancy[c] += 1;
  }
  for (const auto& [c, occ] : occupancy) v /= Rational(factorial(occ));
  for (int s : order_sizes) v /= Rational(factorial(s));
  return v;
}

// ---------------------------------------------------------------------- peons

Peon Peon::opaque(int arity, SpaceDescriptor d, DependencyMask mask, Pred pred) {
  Peon p;
  p.arity_ = arity;
  p.desc_ = d;
  p.mask_ = std::move(mask);
  p.pred_ = std::move(pred);
  return p;
}

Peon Peon::with_exact(int arity, SpaceDescriptor d, DependencyMask mask,
                      Pred pred, ExactPred exact, int chamber_m) {
  Peon p;
  p.arity_ = arity;
  p.desc_ = d;
  p.mask_ = std::move(mask);
  p.pred_ = std::move(pred);
  p.exact_ = std::move(exact);
  p.chamber_m_ = chamber_m;
  return p;
}

Peon Peon::from_table(std::shared_ptr<const ChamberTable> table) {
  Peon p;
  p.arity_ = table->arity();
  p.desc_ = table->descriptor();
  p.mask_ = table->mask();
  p.chamber_m_ = table->resolution();
  p.table_ = std::move(table);
  return p;
}

bool Peon::eval(const PointAccess<double>& a) const {
  MaskedAccess<double> m(a, mask_);
  if (table_) return table_->lookup(m);
  return pred_(m);
}

bool Peon::eval_exact(const PointAccess<Rational>& a) const {
  MaskedAccess<Rational> m(a, mask_);
  if (table_) return table_->lookup(m);
  if (!exact_) throw Error("peon has no exact evaluator");
  return exact_(m);
}

bool Peon::eval_point(const Point& x) const {
  BaseAccess a(x);
  if (a.arity() != arity_) throw Error("point arity does not match the peon");
  if (!(x.descriptor() == desc_)) throw Error("descriptor mismatch");
  return eval(a);
}

template <class S>
bool peon_eval(const Peon& p, const PointAccess<S>& a) {
  if constexpr (std::is_same_v<S, double>)
    return p.eval(a);
  else
    return p.eval_exact(a);
}

template bool peon_eval<double>(const Peon&, const PointAccess<double>&);
template bool peon_eval<Rational>(const Peon&, const PointAccess<Rational>&);

bool eval_peon(const Peon& p, const Point& x) { return p.eval_point(x); }

int EuclideanStructure::chamber_resolution() const {
  int m = 1;
  for (const auto& p : peons) {
    if (!p.chamber_grid()) return 0;
    m = std::lcm(m, p.chamber_resolution());
  }
  return m;
}

bool EuclideanStructure::exact_ready() const {
  for (const auto& p : peons)
    if (!p.has_exact()) return false;
  return true;
}

// ----------------------------------------------------------------- operations

namespace {

template <class S>
bool eval_truth(const Formula& f, const EuclideanStructure& n,
                const PointAccess<S>& a) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::True:
      return true;
    case K::False:
      return false;
    case K::Eq:
      return f.lhs == f.rhs;  // distinct variables denote distinct vertices
    case K::Pred: {
      std::uint32_t seen = 0;
      std::vector<std::uint8_t> vmap(f.vars.size());
      for (std::size_t i = 0; i < f.vars.size(); ++i) {
        int v = f.vars[i] - 1;
        if (seen & (1u << v)) return false;  // repeated variables never hold
        seen |= 1u << v;
        vmap[i] = static_cast<std::uint8_t>(v);
      }
      int q = n.lang->index_of(f.pred);
      RemapAccess<S> sub(a, std::move(vmap));
      return peon_eval<S>(n.peons[q], sub);
    }
    case K::Not:
      return !eval_truth<S>(f.kids[0], n, a);
    case K::And:
      for (const auto& kid : f.kids)
        if (!eval_truth<S>(kid, n, a)) return false;
      return true;
    case K::Or:
      for (const auto& kid : f.kids)
        if (eval_truth<S>(kid, n, a)) return true;
      return false;
  }
  return false;
}

void collect_mask(const Formula& f, const EuclideanStructure& n,
                  DependencyMask& out, bool& chamber, int& m, bool& exact) {
  if (f.kind == Formula::Kind::Pred) {
    std::uint32_t seen = 0;
    bool injective = true;
    for (int v : f.vars) {
      if (seen & (1u << (v - 1))) injective = false;
      seen |= 1u << (v - 1);
    }
    if (!injective) return;  // atom is constant false
    int q = n.lang->index_of(f.pred);
    const Peon& p = n.peons[q];
    std::vector<std::uint8_t> vmap(f.vars.size());
    for (std::size_t i = 0; i < f.vars.size(); ++i)
      vmap[i] = static_cast<std::uint8_t>(f.vars[i] - 1);
    for (const auto& [a, u] : p.mask().use) {
      Subset mapped = 0;
      for (int i : subset_elements(a)) mapped |= Subset{1} << vmap[i];
      for (int j = 0; j < p.descriptor().weight_width; ++j)
        if (u.weights & (1u << j)) out.weight(mapped, j);
      for (int i = 0; i < p.descriptor().order_degree; ++i)
        if (u.orders & (1u << i)) out.order(mapped, i);
    }
    if (!p.chamber_grid())
      chamber = false;
    else
      m = std::lcm(m, p.chamber_resolution());
    if (!p.has_exact()) exact = false;
  }
  for (const auto& kid : f.kids) collect_mask(kid, n, out, chamber, m, exact);
}

}  // namespace

EuclideanStructure interpret_theon(const Interpretation& in,
                                   const EuclideanStructure& n) {
  for (const auto& p : in.target->predicates()) {
    int q = n.lang->index_of(p.name);
    if (q < 0 || n.lang->at(q).arity != p.arity)
      throw Error("interpret_theon: theon is not in the target language");
  }
  auto held = std::make_shared<const EuclideanStructure>(n);
  EuclideanStructure out;
  out.lang = in.source;
  out.desc = n.desc;
  out.name = "interpret(" + n.name + ")";
  for (int p = 0; p < in.source->size(); ++p) {
    const Formula f = in.defs[p];
    const int arity = in.source->at(p).arity;
    DependencyMask mask;
    bool chamber = true, exact = true;
    int m = 1;
    collect_mask(f, *held, mask, chamber, m, exact);
    Peon::Pred pred = [held, f](const PointAccess<double>& a) {
      return eval_truth<double>(f, *held, a);
    };
    if (exact) {
      Peon::ExactPred ep = [held, f](const PointAccess<Rational>& a) {
        return eval_truth<Rational>(f, *held, a);
      };
      out.peons.push_back(Peon::with_exact(arity, n.desc, std::move(mask),
                                           std::move(pred), std::move(ep),
                                           chamber ? m : 0));
    } else {
      out.peons.push_back(
          Peon::opaque(arity, n.desc, std::move(mask), std::move(pred)));
    }
  }
  return out;
}

EuclideanStructure reduct_theon(const EuclideanStructure& n, LanguagePtr sub) {
  EuclideanStructure out;
  out.lang = sub;
  out.desc = n.desc;
  out.name = n.name;
  for (const auto& p : sub->predicates()) {
    int q = n.lang->index_of(p.name);
    if (q < 0 || n.lang->at(q).arity != p.arity)
      throw Error("reduct_theon: not a sublanguage");
    out.peons.push_back(n.peons[q]);
  }
  return out;
}

namespace {

Peon lift_factor(const Peon& p, const SpaceDescriptor& joint, int woff, int ooff) {
  auto held = std::make_shared<const Peon>(p);
  SpaceDescriptor sub = p.descriptor();
  DependencyMask mask;
  for (const auto& [a, u] : p.mask().use) {
    for (int j = 0; j < sub.weight_width; ++j)
      if (u.weights & (1u << j)) mask.weight(a, j + woff);
    for (int i = 0; i < sub.order_degree; ++i)
      if (u.orders & (1u << i)) mask.order(a, i + ooff);
  }
  Peon::Pred pred = [held, sub, woff, ooff](const PointAccess<double>& a) {
    OffsetAccess<double> f(a, sub, woff, ooff);
    return held->eval(f);
  };
  if (held->has_exact()) {
    Peon::ExactPred ep = [held, sub, woff, ooff](const PointAccess<Rational>& a) {
      OffsetAccess<Rational> f(a, sub, woff, ooff);
      return held->eval_exact(f);
    };
    return Peon::with_exact(p.arity(), joint, std::move(mask), std::move(pred),
                            std::move(ep), p.chamber_resolution());
  }
  return Peon::opaque(p.arity(), joint, std::move(mask), std::move(pred));
}

}  // namespace

EuclideanStructure independent_coupling(const EuclideanStructure& a,
                                        const EuclideanStructure& b) {
  EuclideanStructure out;
  out.lang = disjoint_union(a.lang, b.lang);
  out.desc = SpaceDescriptor{a.desc.weight_width + b.desc.weight_width,
                             a.desc.order_degree + b.desc.order_degree};
  out.name = a.name + "(x)" + b.name;
  for (const auto& p : a.peons) out.peons.push_back(lift_factor(p, out.desc, 0, 0));
  for (const auto& p : b.peons)
    out.peons.push_back(
        lift_factor(p, out.desc, a.desc.weight_width, a.desc.order_degree));
  return out;
}

DependencyWitness dependency_check(const Peon& p, Subset a, int trials,
                                   std::uint64_t seed) {
  VertexSetPtr vs = VertexSet::range(p.arity());
  for (int t = 0; t < trials; ++t) {
    Point x = Point::sampled(vs, p.descriptor(),
                             rng::key_of({seed, static_cast<std::uint64_t>(t), 0}));
    Coord fresh = sample_coord(*vs, a, p.descriptor(),
                               rng::key_of({seed, static_cast<std::uint64_t>(t), 1}));
    Point y = x.with_coord(a, std::move(fresh));
    if (p.eval_point(x) != p.eval_point(y)) {
      DependencyWitness w;
      w.independent = false;
      w.trial = static_cast<std::uint64_t>(t);
      w.before = std::move(x);
      w.after = std::move(y);
      return w;
    }
  }
  return {};
}

// -------------------------------------------------------------------- gallery

namespace {

template <class S>
bool below_half(const S& x) {
  return S(2) * x < S(1);
}

template <class S>
bool qr_pred(const PointAccess<S>& a) {
  return below_half(a.weight(0b11, 0));
}

template <class S>
bool twist_pred(const PointAccess<S>& a) {
  return below_half(
      mod_one(a.weight(0b01, 0) + a.weight(0b10, 0) + a.weight(0b11, 0)));
}

template <class S>
bool bipartite_pred(const PointAccess<S>& a) {
  return below_half(a.weight(0b01, 0)) != below_half(a.weight(0b10, 0));
}

template <class S>
bool qrt0_pred(const PointAccess<S>& a) {
  return (a.weight(0b01, 0) < a.weight(0b10, 0)) !=
         below_half(a.weight(0b11, 0));
}

template <class S>
bool odd_pred(const PointAccess<S>& a) {
  int c = 0;
  for (Subset s : {Subset{0b011}, Subset{0b101}, Subset{0b110}})
    if (below_half(a.weight(s, 0))) ++c;
  return c % 2 == 1;
}

template <class S>
bool disc_pred(const PointAccess<S>& a) {
  bool any_low = below_half(a.weight(0b001, 0)) ||
                 below_half(a.weight(0b010, 0)) ||
                 below_half(a.weight(0b100, 0));
  if (any_low) return below_half(a.weight(0b111, 0));
  return odd_pred(a);
}

// orientation that the tournament membership induces on a pair {u,v}
template <class S>
bool qrt_dir(const PointAccess<S>& a, int u, int v) {
  Subset pair = (Subset{1} << u) | (Subset{1} << v);
  return (a.weight(Subset{1} << u, 0) < a.weight(Subset{1} << v, 0)) !=
         below_half(a.weight(pair, 0));
}

template <class S>
bool cycle_pred(const PointAccess<S>& a) {
  // the three induced orientations form a directed cycle
  return qrt_dir(a, 0, 1) == qrt_dir(a, 1, 2) &&
         qrt_dir(a, 1, 2) == qrt_dir(a, 2, 0);
}

template <class S>
bool semitwist_pred(const PointAccess<S>& a) {
  bool low = below_half(a.weight(0b01, 0)) || below_half(a.weight(0b10, 0));
  if (low) return below_half(a.weight(0b11, 0));
  return twist_pred(a);
}

bool ascending(const Order& o) {
  for (std::size_t i = 0; i + 1 < o.ranked.size(); ++i)
    if (o.ranked[i] >= o.ranked[i + 1]) return false;
  return true;
}

template <class S>
bool kqro1_pred(int k, const PointAccess<S>& a) {
  return ascending(a.order(full_subset(k), 0));
}

template <class S>
bool kqro0_pred(int k, const PointAccess<S>& a) {
  if (k == 1) return true;  // a 1-orientation holds on every vertex
  const Subset full = full_subset(k);
  // sigma_inv[j] = index removed from the j-th smallest co-singleton weight
  std::vector<std::pair<S, int>> vals;
  vals.reserve(k);
  for (int r = 0; r < k; ++r)
    vals.push_back({a.weight(full ^ (Subset{1} << r), 0), r});
  std::sort(vals.begin(), vals.end(), [](const auto& x, const auto& y) {
    if (x.first < y.first) return true;
    if (y.first < x.first) return false;
    if constexpr (std::is_same_v<S, double>) events().weight_ties++;
    return x.second < y.second;
  });
  std::int64_t fact = 1;
  for (int i = 2; i <= k; ++i) fact *= i;
  Perm target = perm_unrank(k, scaled_floor<S>(a.weight(full, 0), fact));
  for (int j = 0; j < k; ++j)
    if (vals[j].second != target[j]) return false;
  return true;
}

Peon make_peon(int arity, SpaceDescriptor d, DependencyMask mask,
               bool (*dpred)(const PointAccess<double>&),
               bool (*epred)(const PointAccess<Rational>&), int chamber_m) {
  return Peon::with_exact(arity, d, std::move(mask), dpred, epred, chamber_m);
}

}  // namespace

EuclideanStructure gallery(const std::string& name, int k) {
  const SpaceDescriptor w1{1, 0};
  EuclideanStructure n;
  n.name = k > 0 ? name + "(" + std::to_string(k) + ")" : name;
  if (name == "qr_graph") {
    n.lang = graph_language();
    n.desc = w1;
    n.peons.push_back(make_peon(2, w1, DependencyMask().weight(0b11, 0),
                                qr_pred<double>, qr_pred<Rational>, 2));
  } else if (name == "twist_graph") {
    n.lang = graph_language();
    n.desc = w1;
    DependencyMask m;
    m.weight(0b01, 0).weight(0b10, 0).weight(0b11, 0);
    n.peons.push_back(make_peon(2, w1, std::move(m), twist_pred<double>,
                                twist_pred<Rational>, 0));
  } else if (name == "bipartite_graph") {
    n.lang = graph_language();
    n.desc = w1;
    DependencyMask m;
    m.weight(0b01, 0).weight(0b10, 0);
    n.peons.push_back(make_peon(2, w1, std::move(m), bipartite_pred<double>,
                                bipartite_pred<Rational>, 2));
  } else if (name == "semitwist_graph") {
    n.lang = graph_language();
    n.desc = w1;
    DependencyMask m;
    m.weight(0b01, 0).weight(0b10, 0).weight(0b11, 0);
    n.peons.push_back(make_peon(2, w1, std::move(m), semitwist_pred<double>,
                                semitwist_pred<Rational>, 0));
  } else if (name == "qr_tournament_0") {
    n.lang = orientation_language(2);
    n.desc = w1;
    DependencyMask m;
    m.weight(0b01, 0).weight(0b10, 0).weight(0b11, 0);
    n.peons.push_back(make_peon(2, w1, std::move(m), qrt0_pred<double>,
                                qrt0_pred<Rational>, 2));
  } else if (name == "disc_3hypergraph") {
    n.lang = hypergraph3_language();
    n.desc = w1;
    n.peons.push_back(make_peon(3, w1, DependencyMask::everything(3, w1),
                                disc_pred<double>, disc_pred<Rational>, 2));
  } else if (name == "odd_3hypergraph") {
    n.lang = hypergraph3_language();
    n.desc = w1;
    DependencyMask m;
    m.weight(0b011, 0).weight(0b101, 0).weight(0b110, 0);
    n.peons.push_back(
        make_peon(3, w1, std::move(m), odd_pred<double>, odd_pred<Rational>, 2));
  } else if (name == "cycle_3hypergraph") {
    n.lang = hypergraph3_language();
    n.desc = w1;
    DependencyMask m;
    for (Subset s : r_sets(3))
      if (subset_size(s) <= 2) m.weight(s, 0);
    n.peons.push_back(make_peon(3, w1, std::move(m), cycle_pred<double>,
                                cycle_pred<Rational>, 2));
  } else if (name == "kqrO_1theon") {
    if (k < 1) throw Error("kqrO_1theon needs k >= 1");
    if (k > limits().max_order_size) throw Error("k exceeds the factorial cap");
    n.lang = orientation_language(k);
    n.desc = SpaceDescriptor{1, 1};
    DependencyMask m;
    m.order(full_subset(k), 0);
    n.peons.push_back(Peon::with_exact(
        k, n.desc, std::move(m),
        [k](const PointAccess<double>& a) { return kqro1_pred<double>(k, a); },
        [k](const PointAccess<Rational>& a) { return kqro1_pred<Rational>(k, a); },
        1));
  } else if (name == "kqrO_0theon") {
    if (k < 1) throw Error("kqrO_0theon needs k >= 1");
    if (k > limits().max_order_size) throw Error("k exceeds the factorial cap");
    n.lang = orientation_language(k);
    n.desc = w1;
    DependencyMask m;
    const Subset full = full_subset(k);
    m.weight(full, 0);
    for (int r = 0; r < k; ++r)
      if (k > 1) m.weight(full ^ (Subset{1} << r), 0);
    std::int64_t fact = 1;
    for (int i = 2; i <= k; ++i) fact *= i;
    auto table = ChamberTable::build(
        k, w1, static_cast<int>(fact), m,
        [k](const PointAccess<Rational>& a) { return kqro0_pred<Rational>(k, a); });
    n.peons.push_back(Peon::from_table(std::move(table)));
  } else {
    throw Error("unknown gallery entry: " + name);
  }
  return n;
}

std::vector<std::string> gallery_names() {
  return {"qr_graph",         "twist_graph",      "bipartite_graph",
          "semitwist_graph",  "qr_tournament_0",  "disc_3hypergraph",
          "odd_3hypergraph",  "cycle_3hypergraph", "kqrO_1theon",
          "kqrO_0theon"};
}

}  // namespace theon
