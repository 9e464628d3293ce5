#include "theon/realization.hpp"

#include <algorithm>
#include <cmath>

#include "theon/rng.hpp"
#include "theon/sampler.hpp"

namespace theon {

Perm sigma_sort(const std::vector<double>& vals) {
  const int i = static_cast<int>(vals.size());
  std::vector<int> removed(i);
  for (int r = 0; r < i; ++r) removed[r] = r;
  std::sort(removed.begin(), removed.end(), [&](int x, int y) {
    if (vals[x] < vals[y]) return true;
    if (vals[y] < vals[x]) return false;
    events().weight_ties++;
    return x < y;
  });
  // removed[j] = sigma^{-1}(j)
  Perm inv(removed.begin(), removed.end());
  return perm_invert(inv);
}

Perm tau(int i, double t) {
  std::int64_t fact = 1;
  for (int j = 2; j <= i; ++j) fact *= j;
  auto idx = static_cast<std::int64_t>(t * static_cast<double>(fact));
  if (idx >= fact) idx = fact - 1;
  if (idx < 0) idx = 0;
  return perm_unrank(i, idx);
}

namespace {

// order part of one forward level: reads the y component wy only
Order f_level_order(const PointAccess<double>& a, Subset ground, int wy) {
  const int i = subset_size(ground);
  std::vector<int> elems = subset_elements(ground);
  if (i > limits().max_order_size)
    throw Error("realization level exceeds the factorial cap");
  Perm p;
  if (i == 1) {
    p = perm_identity(1);
  } else {
    std::vector<double> co(i);
    for (int r = 0; r < i; ++r)
      co[r] = a.weight(ground ^ (Subset{1} << elems[r]), wy);
    p = perm_compose(tau(i, a.weight(ground, wy)), sigma_sort(co));
  }
  Order ord;
  Perm inv = perm_invert(p);
  ord.ranked.reserve(i);
  for (int r = 0; r < i; ++r)
    ord.ranked.push_back(static_cast<std::uint8_t>(elems[inv[r]]));
  return ord;
}

}  // namespace

std::pair<double, Order> realize_f(const PointAccess<double>& xy) {
  const Subset ground = full_subset(xy.arity());
  return {xy.weight(ground, 0), f_level_order(xy, ground, 1)};
}

HkValues compute_hk(Subset ground, const std::function<double(Subset)>& yval,
                    const std::function<Order(Subset)>& ordval) {
  HkValues out;
  std::vector<Subset> subs;
  for (Subset s = 1; s <= ground; ++s)
    if ((s & ground) == s) subs.push_back(s);
  std::sort(subs.begin(), subs.end(), [](Subset a, Subset b) {
    int sa = subset_size(a), sb = subset_size(b);
    return sa != sb ? sa < sb : a < b;
  });
  for (Subset b : subs) {
    const int i = subset_size(b);
    if (i > limits().max_order_size)
      throw Error("realization level exceeds the factorial cap");
    std::int64_t kk = 0;
    if (i > 1) {
      std::vector<int> elems = subset_elements(b);
      std::vector<double> co(i);
      for (int r = 0; r < i; ++r)
        co[r] = out.h.at(b ^ (Subset{1} << elems[r]));
      Perm sigma = sigma_sort(co);
      Perm rho = order_to_perm(ordval(b), elems);
      kk = perm_rank(perm_compose(rho, perm_invert(sigma)));
    }
    std::int64_t fact = 1;
    for (int j = 2; j <= i; ++j) fact *= j;
    out.k[b] = kk;
    out.h[b] = (yval(b) + static_cast<double>(kk)) / static_cast<double>(fact);
  }
  return out;
}

std::pair<double, double> realize_g(const PointAccess<double>& xyo) {
  const Subset ground = full_subset(xyo.arity());
  HkValues hk = compute_hk(
      ground, [&](Subset b) { return xyo.weight(b, 1); },
      [&](Subset b) { return xyo.order(b, 0); });
  return {xyo.weight(ground, 0), hk.h.at(ground)};
}

// ------------------------------------------------------------------- family

RealizationFamily::RealizationFamily(SpaceDescriptor target, int level_cap)
    : target_(target), cap_(level_cap) {
  if (target.order_degree == 0)
    source_ = SpaceDescriptor{target.weight_width, 0};
  else
    source_ = SpaceDescriptor{2 * target.order_degree, 0};
}

Coord RealizationFamily::lift_top(const PointAccess<double>& src) const {
  const Subset ground = full_subset(src.arity());
  if (subset_size(ground) > cap_)
    throw Error("subset size exceeds the realization level cap");
  Coord c;
  if (target_.order_degree == 0) {
    c.w.resize(target_.weight_width);
    for (int j = 0; j < target_.weight_width; ++j) c.w[j] = src.weight(ground, j);
    return c;
  }
  c.w = split_many(src.weight(ground, 0), target_.weight_width);
  c.ord.reserve(target_.order_degree);
  for (int copy = 0; copy < target_.order_degree; ++copy)
    c.ord.push_back(f_level_order(src, ground, 2 * copy + 1));
  return c;
}

double LiftedAccess::weight(Subset local, int comp) const {
  if (fam_->target().order_degree == 0) return src_->weight(local, comp);
  return split_many(src_->weight(local, 0), fam_->target().weight_width)[comp];
}

Order LiftedAccess::order(Subset local, int slot) const {
  if (subset_size(local) > fam_->level_cap())
    throw Error("subset size exceeds the realization level cap");
  return f_level_order(*src_, local, 2 * slot + 1);
}

Point RealizationFamily::hat_f(const Point& x) const {
  if (!(x.descriptor() == source_)) throw Error("hat_f: source descriptor mismatch");
  std::map<Subset, Coord> out;
  for (Subset a : r_sets(x.vertex_set()->size(), x.ell())) {
    Injection alpha = Injection::order_preserving(x.vertex_set(), a);
    Point local = x.pullback(alpha);
    BaseAccess acc(local);
    Coord c = lift_top(acc);
    for (auto& o : c.ord) {
      // relabel local ranks back through the enumeration injection
      for (auto& e : o.ranked) e = alpha.map[e];
    }
    out[a] = std::move(c);
  }
  return Point::materialized(x.vertex_set(), target_, std::move(out), x.ell());
}

SpaceDescriptor RealizationFamily::inverse_input() const {
  return SpaceDescriptor{2 * target_.weight_width, target_.order_degree};
}

Point RealizationFamily::hat_g(const Point& xyo) const {
  if (!(xyo.descriptor() == inverse_input()))
    throw Error("hat_g: input descriptor mismatch");
  const int p = target_.weight_width;
  const int d = target_.order_degree;
  const int n = xyo.vertex_set()->size();

  if (d == 0) {
    std::map<Subset, Coord> out;
    for (Subset a : r_sets(n, xyo.ell())) {
      Coord c;
      c.w.resize(p);
      for (int j = 0; j < p; ++j) c.w[j] = xyo.weight(a, j);
      out[a] = std::move(c);
    }
    return Point::materialized(xyo.vertex_set(), source_, std::move(out), xyo.ell());
  }

  // independent uniform streams per subset from the y copy
  auto streams = [&](Subset a) {
    std::vector<double> ys(p);
    for (int j = 0; j < p; ++j) ys[j] = xyo.weight(a, p + j);
    return split_many(interleave_many(ys), 2 * d - 1);
  };

  std::vector<HkValues> hk(d);
  const Subset ground = full_subset(n);
  for (int c = 0; c < d; ++c)
    hk[c] = compute_hk(
        ground, [&](Subset b) { return streams(b)[c]; },
        [&](Subset b) { return xyo.order(b, c); });

  std::map<Subset, Coord> out;
  for (Subset a : r_sets(n, xyo.ell())) {
    std::vector<double> xs(p);
    for (int j = 0; j < p; ++j) xs[j] = xyo.weight(a, j);
    std::vector<double> zu = streams(a);
    Coord c;
    c.w.resize(2 * d);
    c.w[0] = interleave_many(xs);
    c.w[1] = hk[0].h.at(a);
    for (int copy = 1; copy < d; ++copy) {
      c.w[2 * copy] = zu[d + copy - 1];
      c.w[2 * copy + 1] = hk[copy].h.at(a);
    }
    out[a] = std::move(c);
  }
  return Point::materialized(xyo.vertex_set(), source_, std::move(out), xyo.ell());
}

EuclideanStructure RealizationFamily::pull_theon(const EuclideanStructure& n) const {
  if (!(n.desc == target_)) throw Error("pull_theon: target descriptor mismatch");
  auto fam = std::make_shared<const RealizationFamily>(*this);
  EuclideanStructure out;
  out.lang = n.lang;
  out.desc = source_;
  out.name = "strip_orders(" + n.name + ")";
  for (const auto& peon : n.peons) {
    if (peon.arity() > cap_)
      throw Error("pull_theon: arity exceeds the realization level cap");
    auto held = std::make_shared<const Peon>(peon);
    DependencyMask mask;
    if (target_.order_degree == 0) {
      mask = peon.mask();
    } else {
      for (const auto& [a, u] : peon.mask().use) {
        if (u.weights) mask.weight(a, 0);  // x copy, top coordinate only
        for (int c = 0; c < target_.order_degree; ++c) {
          if (!(u.orders & (1u << c))) continue;
          mask.weight(a, 2 * c + 1);
          if (subset_size(a) > 1)
            for (int e : subset_elements(a))
              mask.weight(a ^ (Subset{1} << e), 2 * c + 1);
        }
      }
    }
    Peon::Pred pred = [held, fam](const PointAccess<double>& acc) {
      LiftedAccess lifted(acc, *fam);
      return held->eval(lifted);
    };
    out.peons.push_back(
        Peon::opaque(peon.arity(), source_, std::move(mask), std::move(pred)));
  }
  return out;
}

// --------------------------------------------------------------- simulation

namespace {

std::string order_suffix(const std::map<Subset, Order>& assignment) {
  std::string s;
  for (const auto& [sub, ord] : assignment) {
    if (!s.empty()) s += '.';
    for (auto e : ord.ranked) s += std::to_string(static_cast<int>(e) + 1);
  }
  return s;
}

Peon orientation_peon(int k, const SpaceDescriptor& desc) {
  DependencyMask m;
  m.order(full_subset(k), 0);
  return Peon::with_exact(
      k, desc, std::move(m),
      [k](const PointAccess<double>& a) {
        Order o = a.order(full_subset(k), 0);
        return std::is_sorted(o.ranked.begin(), o.ranked.end()) &&
               std::adjacent_find(o.ranked.begin(), o.ranked.end()) ==
                   o.ranked.end();
      },
      [k](const PointAccess<Rational>& a) {
        Order o = a.order(full_subset(k), 0);
        return std::is_sorted(o.ranked.begin(), o.ranked.end()) &&
               std::adjacent_find(o.ranked.begin(), o.ranked.end()) ==
                   o.ranked.end();
      },
      1);
}

}  // namespace

SimulationBundle simulate_orders(const EuclideanStructure& n, int ell,
                                 int independence_trials, std::uint64_t seed) {
  if (n.desc.order_degree != 1)
    throw Error("simulate_orders expects a single order per subset");
  if (ell + 1 > limits().max_order_size)
    throw Error("simulate_orders: ell exceeds the factorial cap");

  // verify the declared independence before rewriting
  for (int p = 0; p < n.lang->size(); ++p) {
    for (Subset a : r_sets(n.peons[p].arity(), ell)) {
      DependencyWitness w = dependency_check(
          n.peons[p], a, independence_trials,
          rng::key_of({seed, static_cast<std::uint64_t>(p), a}));
      if (!w.independent)
        throw Error("simulate_orders: theon is not independent of a low-arity coordinate");
    }
  }

  SimulationBundle bundle;
  bundle.ell = ell;

  std::vector<Predicate> derived_preds;
  std::vector<Peon> derived_peons;
  std::vector<Formula> defs(n.lang->size());

  for (int p = 0; p < n.lang->size(); ++p) {
    const Predicate& q = n.lang->at(p);
    const int k = q.arity;
    std::vector<Subset> tops;
    for (Subset s : r_sets(k))
      if (subset_size(s) == ell + 1) tops.push_back(s);

    // all assignments of one order per (ell+1)-subset of [k]
    std::vector<std::map<Subset, Order>> assignments{{}};
    for (Subset s : tops) {
      std::vector<std::map<Subset, Order>> next;
      for (const auto& partial : assignments)
        for (const Order& o : all_orders_of_subset(s)) {
          auto ext = partial;
          ext[s] = o;
          next.push_back(std::move(ext));
        }
      assignments = std::move(next);
    }

    std::vector<Formula> branches;
    for (const auto& assignment : assignments) {
      std::string name = q.name + "@" + order_suffix(assignment);
      derived_preds.push_back(Predicate{name, k, false});

      auto held = std::make_shared<const Peon>(n.peons[p]);
      auto fixed = std::make_shared<const std::map<Subset, Order>>(assignment);
      DependencyMask mask;
      for (const auto& [a, u] : held->mask().use) {
        std::uint32_t orders = u.orders;
        if (subset_size(a) == ell + 1) orders = 0;  // replaced, never read
        for (int j = 0; j < n.desc.weight_width; ++j)
          if (u.weights & (1u << j)) mask.weight(a, j);
        if (orders & 1u) mask.order(a, 0);
      }
      Peon::Pred pred = [held, fixed](const PointAccess<double>& a) {
        ReplaceOrdersAccess<double> rep(a, *fixed);
        return held->eval(rep);
      };
      if (held->has_exact()) {
        Peon::ExactPred ep = [held, fixed](const PointAccess<Rational>& a) {
          ReplaceOrdersAccess<Rational> rep(a, *fixed);
          return held->eval_exact(rep);
        };
        derived_peons.push_back(Peon::with_exact(k, n.desc, std::move(mask),
                                                 std::move(pred), std::move(ep),
                                                 held->chamber_resolution()));
      } else {
        derived_peons.push_back(
            Peon::opaque(k, n.desc, std::move(mask), std::move(pred)));
      }

      // branch: Q@<assignment> and the orientation atoms pinning each subset
      std::vector<int> vars(k);
      for (int i = 0; i < k; ++i) vars[i] = i + 1;
      std::vector<Formula> conj{Formula::atom(name, vars)};
      for (const auto& [sub, ord] : assignment) {
        std::vector<int> ovars;
        ovars.reserve(ord.ranked.size());
        for (auto e : ord.ranked) ovars.push_back(static_cast<int>(e) + 1);
        conj.push_back(Formula::atom("P", ovars));
      }
      branches.push_back(Formula::conj(std::move(conj)));
    }
    defs[p] = Formula::disj(std::move(branches));
  }

  bundle.derived_lang = Language::of(derived_preds);
  bundle.derived.lang = bundle.derived_lang;
  bundle.derived.desc = n.desc;
  bundle.derived.name = "derived(" + n.name + ")";
  bundle.derived.peons = derived_peons;

  LanguagePtr coupled_lang =
      disjoint_union(bundle.derived_lang, Language::of({{"P", ell + 1, false}}));
  bundle.coupled.lang = coupled_lang;
  bundle.coupled.desc = n.desc;
  bundle.coupled.name = "coupled(" + n.name + ")";
  bundle.coupled.peons = derived_peons;
  bundle.coupled.peons.push_back(orientation_peon(ell + 1, n.desc));

  bundle.interp = Interpretation::of(n.lang, coupled_lang, std::move(defs));
  return bundle;
}

}  // namespace theon
