#include "theon/density.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "chamber_enum.hpp"
#include "theon/rng.hpp"
#include "theon/stats.hpp"

namespace theon {

DensityEstimate DensityEstimate::of_exact(Rational v) {
  DensityEstimate e;
  e.exact = true;
  e.value = v;
  e.estimate = static_cast<double>(v);
  e.ci_low = e.ci_high = e.estimate;
  return e;
}

DensityEstimate DensityEstimate::of_counts(std::uint64_t hits, std::uint64_t n) {
  DensityEstimate e;
  e.samples = n;
  e.estimate = n ? static_cast<double>(hits) / n : 0.0;
  auto ci = stats::wilson_ci(hits, n);
  e.ci_low = ci.low;
  e.ci_high = ci.high;
  return e;
}

double DistributionTable::prob(const Structure& k) const {
  if (exact) {
    auto it = probs.find(k);
    return it == probs.end() ? 0.0 : static_cast<double>(it->second);
  }
  auto it = counts.find(k);
  return (it == counts.end() || total == 0)
             ? 0.0
             : static_cast<double>(it->second) / static_cast<double>(total);
}

Rational DistributionTable::exact_prob(const Structure& k) const {
  if (!exact) throw Error("table is not exact");
  auto it = probs.find(k);
  return it == probs.end() ? Rational(0) : it->second;
}

std::vector<Structure> DistributionTable::support() const {
  std::vector<Structure> out;
  if (exact) {
    for (const auto& [k, p] : probs)
      if (p != 0) out.push_back(k);
  } else {
    for (const auto& [k, c] : counts)
      if (c) out.push_back(k);
  }
  return out;
}

// ------------------------------------------------------------- exact engine

namespace {

struct ExactPlan {
  VertexSetPtr vs;
  int m = 1;
  std::map<Subset, CoordUse> relevant;
  std::vector<std::pair<Subset, int>> free_w;
  std::vector<std::pair<Subset, int>> free_o;
  std::map<Subset, ExactCoord> pinned;  // exactified pinned coordinates
  detail::ChamberSpec spec;
};

ExactPlan plan_exact(const EuclideanStructure& n, const VertexSetPtr& vs,
                     const PartialPoint* pins) {
  if (!n.exact_ready()) throw Error("exact engine: a peon has no exact evaluator");
  int m = n.chamber_resolution();
  if (m == 0) throw Error("exact engine: a peon is not chamber-grid");
  if (vs->size() > limits().max_exact_vertices)
    throw Error("exact engine: vertex count exceeds the configured cap");

  ExactPlan plan;
  plan.vs = vs;
  plan.m = m;
  const int nv = vs->size();

  // union of peon masks pulled along every injective tuple
  for (int p = 0; p < n.lang->size(); ++p) {
    const Peon& peon = n.peons[p];
    const int k = peon.arity();
    if (k > nv) continue;
    std::vector<std::uint8_t> tuple(k);
    auto rec = [&](auto&& self, int pos, std::uint32_t used) -> void {
      if (pos == k) {
        for (const auto& [a, u] : peon.mask().use) {
          Subset mapped = 0;
          for (int i : subset_elements(a)) mapped |= Subset{1} << tuple[i];
          plan.relevant[mapped].weights |= u.weights;
          plan.relevant[mapped].orders |= u.orders;
        }
        return;
      }
      for (int v = 0; v < nv; ++v) {
        if (used & (1u << v)) continue;
        tuple[pos] = static_cast<std::uint8_t>(v);
        self(self, pos + 1, used | (1u << v));
      }
    };
    rec(rec, 0, 0);
  }

  if (pins) {
    pins->validate();
    if (pins->vs->labels() != vs->labels())
      throw Error("pins are over a different vertex set");
    if (!(pins->desc == n.desc)) throw Error("pin descriptor mismatch");
    for (const auto& [a, c] : pins->pins) {
      ExactCoord ec;
      ec.w.reserve(c.w.size());
      for (double w : c.w) ec.w.push_back(Rational(w));  // dyadic, exact
      ec.ord = c.ord;
      plan.pinned[a] = std::move(ec);
    }
  }

  // boundary partition: the grid refined by relevant pinned weight values
  std::vector<Rational> bounds;
  for (int i = 0; i <= m; ++i) bounds.push_back(Rational(i, m));
  for (const auto& [a, u] : plan.relevant) {
    auto it = plan.pinned.find(a);
    if (it == plan.pinned.end()) continue;
    for (int j = 0; j < n.desc.weight_width; ++j)
      if (u.weights & (1u << j)) bounds.push_back(it->second.w[j]);
  }
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
  plan.spec.boundaries = std::move(bounds);

  for (const auto& [a, u] : plan.relevant) {
    if (plan.pinned.count(a)) continue;
    for (int j = 0; j < n.desc.weight_width; ++j)
      if (u.weights & (1u << j)) plan.free_w.push_back({a, j});
    for (int i = 0; i < n.desc.order_degree; ++i)
      if (u.orders & (1u << i)) plan.free_o.push_back({a, i});
  }
  plan.spec.n_w = static_cast<int>(plan.free_w.size());
  for (const auto& [a, slot] : plan.free_o)
    plan.spec.order_choices.push_back(all_orders_of_subset(a));
  return plan;
}

double plan_cost(const ExactPlan& plan) {
  std::vector<std::size_t> order_counts;
  for (const auto& c : plan.spec.order_choices) order_counts.push_back(c.size());
  return detail::chamber_count(
      plan.spec.n_w, static_cast<int>(plan.spec.boundaries.size()) - 1,
      order_counts);
}

void accumulate_chamber(const EuclideanStructure& n, const ExactPlan& plan,
                        const detail::Chamber& ch,
                        std::map<Structure, Rational>& acc) {
  ExactPoint pt;
  pt.vs = plan.vs;
  pt.desc = n.desc;
  for (const auto& [a, ec] : plan.pinned) pt.coords[a] = ec;
  auto ensure = [&](Subset a) -> ExactCoord& {
    auto& c = pt.coords[a];
    if (c.w.empty()) {
      c.w.resize(n.desc.weight_width, Rational(0));
      c.ord.resize(n.desc.order_degree);
    }
    return c;
  };
  for (std::size_t i = 0; i < plan.free_w.size(); ++i)
    ensure(plan.free_w[i].first).w[plan.free_w[i].second] = ch.value[i];
  for (std::size_t i = 0; i < plan.free_o.size(); ++i)
    ensure(plan.free_o[i].first).ord[plan.free_o[i].second] =
        plan.spec.order_choices[i][ch.order_idx[i]];
  Structure st = realize_structure_exact(n, pt);
  acc[st] += ch.volume;
}

std::map<Structure, Rational> run_exact(const EuclideanStructure& n,
                                        const ExactPlan& plan, Exec exec) {
  double cost = plan_cost(plan);
  if (cost > limits().max_exact_chambers)
    throw Error("exact engine: chamber count " + std::to_string(cost) +
                " exceeds the configured cap");

  const int R = static_cast<int>(plan.spec.boundaries.size()) - 1;
  std::map<Structure, Rational> acc;

  int prefix_len = 0;
  std::int64_t prefix_count = 1;
  if (exec == Exec::parallel) {
    const int want = 4 * omp_get_max_threads();
    while (prefix_len < plan.spec.n_w && prefix_count < want &&
           prefix_count * R <= 65536) {
      prefix_count *= R;
      ++prefix_len;
    }
  }

  if (prefix_len == 0) {
    detail::enumerate_chambers(plan.spec, [&](const detail::Chamber& ch) {
      accumulate_chamber(n, plan, ch, acc);
    });
    return acc;
  }

  std::vector<std::map<Structure, Rational>> parts(prefix_count);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t id = 0; id < prefix_count; ++id) {
    std::vector<int> prefix(prefix_len);
    std::int64_t rem = id;
    for (int i = prefix_len - 1; i >= 0; --i) {
      prefix[i] = static_cast<int>(rem % R);
      rem /= R;
    }
    detail::enumerate_chambers(plan.spec, prefix, [&](const detail::Chamber& ch) {
      accumulate_chamber(n, plan, ch, parts[id]);
    });
  }
  for (auto& part : parts)
    for (auto& [st, v] : part) acc[st] += v;
  return acc;
}

}  // namespace

double exact_cost_estimate(const EuclideanStructure& n, const VertexSetPtr& vs,
                           const PartialPoint* pins) {
  return plan_cost(plan_exact(n, vs, pins));
}

DistributionTable distribution_exact(const EuclideanStructure& n,
                                     VertexSetPtr vs, const PartialPoint* pins,
                                     Exec exec) {
  ExactPlan plan = plan_exact(n, vs, pins);
  DistributionTable t;
  t.vs = vs;
  t.exact = true;
  t.probs = run_exact(n, plan, exec);
  Rational sum = 0;
  for (const auto& [st, v] : t.probs) sum += v;
  if (sum != 1) throw Error("exact engine: chamber volumes do not sum to 1");
  return t;
}

Rational t_ind_exact(const EuclideanStructure& n, const Structure& k,
                     Exec exec) {
  if (!n.lang->same_shape(*k.lang))
    throw Error("t_ind_exact: structure language does not match the theon");
  DistributionTable t = distribution_exact(n, k.vertices, nullptr, exec);
  return t.exact_prob(k);
}

// ---------------------------------------------------------------- mc engine

DistributionTable distribution_mc(const EuclideanStructure& n, VertexSetPtr vs,
                                  std::uint64_t samples, std::uint64_t seed,
                                  Exec exec) {
  DistributionTable t;
  t.vs = vs;
  t.exact = false;
  t.total = samples;
  if (exec == Exec::serial) {
    for (std::uint64_t i = 0; i < samples; ++i)
      t.counts[sample_structure(n, vs, rng::key_of({seed, i}))] += 1;
    return t;
  }
#pragma omp parallel
  {
    std::map<Structure, std::uint64_t> local;
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(samples); ++i)
      local[sample_structure(n, vs,
                             rng::key_of({seed, static_cast<std::uint64_t>(i)}))] += 1;
#pragma omp critical
    for (auto& [st, c] : local) t.counts[st] += c;
  }
  return t;
}

DensityEstimate t_ind_mc(const EuclideanStructure& n, const Structure& k,
                         std::uint64_t samples, std::uint64_t seed, Exec exec) {
  if (samples < 1) throw Error("t_ind_mc needs at least one sample");
  std::uint64_t hits = 0;
  if (exec == Exec::serial) {
    for (std::uint64_t i = 0; i < samples; ++i)
      if (sample_structure(n, k.vertices, rng::key_of({seed, i})) == k) ++hits;
  } else {
#pragma omp parallel for schedule(static) reduction(+ : hits)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(samples); ++i)
      if (sample_structure(n, k.vertices,
                           rng::key_of({seed, static_cast<std::uint64_t>(i)})) == k)
        ++hits;
  }
  return DensityEstimate::of_counts(hits, samples);
}

// --------------------------------------------------------------- high level

DistributionTable distribution_on(const EuclideanStructure& n, int vertices,
                                  Backend backend, std::uint64_t budget,
                                  std::uint64_t seed, Exec exec) {
  VertexSetPtr vs = VertexSet::range(vertices);
  DistributionTable t = (backend == Backend::exact)
                            ? distribution_exact(n, vs, nullptr, exec)
                            : distribution_mc(n, vs, budget, seed, exec);
  try {
    for (Structure& st : enumerate_structures(n.lang, vs)) {
      if (t.exact)
        t.probs.try_emplace(st, 0);
      else
        t.counts.try_emplace(st, 0);
    }
  } catch (const Error&) {
    t.complete = false;  // enumeration over the cap: keep observed entries only
  }
  return t;
}

DensityEstimate phi(const EuclideanStructure& n, const Structure& k,
                    Backend backend, std::uint64_t budget, std::uint64_t seed,
                    Exec exec) {
  std::int64_t aut = automorphism_count(k);
  if (backend == Backend::exact) {
    Rational t = t_ind_exact(n, k, exec);
    Rational scale(factorial(k.vertices->size()), aut);
    return DensityEstimate::of_exact(t * scale);
  }
  std::uint64_t hits = 0;
  if (exec == Exec::serial) {
    for (std::uint64_t i = 0; i < budget; ++i)
      if (isomorphic(sample_structure(n, k.vertices, rng::key_of({seed, i})), k))
        ++hits;
  } else {
#pragma omp parallel for schedule(static) reduction(+ : hits)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(budget); ++i)
      if (isomorphic(sample_structure(n, k.vertices,
                                      rng::key_of({seed, static_cast<std::uint64_t>(i)})),
                     k))
        ++hits;
  }
  return DensityEstimate::of_counts(hits, budget);
}

// ---------------------------------------------------------------- equivalence

namespace {

bool exact_capable(const EuclideanStructure& n, int vertices) {
  return n.exact_ready() && n.chamber_resolution() > 0 &&
         vertices <= limits().max_exact_vertices;
}

}  // namespace

EquivalenceReport equivalence_test(const EuclideanStructure& a,
                                   const EuclideanStructure& b, int vertices,
                                   std::uint64_t samples, double significance,
                                   std::uint64_t seed, Exec exec) {
  if (!a.lang->same_shape(*b.lang))
    throw Error("equivalence_test: languages do not match after renaming");
  VertexSetPtr vs = VertexSet::range(vertices);
  EquivalenceReport rep;
  rep.vertices = vertices;

  if (exact_capable(a, vertices) && exact_capable(b, vertices)) {
    DistributionTable ta = distribution_exact(a, vs, nullptr, exec);
    DistributionTable tb = distribution_exact(b, vs, nullptr, exec);
    rep.exact = true;
    Rational tv = 0;
    Rational maxdiff = 0;
    std::map<Structure, Rational> diff;
    for (const auto& [st, p] : ta.probs) diff[st] += p;
    for (const auto& [st, p] : tb.probs) diff[st] -= p;
    for (const auto& [st, d] : diff) {
      Rational ad = d < 0 ? Rational(-d) : d;
      tv += ad;
      if (ad > maxdiff) {
        maxdiff = ad;
        rep.witness = st;
      }
    }
    rep.tv = static_cast<double>(tv / 2);
    rep.distinguishable = maxdiff != 0;
    if (!rep.distinguishable) rep.witness.reset();
    return rep;
  }

  DistributionTable ta = distribution_mc(a, vs, samples, rng::key_of({seed, 0xa}), exec);
  DistributionTable tb = distribution_mc(b, vs, samples, rng::key_of({seed, 0xb}), exec);
  rep.samples = samples;
  const double na = static_cast<double>(ta.total);
  const double nb = static_cast<double>(tb.total);

  std::map<Structure, std::pair<std::uint64_t, std::uint64_t>> cells;
  for (const auto& [st, c] : ta.counts) cells[st].first += c;
  for (const auto& [st, c] : tb.counts) cells[st].second += c;

  double tv = 0.0, maxdiff = -1.0;
  for (const auto& [st, c] : cells) {
    double d = std::fabs(c.first / na - c.second / nb);
    tv += d;
    if (d > maxdiff) {
      maxdiff = d;
      rep.witness = st;
    }
  }
  rep.tv = tv / 2.0;

  // two-sample homogeneity; sparse cells merged so expected counts stay >= 5
  double stat = 0.0;
  int used = 0;
  double rest_a = 0.0, rest_b = 0.0;
  for (const auto& [st, c] : cells) {
    double pooled = (c.first + c.second) / (na + nb);
    double ea = na * pooled, eb = nb * pooled;
    if (ea < 5.0 || eb < 5.0) {
      rest_a += static_cast<double>(c.first);
      rest_b += static_cast<double>(c.second);
      continue;
    }
    stat += (c.first - ea) * (c.first - ea) / ea +
            (c.second - eb) * (c.second - eb) / eb;
    ++used;
  }
  double pooled_rest = (rest_a + rest_b) / (na + nb);
  if (pooled_rest > 0.0 && na * pooled_rest >= 5.0 && nb * pooled_rest >= 5.0) {
    double ea = na * pooled_rest, eb = nb * pooled_rest;
    stat += (rest_a - ea) * (rest_a - ea) / ea + (rest_b - eb) * (rest_b - eb) / eb;
    ++used;
  }
  double p = used >= 2 ? stats::chisq_sf(stat, used - 1) : 1.0;
  rep.p_value = p;
  rep.distinguishable = p < significance;
  if (!rep.distinguishable) rep.witness.reset();
  return rep;
}

}  // namespace theon
