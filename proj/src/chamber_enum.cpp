#include "chamber_enum.hpp"

#include <algorithm>
#include <cmath>

namespace theon::detail {

double chamber_count(int n_w, int intervals,
                     const std::vector<std::size_t>& order_counts) {
  double t = 1.0;
  for (int i = 1; i <= n_w; ++i) t *= i;
  // C(n_w + R - 1, R - 1)
  double c = 1.0;
  for (int i = 1; i <= intervals - 1; ++i)
    c *= static_cast<double>(n_w + i) / static_cast<double>(i);
  t *= c;
  for (std::size_t k : order_counts) t *= static_cast<double>(k);
  return t;
}

namespace {

struct Enumerator {
  const ChamberSpec& spec;
  const std::function<void(const Chamber&)>& cb;
  int R;
  std::vector<Rational> width;
  Chamber ch;

  Enumerator(const ChamberSpec& s, const std::function<void(const Chamber&)>& f)
      : spec(s), cb(f) {
    R = static_cast<int>(spec.boundaries.size()) - 1;
    width.resize(R);
    for (int i = 0; i < R; ++i)
      width[i] = spec.boundaries[i + 1] - spec.boundaries[i];
    ch.interval.resize(spec.n_w);
    ch.rank.resize(spec.n_w);
    ch.value.resize(spec.n_w);
    ch.order_idx.resize(spec.order_choices.size());
  }

  void run(const std::vector<int>& prefix) {
    for (std::size_t i = 0; i < prefix.size(); ++i) ch.interval[i] = prefix[i];
    assign_intervals(static_cast<int>(prefix.size()));
  }

  void assign_intervals(int coord) {
    if (coord == spec.n_w) {
      rank_groups();
      return;
    }
    for (int iv = 0; iv < R; ++iv) {
      ch.interval[coord] = iv;
      assign_intervals(coord + 1);
    }
  }

  void rank_groups() {
    // groups of coordinates sharing an interval, in ascending interval order
    std::vector<std::vector<int>> groups;
    for (int iv = 0; iv < R; ++iv) {
      std::vector<int> g;
      for (int c = 0; c < spec.n_w; ++c)
        if (ch.interval[c] == iv) g.push_back(c);
      if (!g.empty()) groups.push_back(std::move(g));
    }
    Rational base = 1;
    for (int c = 0; c < spec.n_w; ++c) base *= width[ch.interval[c]];
    for (const auto& g : groups)
      base /= Rational(factorial(static_cast<int>(g.size())));
    rank_group(groups, 0, base);
  }

  void rank_group(const std::vector<std::vector<int>>& groups, std::size_t gi,
                  const Rational& base) {
    if (gi == groups.size()) {
      assign_orders(0, base);
      return;
    }
    const auto& g = groups[gi];
    std::vector<int> perm(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) perm[i] = static_cast<int>(i);
    do {
      // perm[r] = which member of g holds rank r
      for (std::size_t r = 0; r < g.size(); ++r) {
        int c = g[perm[r]];
        ch.rank[c] = static_cast<int>(r);
        const Rational& lo = spec.boundaries[ch.interval[c]];
        ch.value[c] = lo + width[ch.interval[c]] *
                               Rational(static_cast<int>(r) + 1,
                                        static_cast<int>(g.size()) + 1);
      }
      rank_group(groups, gi + 1, base);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  void assign_orders(std::size_t oi, const Rational& vol) {
    if (oi == spec.order_choices.size()) {
      ch.volume = vol;
      cb(ch);
      return;
    }
    const auto& choices = spec.order_choices[oi];
    Rational v = vol / Rational(static_cast<std::int64_t>(choices.size()));
    for (std::size_t j = 0; j < choices.size(); ++j) {
      ch.order_idx[oi] = static_cast<int>(j);
      assign_orders(oi + 1, v);
    }
  }
};

}  // namespace

void enumerate_chambers(const ChamberSpec& spec, const std::vector<int>& prefix,
                        const std::function<void(const Chamber&)>& cb) {
  if (spec.boundaries.size() < 2) throw Error("chamber spec needs boundaries");
  Enumerator e(spec, cb);
  e.run(prefix);
}

}  // namespace theon::detail
