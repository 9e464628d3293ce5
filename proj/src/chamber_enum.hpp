#pragma once

// Internal chamber enumerator shared by the peon tables and the exact density
// engine. A chamber fixes, for each free weight coordinate, the interval of a
// common boundary partition of [0,1), the relative ranking of coordinates
// sharing an interval, and one assignment per free order coordinate. Each
// chamber carries its exact volume and a rational representative per weight
// coordinate that realizes the cell/ranking pattern.

#include <functional>
#include <vector>

#include "theon/common.hpp"
#include "theon/space.hpp"

namespace theon::detail {

struct ChamberSpec {
  std::vector<Rational> boundaries;  // 0 = b0 < b1 < ... < bR = 1
  int n_w = 0;
  std::vector<std::vector<Order>> order_choices;  // per order coordinate
};

struct Chamber {
  std::vector<int> interval;     // per weight coordinate
  std::vector<int> rank;         // per weight coordinate, within its interval
  std::vector<int> order_idx;    // per order coordinate
  std::vector<Rational> value;   // representative per weight coordinate
  Rational volume;
};

// Total number of chambers: sum over interval assignments of the product of
// group factorials equals N! * C(N+R-1, R-1); order choices multiply in.
double chamber_count(int n_w, int intervals,
                     const std::vector<std::size_t>& order_counts);

// Enumerates chambers whose first `prefix.size()` interval choices match
// `prefix`, in a fixed deterministic order.
void enumerate_chambers(const ChamberSpec& spec, const std::vector<int>& prefix,
                        const std::function<void(const Chamber&)>& cb);

inline void enumerate_chambers(const ChamberSpec& spec,
                               const std::function<void(const Chamber&)>& cb) {
  enumerate_chambers(spec, {}, cb);
}

}  // namespace theon::detail
