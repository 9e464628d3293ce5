#pragma once

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace theon {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Global resource caps. Mutable so the CLI can raise them explicitly.
struct Limits {
  std::size_t max_enum_structures = std::size_t{1} << 24;
  int max_order_size = 8;  // orders enumerated up to 8! elements
  double max_exact_chambers = 5e7;
  int max_exact_vertices = 4;
  std::size_t lazy_point_threshold = 1'000'000;  // coordinate draws
  std::size_t max_chamber_table = 1'000'000;     // entries per peon table
};

Limits& limits();

// Counters for measure-zero degeneracies hit in floating point (ties when
// sorting weight values, points exactly on a grid line). Tests assert these
// stay at zero and rerun with a fresh seed if not.
struct EventCounters {
  std::atomic<std::uint64_t> weight_ties{0};
  std::atomic<std::uint64_t> boundary_hits{0};

  void reset() {
    weight_ties = 0;
    boundary_hits = 0;
  }
  std::uint64_t total() const { return weight_ties + boundary_hits; }
};

EventCounters& events();

std::int64_t floor_div(const Rational& q);  // floor as integer
Rational mod_one(const Rational& q);
double mod_one(double x);

BigInt factorial(int n);
BigInt binomial(int n, int k);

}  // namespace theon
