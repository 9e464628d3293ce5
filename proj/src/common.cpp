#include "theon/common.hpp"

#include <cmath>

namespace theon {

Limits& limits() {
  static Limits l;
  return l;
}

EventCounters& events() {
  static EventCounters c;
  return c;
}

std::int64_t floor_div(const Rational& q) {
  BigInt num = numerator(q);
  BigInt den = denominator(q);  // always > 0
  BigInt d = num / den;
  if (num < 0 && d * den != num) d -= 1;
  return static_cast<std::int64_t>(d);
}

Rational mod_one(const Rational& q) { return q - floor_div(q); }

double mod_one(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0;  // guard against rounding at the top edge
  return r;
}

BigInt factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 0; i < k; ++i) {
    r *= (n - i);
    r /= (i + 1);
  }
  return r;
}

}  // namespace theon
