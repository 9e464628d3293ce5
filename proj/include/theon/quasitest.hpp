#pragma once

#include <string>

#include "theon/density.hpp"
#include "theon/peon.hpp"

namespace theon {

// One-sided statistical witnesses: "consistent" never claims the property
// holds, only that no violation was detected at the tested size and budget.
struct TestReport {
  std::string property;
  std::string theon;
  int ell = 0;
  int vertices = 0;
  std::uint64_t trials = 0;
  int cells = 0;
  double significance = 0.01;
  double statistic = 0.0;
  double p_value = 1.0;
  bool rejected = false;
  bool low_power = false;
  std::string witness;

  // suite bookkeeping
  bool expected_rejected = false;
  bool acceptable = true;  // landed on the predicted side (or underpowered)
};

// Conditional-distribution flatness: pins the coordinates of every subset of
// size <= ell at grid centers (2 bins per weight component at 1/2; orders of
// pinned subsets enumerated exactly), samples the conditional structure
// distribution per cell, and runs a per-cell chi-square against the
// leave-one-out pool with Bonferroni correction.
TestReport disc_test(const EuclideanStructure& n, int ell, int vertices,
                     int bins_per_coord, std::uint64_t trials_per_cell,
                     double significance, std::uint64_t seed,
                     Exec exec = Exec::parallel);

// Independence of the sampled structure from all coordinates of subsets of
// size <= ell: samples joint (structure, binned low-arity coordinates) and
// tests homogeneity of the structure distribution across the joint bins.
TestReport ucouple_test(const EuclideanStructure& n, int ell, int vertices,
                        int bins_per_coord, std::uint64_t trials,
                        double significance, std::uint64_t seed,
                        Exec exec = Exec::parallel);

// The separating examples, each checked against its predicted side.
std::vector<TestReport> counterexample_suite(std::uint64_t seed,
                                             double budget_scale = 1.0,
                                             Exec exec = Exec::parallel);

bool suite_passed(const std::vector<TestReport>& reports);

}  // namespace theon
