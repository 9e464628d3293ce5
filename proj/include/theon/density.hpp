#pragma once

#include <optional>

#include "theon/peon.hpp"
#include "theon/sampler.hpp"
#include "theon/symbols.hpp"

namespace theon {

// Every kernel exists in a serial reference form and an OpenMP form; results
// are identical by construction (counter-keyed trial seeds, associative exact
// sums), which the test suite checks.
enum class Exec { serial, parallel };

enum class Backend { exact, mc };

struct DensityEstimate {
  double estimate = 0.0;
  double ci_low = 0.0, ci_high = 1.0;  // 99% Wilson interval
  std::uint64_t samples = 0;
  bool exact = false;
  Rational value;  // set when exact

  static DensityEstimate of_exact(Rational v);
  static DensityEstimate of_counts(std::uint64_t hits, std::uint64_t n);
};

struct DistributionTable {
  VertexSetPtr vs;
  bool exact = false;
  bool complete = true;  // every canonical structure enumerated
  std::map<Structure, Rational> probs;       // exact path
  std::map<Structure, std::uint64_t> counts; // mc path
  std::uint64_t total = 0;

  double prob(const Structure& k) const;
  Rational exact_prob(const Structure& k) const;
  std::vector<Structure> support() const;
};

// ---------------------------------------------------------------------------
// Exact engine. Requires every peon to be chamber-grid with an exact
// evaluator. Optional pins fix whole subset coordinates; interval boundaries
// are refined by the pinned weight values so cross-coordinate comparisons stay
// decided.

double exact_cost_estimate(const EuclideanStructure& n, const VertexSetPtr& vs,
                           const PartialPoint* pins = nullptr);

DistributionTable distribution_exact(const EuclideanStructure& n,
                                     VertexSetPtr vs,
                                     const PartialPoint* pins = nullptr,
                                     Exec exec = Exec::parallel);

Rational t_ind_exact(const EuclideanStructure& n, const Structure& k,
                     Exec exec = Exec::parallel);

// ---------------------------------------------------------------------------
// Monte Carlo engine.

DistributionTable distribution_mc(const EuclideanStructure& n, VertexSetPtr vs,
                                  std::uint64_t samples, std::uint64_t seed,
                                  Exec exec = Exec::parallel);

DensityEstimate t_ind_mc(const EuclideanStructure& n, const Structure& k,
                         std::uint64_t samples, std::uint64_t seed,
                         Exec exec = Exec::parallel);

// ---------------------------------------------------------------------------

DistributionTable distribution_on(const EuclideanStructure& n, int vertices,
                                  Backend backend, std::uint64_t budget,
                                  std::uint64_t seed,
                                  Exec exec = Exec::parallel);

// Probability that the sampled structure is isomorphic to k.
DensityEstimate phi(const EuclideanStructure& n, const Structure& k,
                    Backend backend, std::uint64_t budget, std::uint64_t seed,
                    Exec exec = Exec::parallel);

struct EquivalenceReport {
  bool exact = false;
  bool distinguishable = false;
  std::optional<double> p_value;  // mc path only
  double tv = 0.0;                // total variation estimate at this n
  std::optional<Structure> witness;
  int vertices = 0;
  std::uint64_t samples = 0;
};

EquivalenceReport equivalence_test(const EuclideanStructure& a,
                                   const EuclideanStructure& b, int vertices,
                                   std::uint64_t samples, double significance,
                                   std::uint64_t seed,
                                   Exec exec = Exec::parallel);

}  // namespace theon
