#pragma once

#include "theon/peon.hpp"
#include "theon/space.hpp"
#include "theon/symbols.hpp"

namespace theon {

// ---------------------------------------------------------------------------
// Families (f_i) converting order-free randomness into weight-plus-order
// randomness, with the almost-inverse family (g_i). The native level map is
// the ([0,1)^2 -> [0,1), one order) case; general order degree d uses d
// independent copies per level (copy c owns weight components 2c and 2c+1 of
// the source), and general target width p routes through the interleaving
// isomorphism. Round trips are exact for p = 1 and 26-bit for wider targets.

// The permutation sorting co-singleton values: entry vals[r] belongs to the
// subset missing local index r; the result sigma satisfies
// "vals[sigma^{-1}(1)] <= vals[sigma^{-1}(2)] <= ...". Ties are logged and
// broken by smallest removed index.
Perm sigma_sort(const std::vector<double>& vals);

// The j-th lexicographic permutation of [i], j = floor(t * i!).
Perm tau(int i, double t);

// One native forward level: reads a width-2 point over [i] (components 0 = x,
// 1 = y), returns (top x, pullback of <= along tau(y_top) o sigma_y). Order
// elements are local indices of [i].
std::pair<double, Order> realize_f(const PointAccess<double>& xy);

// The inverse recursion: h and k values over every subset of the ground set.
// y values and the per-subset orders are supplied by callbacks so callers can
// route components freely. k is stored 0-based (the paper-facing value is
// k + 1); h[B] = (y_B + k_B) / |B|!.
struct HkValues {
  std::map<Subset, double> h;
  std::map<Subset, std::int64_t> k;
};
HkValues compute_hk(Subset ground,
                    const std::function<double(Subset)>& yval,
                    const std::function<Order(Subset)>& ordval);

// One native inverse level over the full ground set: returns the source
// weight pair (x_top, h_top).
std::pair<double, double> realize_g(const PointAccess<double>& xyo);

// ---------------------------------------------------------------------------

class RealizationFamily {
 public:
  explicit RealizationFamily(SpaceDescriptor target, int level_cap = 6);

  const SpaceDescriptor& target() const { return target_; }
  const SpaceDescriptor& source() const { return source_; }
  int level_cap() const { return cap_; }

  // Target coordinate of the top subset, read through a source access.
  Coord lift_top(const PointAccess<double>& src) const;

  // Lift of a whole point: source descriptor over V -> target descriptor.
  Point hat_f(const Point& x) const;

  // Almost inverse on points: input carries a doubled weight (2p components,
  // the (x, y) pair) and the d target orders; output is a source point.
  SpaceDescriptor inverse_input() const;
  Point hat_g(const Point& xyo) const;

  // Membership pullback: peons over the target become peons over the source
  // by lifting on the fly. Densities are preserved; effective dependency on a
  // subset drops to its superset closure plus co-singletons.
  EuclideanStructure pull_theon(const EuclideanStructure& n) const;

 private:
  SpaceDescriptor target_;
  SpaceDescriptor source_;
  int cap_;
};

// Source access view of the lifted point (used by pulled peons).
class LiftedAccess final : public PointAccess<double> {
 public:
  LiftedAccess(const PointAccess<double>& src, const RealizationFamily& fam)
      : src_(&src), fam_(&fam) {}

  int arity() const override { return src_->arity(); }
  SpaceDescriptor descriptor() const override { return fam_->target(); }
  double weight(Subset local, int comp) const override;
  Order order(Subset local, int slot) const override;

 private:
  const PointAccess<double>* src_;
  const RealizationFamily* fam_;
};

// ---------------------------------------------------------------------------
// Order simulation: rewrite a 1-theon over derived predicates that carry one
// fixed order assignment per (ell+1)-subset, couple with the quasirandom
// (ell+1)-orientation, and interpret back.

struct SimulationBundle {
  int ell = 0;
  LanguagePtr derived_lang;      // one Q@<assignment> symbol per choice
  EuclideanStructure derived;    // reads no (ell+1)-subset orders
  EuclideanStructure coupled;    // derived joined with the orientation peon
  Interpretation interp;         // source language from the coupled one
};

SimulationBundle simulate_orders(const EuclideanStructure& n, int ell,
                                 int independence_trials, std::uint64_t seed);

}  // namespace theon
