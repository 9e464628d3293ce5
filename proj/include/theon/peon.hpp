#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "theon/common.hpp"
#include "theon/space.hpp"
#include "theon/symbols.hpp"

namespace theon {

// ---------------------------------------------------------------------------
// Coordinate access for membership predicates. A predicate never touches a
// Point directly; it reads coordinates of a point over [k] (local indices)
// through this interface, which lets pullbacks, couplings and order
// replacement compose without materializing intermediate points, and lets the
// declared dependency mask be enforced on every read.

template <class S>
struct PointAccess {
  virtual ~PointAccess() = default;
  virtual int arity() const = 0;
  virtual SpaceDescriptor descriptor() const = 0;
  virtual S weight(Subset local, int comp) const = 0;
  virtual Order order(Subset local, int slot) const = 0;
};

// Exact point: rational weights, possibly defined on a sub-family of subsets.
struct ExactCoord {
  std::vector<Rational> w;
  std::vector<Order> ord;
};

struct ExactPoint {
  VertexSetPtr vs;
  SpaceDescriptor desc;
  std::map<Subset, ExactCoord> coords;

  const ExactCoord& at(Subset a) const;
};

// Adapter over a concrete Point (double path).
class BaseAccess final : public PointAccess<double> {
 public:
  BaseAccess(const Point& p, std::vector<std::uint8_t> vmap);
  explicit BaseAccess(const Point& p);  // identity map

  int arity() const override { return static_cast<int>(vmap_.size()); }
  SpaceDescriptor descriptor() const override { return point_->descriptor(); }
  double weight(Subset local, int comp) const override;
  Order order(Subset local, int slot) const override;

 private:
  const Point* point_;
  std::vector<std::uint8_t> vmap_;  // local index -> point vertex index
};

// Adapter over an ExactPoint (rational path).
class ExactAccess final : public PointAccess<Rational> {
 public:
  ExactAccess(const ExactPoint& p, std::vector<std::uint8_t> vmap);
  explicit ExactAccess(const ExactPoint& p);

  int arity() const override { return static_cast<int>(vmap_.size()); }
  SpaceDescriptor descriptor() const override { return point_->desc; }
  Rational weight(Subset local, int comp) const override;
  Order order(Subset local, int slot) const override;

 private:
  const ExactPoint* point_;
  std::vector<std::uint8_t> vmap_;
};

template <class S>
class RemapAccess final : public PointAccess<S> {
 public:
  RemapAccess(const PointAccess<S>& base, std::vector<std::uint8_t> vmap)
      : base_(&base), vmap_(std::move(vmap)) {}

  int arity() const override { return static_cast<int>(vmap_.size()); }
  SpaceDescriptor descriptor() const override { return base_->descriptor(); }
  S weight(Subset local, int comp) const override {
    return base_->weight(map_subset(local), comp);
  }
  Order order(Subset local, int slot) const override;

 private:
  Subset map_subset(Subset local) const {
    Subset out = 0;
    for (int i : subset_elements(local)) out |= Subset{1} << vmap_[i];
    return out;
  }
  const PointAccess<S>* base_;
  std::vector<std::uint8_t> vmap_;
};

template <class S>
Order RemapAccess<S>::order(Subset local, int slot) const {
  Order base = base_->order(map_subset(local), slot);
  Order out;
  out.ranked.reserve(base.ranked.size());
  for (auto e : base.ranked)
    for (std::size_t i = 0; i < vmap_.size(); ++i)
      if (vmap_[i] == e) {
        out.ranked.push_back(static_cast<std::uint8_t>(i));
        break;
      }
  return out;
}

// Reads one factor of a coupled space: weight components and order slots are
// shifted by the factor's offset.
template <class S>
class OffsetAccess final : public PointAccess<S> {
 public:
  OffsetAccess(const PointAccess<S>& base, SpaceDescriptor sub, int woff, int ooff)
      : base_(&base), sub_(sub), woff_(woff), ooff_(ooff) {}

  int arity() const override { return base_->arity(); }
  SpaceDescriptor descriptor() const override { return sub_; }
  S weight(Subset local, int comp) const override {
    return base_->weight(local, comp + woff_);
  }
  Order order(Subset local, int slot) const override {
    return base_->order(local, slot + ooff_);
  }

 private:
  const PointAccess<S>* base_;
  SpaceDescriptor sub_;
  int woff_, ooff_;
};

// Replaces the orders of selected subsets by fixed assignments; weights pass
// through.
template <class S>
class ReplaceOrdersAccess final : public PointAccess<S> {
 public:
  ReplaceOrdersAccess(const PointAccess<S>& base,
                      const std::map<Subset, Order>& fixed)
      : base_(&base), fixed_(&fixed) {}

  int arity() const override { return base_->arity(); }
  SpaceDescriptor descriptor() const override { return base_->descriptor(); }
  S weight(Subset local, int comp) const override {
    return base_->weight(local, comp);
  }
  Order order(Subset local, int slot) const override {
    auto it = fixed_->find(local);
    if (it != fixed_->end()) return it->second;
    return base_->order(local, slot);
  }

 private:
  const PointAccess<S>* base_;
  const std::map<Subset, Order>* fixed_;
};

// ---------------------------------------------------------------------------
// Dependency masks, per (subset, weight component / order slot).

struct CoordUse {
  std::uint32_t weights = 0;  // bitmask over weight components
  std::uint32_t orders = 0;   // bitmask over order slots
};

struct DependencyMask {
  std::map<Subset, CoordUse> use;

  DependencyMask& weight(Subset a, int comp);
  DependencyMask& order(Subset a, int slot);
  DependencyMask& all_of(Subset a, const SpaceDescriptor& d);
  static DependencyMask everything(int k, const SpaceDescriptor& d);

  bool reads_weight(Subset a, int comp) const;
  bool reads_order(Subset a, int slot) const;
  bool reads(Subset a) const;
  std::vector<Subset> subsets() const;
};

template <class S>
class MaskedAccess final : public PointAccess<S> {
 public:
  MaskedAccess(const PointAccess<S>& base, const DependencyMask& mask)
      : base_(&base), mask_(&mask) {}

  int arity() const override { return base_->arity(); }
  SpaceDescriptor descriptor() const override { return base_->descriptor(); }
  S weight(Subset local, int comp) const override {
    if (!mask_->reads_weight(local, comp))
      throw Error("predicate read a weight outside its dependency mask");
    return base_->weight(local, comp);
  }
  Order order(Subset local, int slot) const override {
    if (!mask_->reads_order(local, slot))
      throw Error("predicate read an order outside its dependency mask");
    return base_->order(local, slot);
  }

 private:
  const PointAccess<S>* base_;
  const DependencyMask* mask_;
};

// ---------------------------------------------------------------------------
// Chamber tables: finite truth tables for membership sets whose value depends
// only on the grid cell of each weight coordinate (pitch 1/m), the relative
// ranking of coordinates sharing a cell, and the order coordinates. The
// subclass admits exact rational densities.

struct ChamberKey {
  std::vector<int> cell;       // per weight coordinate
  std::vector<int> rank;       // per weight coordinate, rank within its cell
  std::vector<int> order_idx;  // per order coordinate

  std::vector<int> flat() const;
};

class ChamberTable {
 public:
  static std::shared_ptr<const ChamberTable> build(
      int arity, SpaceDescriptor desc, int m, const DependencyMask& mask,
      const std::function<bool(const PointAccess<Rational>&)>& exact_pred);

  static std::shared_ptr<const ChamberTable> from_parts(
      int arity, SpaceDescriptor desc, int m,
      std::vector<std::pair<Subset, int>> wcoords,
      std::vector<std::pair<Subset, int>> ocoords,
      std::map<std::vector<int>, bool> entries);

  int arity() const { return arity_; }
  const SpaceDescriptor& descriptor() const { return desc_; }
  int resolution() const { return m_; }
  const std::vector<std::pair<Subset, int>>& wcoords() const { return wcoords_; }
  const std::vector<std::pair<Subset, int>>& ocoords() const { return ocoords_; }
  const std::map<std::vector<int>, bool>& entries() const { return entries_; }
  DependencyMask mask() const;

  template <class S>
  bool lookup(const PointAccess<S>& a) const;

 private:
  void check_coverage() const;

  int arity_ = 0;
  SpaceDescriptor desc_;
  int m_ = 1;
  std::vector<std::pair<Subset, int>> wcoords_;
  std::vector<std::pair<Subset, int>> ocoords_;
  std::map<std::vector<int>, bool> entries_;
};

// Volume of one chamber: product of cell widths, a 1/occupancy! factor per
// shared cell, and 1/|A|! per order coordinate.
Rational chamber_volume(int m, const std::vector<int>& cells,
                        const std::vector<int>& order_sizes);

// ---------------------------------------------------------------------------

class Peon {
 public:
  using Pred = std::function<bool(const PointAccess<double>&)>;
  using ExactPred = std::function<bool(const PointAccess<Rational>&)>;

  static Peon opaque(int arity, SpaceDescriptor d, DependencyMask mask, Pred pred);
  // chamber_m > 0 declares that membership is constant on pitch-1/m chambers
  static Peon with_exact(int arity, SpaceDescriptor d, DependencyMask mask,
                         Pred pred, ExactPred exact, int chamber_m);
  static Peon from_table(std::shared_ptr<const ChamberTable> table);

  int arity() const { return arity_; }
  const SpaceDescriptor& descriptor() const { return desc_; }
  const DependencyMask& mask() const { return mask_; }
  int chamber_resolution() const { return chamber_m_; }  // 0 = not chamber-grid
  bool chamber_grid() const { return chamber_m_ > 0; }
  bool has_exact() const { return static_cast<bool>(exact_) || table_ != nullptr; }
  const std::shared_ptr<const ChamberTable>& table() const { return table_; }

  bool eval(const PointAccess<double>& a) const;
  bool eval_exact(const PointAccess<Rational>& a) const;
  bool eval_point(const Point& x) const;

 private:
  int arity_ = 1;
  SpaceDescriptor desc_;
  DependencyMask mask_;
  Pred pred_;
  ExactPred exact_;
  int chamber_m_ = 0;
  std::shared_ptr<const ChamberTable> table_;
};

template <class S>
bool peon_eval(const Peon& p, const PointAccess<S>& a);

struct EuclideanStructure {
  LanguagePtr lang;
  SpaceDescriptor desc;
  std::vector<Peon> peons;
  std::string name;

  const Peon& peon(int pred) const { return peons[pred]; }
  // Least common chamber resolution, 0 when some peon is not chamber-grid.
  int chamber_resolution() const;
  bool exact_ready() const;
};

// ---------------------------------------------------------------------------
// Operations.

bool eval_peon(const Peon& p, const Point& x);

EuclideanStructure interpret_theon(const Interpretation& i,
                                   const EuclideanStructure& n);
EuclideanStructure reduct_theon(const EuclideanStructure& n, LanguagePtr sub);
EuclideanStructure independent_coupling(const EuclideanStructure& a,
                                        const EuclideanStructure& b);

struct DependencyWitness {
  bool independent = true;
  std::uint64_t trial = 0;
  std::optional<Point> before, after;  // witnessing pair on a flip
};

DependencyWitness dependency_check(const Peon& p, Subset a, int trials,
                                   std::uint64_t seed);

// ---------------------------------------------------------------------------
// Gallery of named structures. `k` parameterizes the orientation entries.

EuclideanStructure gallery(const std::string& name, int k = 0);
std::vector<std::string> gallery_names();

}  // namespace theon
