#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "theon/common.hpp"

namespace theon {

// ---------------------------------------------------------------------------
// Permutations of [n], 0-based one-line notation, enumerated lexicographically.
// The same enumeration backs all_orders, the tau map and the inverse map of
// the order realization; keeping one enumeration everywhere is what makes the
// round-trip identities exact.

using Perm = std::vector<std::uint8_t>;

Perm perm_identity(int n);
Perm perm_compose(const Perm& f, const Perm& g);  // (f o g)(i) = f(g(i))
Perm perm_invert(const Perm& p);
std::int64_t perm_rank(const Perm& p);            // lexicographic rank
Perm perm_unrank(int n, std::int64_t r);
std::vector<Perm> all_perms(int n);

// ---------------------------------------------------------------------------

struct SpaceDescriptor {
  int weight_width = 1;  // p: weight coordinate lives in [0,1)^p
  int order_degree = 0;  // d: number of random orders per subset

  bool operator==(const SpaceDescriptor&) const = default;
};

// Sorted, duplicate-free set of opaque string labels. Indices into `labels`
// are the working representation everywhere else; subsets of a vertex set are
// bitmasks over those indices (hence |V| <= 32).
class VertexSet {
 public:
  static std::shared_ptr<const VertexSet> of(std::vector<std::string> labels);
  static std::shared_ptr<const VertexSet> range(int n);  // "1".."n", zero-padded past 9

  const std::vector<std::string>& labels() const { return labels_; }
  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int i) const { return labels_[i]; }
  int index_of(const std::string& l) const;  // -1 if absent

  std::uint64_t coord_hash(std::uint32_t subset) const;  // identity for the RNG

 private:
  explicit VertexSet(std::vector<std::string> labels);
  std::vector<std::string> labels_;
  std::vector<std::uint64_t> label_hash_;
};

using VertexSetPtr = std::shared_ptr<const VertexSet>;

using Subset = std::uint32_t;  // nonzero bitmask over vertex indices

int subset_size(Subset s);
std::vector<int> subset_elements(Subset s);
Subset full_subset(int n);

// Non-empty subsets of V in ascending bitmask order; cap > 0 restricts |A| <= cap.
std::vector<Subset> r_sets(int n, int cap = 0);
std::size_t r_sets_count(int n, int cap = 0);

// ---------------------------------------------------------------------------

// Linear order of a subset, stored as the ranked element list (vertex indices
// of the owning set, first = least).
struct Order {
  std::vector<std::uint8_t> ranked;

  bool operator==(const Order&) const = default;
  auto operator<=>(const Order&) const = default;
};

// Orders of `elems` (sorted ascending) in the fixed enumeration: entry j ranks
// elems by the j-th lexicographic permutation.
std::vector<Order> all_orders(const std::vector<int>& elems);
std::vector<Order> all_orders_of_subset(Subset s);

// Order <-> permutation, relative to the sorted element list: p[i] = rank of
// elems[i]. An order equals perm_to_order(p) iff p is its rank map.
Perm order_to_perm(const Order& o, const std::vector<int>& elems);
Order perm_to_order(const Perm& p, const std::vector<int>& elems);
std::int64_t order_index(const Order& o, const std::vector<int>& elems);

// ---------------------------------------------------------------------------

struct Injection {
  VertexSetPtr dom;
  VertexSetPtr cod;
  std::vector<std::uint8_t> map;  // dom index -> cod index, injective

  static Injection identity(VertexSetPtr vs);
  // The order-preserving injection enumerating `image` (a subset of cod).
  static Injection order_preserving(VertexSetPtr cod, Subset image);
  static Injection of_labels(VertexSetPtr dom, VertexSetPtr cod,
                             const std::map<std::string, std::string>& m);

  Subset image() const;
  Subset map_subset(Subset s) const;
  int preimage(int cod_index) const;  // -1 if not hit
};

Injection compose(const Injection& beta, const Injection& alpha);  // beta o alpha

// Pullback along a bijection onto the order's ground set.
Order pullback_order(const Injection& alpha, const Order& ord, Subset ground);

// ---------------------------------------------------------------------------

struct Coord {
  std::vector<double> w;    // weight in [0,1)^p
  std::vector<Order> ord;   // d orders of the subset
};

// A point of E_V^(d): one Coord per non-empty A in r(V) (or r(V,ell)).
// Storage is either explicit or lazily derived from a seed through the
// counter RNG; pinned coordinates override the lazy stream, which is also how
// conditional sampling works.
class Point {
 public:
  static Point sampled(VertexSetPtr vs, SpaceDescriptor d, std::uint64_t seed,
                       int ell = 0);
  static Point materialized(VertexSetPtr vs, SpaceDescriptor d,
                            std::map<Subset, Coord> coords, int ell = 0);

  const VertexSetPtr& vertex_set() const { return vs_; }
  const SpaceDescriptor& descriptor() const { return desc_; }
  int ell() const { return ell_; }
  bool lazy() const { return seed_.has_value(); }

  bool has(Subset a) const;
  Coord coord(Subset a) const;
  double weight(Subset a, int comp) const;
  Order order(Subset a, int slot) const;

  Point with_coord(Subset a, Coord c) const;  // pin/replace one coordinate
  Point pullback(const Injection& alpha) const;

  // Fully materialized copy (requires a small index set).
  Point materialize() const;

 private:
  Point() = default;
  Coord generate(Subset a) const;
  void check_subset(Subset a) const;

  VertexSetPtr vs_;
  SpaceDescriptor desc_;
  int ell_ = 0;
  std::map<Subset, Coord> data_;
  std::optional<std::uint64_t> seed_;
};

Coord sample_coord(const VertexSet& vs, Subset a, const SpaceDescriptor& d,
                   std::uint64_t seed);

Point sample_point(VertexSetPtr vs, const SpaceDescriptor& d,
                   std::uint64_t seed, int ell = 0);
Point pullback_point(const Injection& alpha, const Point& x);

// ---------------------------------------------------------------------------
// Measure isomorphism [0,1)^2 <-> [0,1) by bit interleaving (64-bit precision,
// 32 bits retained per component).

double interleave_weights(double a, double b);
std::pair<double, double> split_weights(double x);

// General fan-out used to widen weight coordinates; inverse of interleave_many.
double interleave_many(const std::vector<double>& parts);
std::vector<double> split_many(double x, int parts);

}  // namespace theon
