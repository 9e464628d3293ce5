#pragma once

#include "theon/peon.hpp"
#include "theon/space.hpp"
#include "theon/symbols.hpp"

namespace theon {

// Pinned coordinate values on a sub-family of subsets; the rest of the point
// is sampled fresh.
struct PartialPoint {
  VertexSetPtr vs;
  SpaceDescriptor desc;
  std::map<Subset, Coord> pins;

  void validate() const;
};

// M_V(x): predicate P holds on an injective tuple exactly when the pullback of
// the point along the tuple lies in the membership set. Tuples are evaluated
// in lexicographic order, so (seed, theon, V) determines the structure bit for
// bit.
Structure realize_structure(const EuclideanStructure& n, const Point& x);
Structure realize_structure_exact(const EuclideanStructure& n, const ExactPoint& x);

Structure sample_structure(const EuclideanStructure& n, VertexSetPtr vs,
                           std::uint64_t seed);
Structure sample_conditional(const EuclideanStructure& n, VertexSetPtr vs,
                             const PartialPoint& pinned, std::uint64_t seed);

// The point that sample_structure would realize from.
Point structure_point(const EuclideanStructure& n, VertexSetPtr vs,
                      std::uint64_t seed);
Point conditional_point(const EuclideanStructure& n, VertexSetPtr vs,
                        const PartialPoint& pinned, std::uint64_t seed);

}  // namespace theon
