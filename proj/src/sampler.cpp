#include "theon/sampler.hpp"

#include <algorithm>

namespace theon {

void PartialPoint::validate() const {
  for (const auto& [a, c] : pins) {
    if (a == 0 || (a & ~full_subset(vs->size())))
      throw Error("pinned subset outside the vertex set");
    if (static_cast<int>(c.w.size()) != desc.weight_width ||
        static_cast<int>(c.ord.size()) != desc.order_degree)
      throw Error("pinned coordinate shape does not match the descriptor");
    for (double w : c.w)
      if (!(w >= 0.0 && w < 1.0)) throw Error("pinned weight outside [0,1)");
    for (const auto& o : c.ord) {
      auto sorted = o.ranked;
      std::sort(sorted.begin(), sorted.end());
      std::vector<int> elems = subset_elements(a);
      if (!std::equal(sorted.begin(), sorted.end(), elems.begin(), elems.end()))
        throw Error("pinned order is not a permutation of its subset");
    }
  }
}

namespace {

template <class PointT, class AccessT>
Structure realize_impl(const EuclideanStructure& n, const PointT& x,
                       const VertexSetPtr& vs) {
  Structure out = Structure::empty(n.lang, vs);
  const int nv = vs->size();
  for (int p = 0; p < n.lang->size(); ++p) {
    const int k = n.lang->at(p).arity;
    if (k > nv) continue;
    std::vector<std::uint8_t> tuple(k);
    auto rec = [&](auto&& self, int pos, std::uint32_t used) -> void {
      if (pos == k) {
        AccessT acc(x, tuple);
        if (peon_eval(n.peons[p], acc)) out.rels[p].push_back(tuple);
        return;
      }
      for (int v = 0; v < nv; ++v) {
        if (used & (1u << v)) continue;
        tuple[pos] = static_cast<std::uint8_t>(v);
        self(self, pos + 1, used | (1u << v));
      }
    };
    rec(rec, 0, 0);
  }
  out.normalize();
  return out;
}

}  // namespace

Structure realize_structure(const EuclideanStructure& n, const Point& x) {
  if (!(x.descriptor() == n.desc))
    throw Error("realize_structure: descriptor mismatch");
  return realize_impl<Point, BaseAccess>(n, x, x.vertex_set());
}

Structure realize_structure_exact(const EuclideanStructure& n,
                                  const ExactPoint& x) {
  if (!(x.desc == n.desc))
    throw Error("realize_structure_exact: descriptor mismatch");
  return realize_impl<ExactPoint, ExactAccess>(n, x, x.vs);
}

Point structure_point(const EuclideanStructure& n, VertexSetPtr vs,
                      std::uint64_t seed) {
  return Point::sampled(std::move(vs), n.desc, seed);
}

Point conditional_point(const EuclideanStructure& n, VertexSetPtr vs,
                        const PartialPoint& pinned, std::uint64_t seed) {
  if (pinned.vs->labels() != vs->labels())
    throw Error("pinned point is over a different vertex set");
  if (!(pinned.desc == n.desc)) throw Error("pinned descriptor mismatch");
  pinned.validate();
  Point x = Point::sampled(std::move(vs), n.desc, seed);
  for (const auto& [a, c] : pinned.pins) x = x.with_coord(a, c);
  return x;
}

Structure sample_structure(const EuclideanStructure& n, VertexSetPtr vs,
                           std::uint64_t seed) {
  return realize_structure(n, structure_point(n, std::move(vs), seed));
}

Structure sample_conditional(const EuclideanStructure& n, VertexSetPtr vs,
                             const PartialPoint& pinned, std::uint64_t seed) {
  return realize_structure(n, conditional_point(n, std::move(vs), pinned, seed));
}

}  // namespace theon
