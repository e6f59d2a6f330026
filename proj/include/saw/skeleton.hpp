#pragma once

#include <compare>
#include <map>
#include <vector>

#include "saw/lattice.hpp"

namespace saw {

// Regeneration increments x_1..x_k of a bridge. Partial sums are the
// regeneration points; the last partial sum is the walk's endpoint.
struct Skeleton {
  std::vector<FrameSplit> increments;

  Coord span() const;   // sum of t components
  Point transverse_sum() const;
  int transverse_dim() const { return increments.empty() ? 0 : increments.front().y.dim(); }
  // Strictly advancing steps summing to (n, 0~).
  bool valid_for(Coord n) const;

  friend bool operator==(const Skeleton&, const Skeleton&) = default;
  friend std::strong_ordering operator<=>(const Skeleton& a, const Skeleton& b) noexcept {
    return std::lexicographical_compare_three_way(a.increments.begin(), a.increments.end(),
                                                  b.increments.begin(), b.increments.end());
  }
};

// Probability of each skeleton; the key order is deterministic.
using SkeletonLaw = std::map<Skeleton, double>;

double max_abs_difference(const SkeletonLaw& a, const SkeletonLaw& b);
double total_variation(const SkeletonLaw& a, const SkeletonLaw& b);

}  // namespace saw
