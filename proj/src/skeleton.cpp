#include "saw/skeleton.hpp"

#include <algorithm>
#include <cmath>

namespace saw {

Coord Skeleton::span() const {
  Coord s = 0;
  for (const auto& x : increments) s += x.t;
  return s;
}

Point Skeleton::transverse_sum() const {
  Point s(transverse_dim() > 0 ? transverse_dim() : 1);
  for (const auto& x : increments) s = s + x.y;
  return s;
}

bool Skeleton::valid_for(Coord n) const {
  if (increments.empty()) return false;
  for (const auto& x : increments) {
    if (x.t < 1) return false;
  }
  return span() == n && transverse_sum().is_zero();
}

namespace {

template <typename Combine>
void merge_walk(const SkeletonLaw& a, const SkeletonLaw& b, Combine combine) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      combine(ia->second, 0.0);
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      combine(0.0, ib->second);
      ++ib;
    } else {
      combine(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
}

}  // namespace

double max_abs_difference(const SkeletonLaw& a, const SkeletonLaw& b) {
  double worst = 0.0;
  merge_walk(a, b, [&](double pa, double pb) { worst = std::max(worst, std::abs(pa - pb)); });
  return worst;
}

double total_variation(const SkeletonLaw& a, const SkeletonLaw& b) {
  double sum = 0.0;
  merge_walk(a, b, [&](double pa, double pb) { sum += std::abs(pa - pb); });
  return 0.5 * sum;
}

}  // namespace saw
