#pragma once

#include <functional>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "saw/lattice.hpp"

namespace saw {

enum class WalkClass {
  All,
  Bridge,
  IrreducibleBridge,
};

std::string_view to_string(WalkClass cls);
WalkClass parse_walk_class(std::string_view name);

// Exact, length-resolved counts of walks of one class from the origin,
// indexed by endpoint: counts(x)[N] is the number of N-step walks 0 -> x,
// 0 <= N <= cutoff. Weighted sums (two-point functions) are evaluated from
// these on demand so that every structural identity stays an integer one.
//
// Storage is a dense array over the box |x|_inf <= L for d = 2 and a sparse
// map for d >= 3. Tables are filled by the enumerator (or by hand in tests)
// and treated as immutable afterwards.
class CountTable {
 public:
  CountTable(int dim, int cutoff, WalkClass cls);

  int dim() const noexcept { return dim_; }
  int cutoff() const noexcept { return cutoff_; }
  WalkClass walk_class() const noexcept { return class_; }
  bool dense() const noexcept { return dense_; }

  // Always cutoff + 1 entries; all zero for endpoints with no walks.
  std::span<const Count> counts(const Point& x) const;
  Count count(const Point& x, int length) const;

  void add(const Point& x, int length, Count amount);
  // Adds a whole length profile at once (used by the enumerator merge).
  void add_profile(const Point& x, std::span<const Count> profile);

  // Endpoints with at least one nonzero count, lexicographically sorted.
  std::vector<Point> endpoints() const;
  void for_each(const std::function<void(const Point&, std::span<const Count>)>& fn) const;

  friend bool operator==(const CountTable& a, const CountTable& b);

 private:
  std::size_t box_index(const Point& x) const;
  Point box_point(std::size_t index) const;
  bool in_box(const Point& x) const;

  int dim_;
  int cutoff_;
  WalkClass class_;
  bool dense_;
  std::size_t width_;
  std::vector<Count> dense_counts_;
  std::map<Point, std::vector<Count>> sparse_counts_;
  std::vector<Count> zeros_;
};

}  // namespace saw
