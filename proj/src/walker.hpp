#pragma once

// Backtracking state shared by the serial and OpenMP enumerators.

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "saw/count_table.hpp"

namespace saw::detail {

class Walker {
 public:
  Walker(int dim, int cutoff, WalkClass cls);

  int dim() const noexcept { return dim_; }
  int cutoff() const noexcept { return cutoff_; }
  int num_dirs() const noexcept { return 2 * dim_; }
  int length() const noexcept { return static_cast<int>(dirs_.size()); }
  std::size_t position() const noexcept { return pos_; }
  Coord coord(int axis) const noexcept { return coords_[static_cast<std::size_t>(axis)]; }
  const std::vector<int>& dirs() const noexcept { return dirs_; }

  // Extends the walk by one unit step. Returns false (and leaves the state
  // untouched) if the target is occupied or, for bridge classes, would put
  // the walk at level <= 0.
  bool push(int dir);
  void pop();

  // Whether the current walk belongs to the walker's class.
  bool in_class() const noexcept {
    switch (class_) {
      case WalkClass::All: return true;
      case WalkClass::Bridge: return coords_[0] == max_level_;
      case WalkClass::IrreducibleBridge: return coords_[0] == max_level_ && single_crossings_ == 0;
    }
    return false;
  }

  // Current sites from the origin, in order.
  std::vector<Point> sites() const;

 private:
  void bump_gap(Coord gap);
  void unbump_gap(Coord gap);

  int dim_;
  int cutoff_;
  WalkClass class_;
  bool track_levels_;
  std::size_t width_;
  std::array<std::ptrdiff_t, 2 * kMaxDim> offsets_{};
  std::vector<std::uint8_t> occupied_;
  std::size_t pos_;
  std::array<Coord, kMaxDim> coords_{};
  std::vector<int> dirs_;
  std::vector<Coord> max_history_;
  Coord max_level_ = 0;
  // crossings_[k]: number of steps between levels k and k+1 so far.
  std::vector<int> crossings_;
  // Number of gaps k >= 1 crossed exactly once.
  int single_crossings_ = 0;
};

// Per-thread count accumulator keyed by box index. Dense for d = 2.
class Accumulator {
 public:
  Accumulator(int dim, int cutoff);

  void add(std::size_t pos, int length) {
    if (dense_) {
      ++dense_counts_[pos * stride_ + static_cast<std::size_t>(length)];
    } else {
      auto& prof = sparse_[pos];
      if (prof.empty()) prof.assign(stride_, 0);
      ++prof[static_cast<std::size_t>(length)];
    }
  }

  void merge(const Accumulator& other);
  void fill(CountTable& table) const;

 private:
  Point decode(std::size_t pos) const;

  int dim_;
  int cutoff_;
  bool dense_;
  std::size_t stride_;
  std::size_t width_;
  std::vector<Count> dense_counts_;
  std::unordered_map<std::size_t, std::vector<Count>> sparse_;
};

// Depth-first search below the walker's current state, counting every node
// (including the current one) that lies in the walker's class.
inline void search(Walker& w, Accumulator& acc) {
  if (w.in_class()) acc.add(w.position(), w.length());
  if (w.length() == w.cutoff()) return;
  for (int dir = 0; dir < w.num_dirs(); ++dir) {
    if (w.push(dir)) {
      search(w, acc);
      w.pop();
    }
  }
}

void check_budget(int dim, int cutoff, double node_budget);

}  // namespace saw::detail
