#include "walker.hpp"

#include <cmath>
#include <string>

#include "saw/enumerate.hpp"
#include "saw/error.hpp"

namespace saw::detail {

Walker::Walker(int dim, int cutoff, WalkClass cls)
    : dim_(dim),
      cutoff_(cutoff),
      class_(cls),
      track_levels_(cls != WalkClass::All),
      width_(static_cast<std::size_t>(2 * cutoff + 1)),
      crossings_(static_cast<std::size_t>(cutoff + 2), 0) {
  std::size_t cells = 1;
  std::array<std::size_t, kMaxDim> stride{};
  for (int i = dim - 1; i >= 0; --i) {
    stride[static_cast<std::size_t>(i)] = cells;
    cells *= width_;
  }
  occupied_.assign(cells, 0);
  pos_ = 0;
  for (int i = 0; i < dim; ++i) pos_ += static_cast<std::size_t>(cutoff) * stride[static_cast<std::size_t>(i)];
  for (int i = 0; i < dim; ++i) {
    const auto s = static_cast<std::ptrdiff_t>(stride[static_cast<std::size_t>(i)]);
    offsets_[static_cast<std::size_t>(2 * i)] = s;
    offsets_[static_cast<std::size_t>(2 * i + 1)] = -s;
  }
  occupied_[pos_] = 1;
  dirs_.reserve(static_cast<std::size_t>(cutoff));
  max_history_.reserve(static_cast<std::size_t>(cutoff));
}

void Walker::bump_gap(Coord gap) {
  int& c = crossings_[static_cast<std::size_t>(gap)];
  ++c;
  if (gap >= 1) {
    if (c == 1) ++single_crossings_;
    else if (c == 2) --single_crossings_;
  }
}

void Walker::unbump_gap(Coord gap) {
  int& c = crossings_[static_cast<std::size_t>(gap)];
  if (gap >= 1) {
    if (c == 1) --single_crossings_;
    else if (c == 2) ++single_crossings_;
  }
  --c;
}

bool Walker::push(int dir) {
  const int axis = dir / 2;
  const Coord sign = (dir % 2 == 0) ? 1 : -1;
  const std::size_t next = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(pos_) + offsets_[static_cast<std::size_t>(dir)]);
  if (occupied_[next]) return false;
  if (track_levels_ && coords_[0] + (axis == 0 ? sign : 0) <= 0) return false;

  occupied_[next] = 1;
  pos_ = next;
  coords_[static_cast<std::size_t>(axis)] += sign;
  dirs_.push_back(dir);
  if (track_levels_) {
    max_history_.push_back(max_level_);
    if (axis == 0) {
      bump_gap(sign > 0 ? coords_[0] - 1 : coords_[0]);
      if (coords_[0] > max_level_) max_level_ = coords_[0];
    }
  }
  return true;
}

void Walker::pop() {
  const int dir = dirs_.back();
  dirs_.pop_back();
  const int axis = dir / 2;
  const Coord sign = (dir % 2 == 0) ? 1 : -1;
  if (track_levels_) {
    if (axis == 0) unbump_gap(sign > 0 ? coords_[0] - 1 : coords_[0]);
    max_level_ = max_history_.back();
    max_history_.pop_back();
  }
  occupied_[pos_] = 0;
  coords_[static_cast<std::size_t>(axis)] -= sign;
  pos_ = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(pos_) - offsets_[static_cast<std::size_t>(dir)]);
}

std::vector<Point> Walker::sites() const {
  std::vector<Point> out;
  out.reserve(dirs_.size() + 1);
  Point p(dim_);
  out.push_back(p);
  for (int dir : dirs_) {
    p[dir / 2] += (dir % 2 == 0) ? 1 : -1;
    out.push_back(p);
  }
  return out;
}

Accumulator::Accumulator(int dim, int cutoff)
    : dim_(dim),
      cutoff_(cutoff),
      dense_(dim == 2),
      stride_(static_cast<std::size_t>(cutoff + 1)),
      width_(static_cast<std::size_t>(2 * cutoff + 1)) {
  if (dense_) dense_counts_.assign(width_ * width_ * stride_, 0);
}

void Accumulator::merge(const Accumulator& other) {
  if (dense_) {
    for (std::size_t i = 0; i < dense_counts_.size(); ++i) dense_counts_[i] += other.dense_counts_[i];
    return;
  }
  for (const auto& [pos, prof] : other.sparse_) {
    auto& mine = sparse_[pos];
    if (mine.empty()) mine.assign(stride_, 0);
    for (std::size_t n = 0; n < stride_; ++n) mine[n] += prof[n];
  }
}

Point Accumulator::decode(std::size_t pos) const {
  Point p(dim_);
  for (int i = dim_ - 1; i >= 0; --i) {
    p[i] = static_cast<Coord>(pos % width_) - cutoff_;
    pos /= width_;
  }
  return p;
}

void Accumulator::fill(CountTable& table) const {
  if (dense_) {
    const std::size_t cells = dense_counts_.size() / stride_;
    for (std::size_t c = 0; c < cells; ++c) {
      std::span<const Count> prof(dense_counts_.data() + c * stride_, stride_);
      bool any = false;
      for (Count v : prof) any = any || v != 0;
      if (any) table.add_profile(decode(c), prof);
    }
    return;
  }
  for (const auto& [pos, prof] : sparse_) table.add_profile(decode(pos), prof);
}

void check_budget(int dim, int cutoff, double node_budget) {
  if (dim < kMinDim || dim > kMaxDim) fail(ErrorKind::Validation, "dimension must be in [2, 4]");
  if (cutoff < 0) fail(ErrorKind::Validation, "cutoff must be nonnegative");
  const double est = estimate_nodes(dim, cutoff);
  if (est > node_budget) {
    fail(ErrorKind::Validation, "cutoff-too-large: estimated " + std::to_string(est) +
                                    " search nodes exceed the budget of " + std::to_string(node_budget));
  }
}

}  // namespace saw::detail
