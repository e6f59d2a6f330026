#include "saw/count_table.hpp"

#include <algorithm>

#include "saw/error.hpp"

namespace saw {

std::string_view to_string(WalkClass cls) {
  switch (cls) {
    case WalkClass::All: return "all";
    case WalkClass::Bridge: return "bridge";
    case WalkClass::IrreducibleBridge: return "irreducible";
  }
  return "unknown";
}

WalkClass parse_walk_class(std::string_view name) {
  if (name == "all") return WalkClass::All;
  if (name == "bridge") return WalkClass::Bridge;
  if (name == "irreducible") return WalkClass::IrreducibleBridge;
  fail(ErrorKind::Validation, "unknown walk class: " + std::string(name));
}

CountTable::CountTable(int dim, int cutoff, WalkClass cls)
    : dim_(dim),
      cutoff_(cutoff),
      class_(cls),
      dense_(dim == 2),
      width_(static_cast<std::size_t>(2 * cutoff + 1)),
      zeros_(static_cast<std::size_t>(cutoff + 1), 0) {
  if (dim < kMinDim || dim > kMaxDim) fail(ErrorKind::Validation, "dimension must be in [2, 4]");
  if (cutoff < 0) fail(ErrorKind::Validation, "cutoff must be nonnegative");
  if (dense_) dense_counts_.assign(width_ * width_ * zeros_.size(), 0);
}

bool CountTable::in_box(const Point& x) const {
  return x.dim() == dim_ && x.linf() <= cutoff_;
}

std::size_t CountTable::box_index(const Point& x) const {
  std::size_t idx = 0;
  for (int i = 0; i < dim_; ++i) idx = idx * width_ + static_cast<std::size_t>(x[i] + cutoff_);
  return idx;
}

Point CountTable::box_point(std::size_t index) const {
  Point p(dim_);
  for (int i = dim_ - 1; i >= 0; --i) {
    p[i] = static_cast<Coord>(index % width_) - cutoff_;
    index /= width_;
  }
  return p;
}

std::span<const Count> CountTable::counts(const Point& x) const {
  if (!in_box(x)) return zeros_;
  if (dense_) {
    const std::size_t off = box_index(x) * zeros_.size();
    return std::span<const Count>(dense_counts_).subspan(off, zeros_.size());
  }
  auto it = sparse_counts_.find(x);
  return it == sparse_counts_.end() ? std::span<const Count>(zeros_) : std::span<const Count>(it->second);
}

Count CountTable::count(const Point& x, int length) const {
  if (length < 0 || length > cutoff_) return 0;
  return counts(x)[static_cast<std::size_t>(length)];
}

void CountTable::add(const Point& x, int length, Count amount) {
  if (!in_box(x) || length < 0 || length > cutoff_) {
    fail(ErrorKind::Validation, "count entry " + x.str() + " outside the table box");
  }
  if (amount == 0) return;
  if (dense_) {
    dense_counts_[box_index(x) * zeros_.size() + static_cast<std::size_t>(length)] += amount;
  } else {
    auto [it, inserted] = sparse_counts_.try_emplace(x, zeros_);
    it->second[static_cast<std::size_t>(length)] += amount;
  }
}

void CountTable::add_profile(const Point& x, std::span<const Count> profile) {
  for (std::size_t n = 0; n < profile.size(); ++n) add(x, static_cast<int>(n), profile[n]);
}

void CountTable::for_each(const std::function<void(const Point&, std::span<const Count>)>& fn) const {
  if (dense_) {
    const std::size_t stride = zeros_.size();
    const std::size_t cells = dense_counts_.size() / stride;
    for (std::size_t c = 0; c < cells; ++c) {
      std::span<const Count> prof(dense_counts_.data() + c * stride, stride);
      if (std::any_of(prof.begin(), prof.end(), [](Count v) { return v != 0; })) fn(box_point(c), prof);
    }
  } else {
    for (const auto& [x, prof] : sparse_counts_) {
      if (std::any_of(prof.begin(), prof.end(), [](Count v) { return v != 0; })) fn(x, prof);
    }
  }
}

std::vector<Point> CountTable::endpoints() const {
  std::vector<Point> out;
  for_each([&](const Point& x, std::span<const Count>) { out.push_back(x); });
  return out;
}

bool operator==(const CountTable& a, const CountTable& b) {
  if (a.dim_ != b.dim_ || a.cutoff_ != b.cutoff_ || a.class_ != b.class_) return false;
  std::vector<std::pair<Point, std::vector<Count>>> ea, eb;
  a.for_each([&](const Point& x, std::span<const Count> p) { ea.emplace_back(x, std::vector<Count>(p.begin(), p.end())); });
  b.for_each([&](const Point& x, std::span<const Count> p) { eb.emplace_back(x, std::vector<Count>(p.begin(), p.end())); });
  return ea == eb;
}

}  // namespace saw
