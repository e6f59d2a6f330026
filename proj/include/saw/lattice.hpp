#pragma once

// Hypercubic lattice Z^d: sites, nearest-neighbour steps, self-avoidance and
// the [t, y] frame that separates axis 1 from the transverse block.

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace saw {

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 4;

using Coord = std::int64_t;
// Exact walk counts. c_N grows like mu^N, so 128 bits cover every cutoff that
// is feasible to enumerate.
using Count = unsigned __int128;

std::string to_string(Count value);

// A point of Z^k for 1 <= k <= kMaxDim. Used both for lattice sites (k = d)
// and for transverse offsets (k = d - 1).
class Point {
 public:
  Point() = default;
  explicit Point(int dim);
  Point(std::initializer_list<Coord> coords);

  static Point origin(int dim) { return Point(dim); }

  int dim() const noexcept { return dim_; }
  Coord operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }
  Coord& operator[](int i) noexcept { return c_[static_cast<std::size_t>(i)]; }

  bool is_zero() const noexcept;
  // l1 and l-infinity norms.
  Coord l1() const noexcept;
  Coord linf() const noexcept;
  double euclidean() const noexcept;

  Point operator+(const Point& o) const;
  Point operator-(const Point& o) const;
  Point operator-() const;

  // Lexicographic order, coordinate 0 first.
  friend bool operator==(const Point& a, const Point& b) noexcept {
    return a.dim_ == b.dim_ && a.c_ == b.c_;
  }
  friend std::strong_ordering operator<=>(const Point& a, const Point& b) noexcept;

  std::string str() const;

 private:
  std::array<Coord, kMaxDim> c_{};
  int dim_ = 0;
};

// Coordinates of a site in the frame adapted to the axis direction
// a = (1, 0, ..., 0): t is the first coordinate, y the remaining d - 1.
struct FrameSplit {
  Coord t = 0;
  Point y;

  friend bool operator==(const FrameSplit&, const FrameSplit&) = default;
  friend std::strong_ordering operator<=>(const FrameSplit& a, const FrameSplit& b) noexcept {
    if (auto c = a.t <=> b.t; c != 0) return c;
    return a.y <=> b.y;
  }
};

FrameSplit split_frame(const Point& site);
Point join_frame(const FrameSplit& frame);

// True iff consecutive sites are lattice neighbours and no site repeats.
bool is_self_avoiding(std::span<const Point> sites);

// A validated self-avoiding walk. Length is the number of steps.
class SawPath {
 public:
  // Throws Error(Validation) if the sites do not form a self-avoiding walk.
  explicit SawPath(std::vector<Point> sites);

  std::span<const Point> sites() const noexcept { return sites_; }
  const Point& operator[](std::size_t i) const { return sites_[i]; }
  std::size_t length() const noexcept { return sites_.size() - 1; }
  int dim() const noexcept { return sites_.front().dim(); }
  const Point& start() const { return sites_.front(); }
  const Point& end() const { return sites_.back(); }

 private:
  std::vector<Point> sites_;
};

// The 2d unit steps in the fixed order +e_0, -e_0, +e_1, -e_1, ...
std::vector<Point> unit_steps(int dim);

// Every signed permutation of a (d-1)-dimensional transverse offset, i.e. the
// orbit of y under the hypercubic symmetries fixing axis 1.
std::vector<Point> transverse_orbit(const Point& y);

}  // namespace saw
