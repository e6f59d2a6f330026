#include "saw/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "saw/error.hpp"

namespace saw {

std::string to_string(Count value) {
  if (value == 0) return "0";
  std::string out;
  while (value != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

Point::Point(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) fail(ErrorKind::Validation, "point dimension out of range");
}

Point::Point(std::initializer_list<Coord> coords) : dim_(static_cast<int>(coords.size())) {
  if (dim_ < 1 || dim_ > kMaxDim) fail(ErrorKind::Validation, "point dimension out of range");
  std::copy(coords.begin(), coords.end(), c_.begin());
}

bool Point::is_zero() const noexcept {
  return std::all_of(c_.begin(), c_.begin() + dim_, [](Coord v) { return v == 0; });
}

Coord Point::l1() const noexcept {
  Coord s = 0;
  for (int i = 0; i < dim_; ++i) s += std::abs(c_[i]);
  return s;
}

Coord Point::linf() const noexcept {
  Coord s = 0;
  for (int i = 0; i < dim_; ++i) s = std::max(s, std::abs(c_[i]));
  return s;
}

double Point::euclidean() const noexcept {
  double s = 0;
  for (int i = 0; i < dim_; ++i) s += static_cast<double>(c_[i]) * static_cast<double>(c_[i]);
  return std::sqrt(s);
}

Point Point::operator+(const Point& o) const {
  if (o.dim_ != dim_) fail(ErrorKind::Validation, "dimension mismatch in point addition");
  Point r(dim_);
  for (int i = 0; i < dim_; ++i) r.c_[i] = c_[i] + o.c_[i];
  return r;
}

Point Point::operator-(const Point& o) const {
  if (o.dim_ != dim_) fail(ErrorKind::Validation, "dimension mismatch in point subtraction");
  Point r(dim_);
  for (int i = 0; i < dim_; ++i) r.c_[i] = c_[i] - o.c_[i];
  return r;
}

Point Point::operator-() const {
  Point r(dim_);
  for (int i = 0; i < dim_; ++i) r.c_[i] = -c_[i];
  return r;
}

std::strong_ordering operator<=>(const Point& a, const Point& b) noexcept {
  if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
  for (int i = 0; i < a.dim_; ++i) {
    if (auto c = a.c_[i] <=> b.c_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::string Point::str() const {
  std::string s = "(";
  for (int i = 0; i < dim_; ++i) {
    if (i) s += ",";
    s += std::to_string(c_[i]);
  }
  return s + ")";
}

FrameSplit split_frame(const Point& site) {
  if (site.dim() < kMinDim) fail(ErrorKind::Validation, "split_frame needs d >= 2");
  FrameSplit f{site[0], Point(site.dim() - 1)};
  for (int i = 1; i < site.dim(); ++i) f.y[i - 1] = site[i];
  return f;
}

Point join_frame(const FrameSplit& frame) {
  Point p(frame.y.dim() + 1);
  p[0] = frame.t;
  for (int i = 0; i < frame.y.dim(); ++i) p[i + 1] = frame.y[i];
  return p;
}

bool is_self_avoiding(std::span<const Point> sites) {
  if (sites.empty()) return false;
  const int d = sites.front().dim();
  for (std::size_t j = 0; j < sites.size(); ++j) {
    if (sites[j].dim() != d) return false;
    if (j > 0 && (sites[j] - sites[j - 1]).l1() != 1) return false;
  }
  std::vector<Point> sorted(sites.begin(), sites.end());
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

SawPath::SawPath(std::vector<Point> sites) : sites_(std::move(sites)) {
  if (!is_self_avoiding(sites_)) fail(ErrorKind::Validation, "sites do not form a self-avoiding walk");
}

std::vector<Point> unit_steps(int dim) {
  std::vector<Point> steps;
  for (int i = 0; i < dim; ++i) {
    for (Coord sign : {Coord{1}, Coord{-1}}) {
      Point e(dim);
      e[i] = sign;
      steps.push_back(e);
    }
  }
  return steps;
}

std::vector<Point> transverse_orbit(const Point& y) {
  const int k = y.dim();
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Point> out;
  do {
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      Point p(k);
      for (int i = 0; i < k; ++i) {
        const Coord v = y[perm[static_cast<std::size_t>(i)]];
        p[i] = (mask >> i) & 1u ? -v : v;
      }
      out.push_back(p);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace saw
