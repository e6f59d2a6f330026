#include <algorithm>
#include <cmath>
#include <limits>

#include "partition_kernel.hpp"
#include "saw/error.hpp"

namespace saw {

bool PartitionTable::in_box(const Point& y) const {
  return y.dim() == dim - 1 && y.linf() <= radius;
}

std::size_t PartitionTable::cell(const Point& y) const {
  std::size_t idx = 0;
  for (int i = 0; i < y.dim(); ++i) idx = idx * width + static_cast<std::size_t>(y[i] + radius);
  return idx;
}

Point PartitionTable::cell_point(std::size_t c) const {
  Point y(dim - 1);
  for (int i = dim - 2; i >= 0; --i) {
    y[i] = static_cast<Coord>(c % width) - radius;
    c /= width;
  }
  return y;
}

double PartitionTable::log_g(Coord t, const Point& y) const {
  if (t < 0 || t > n || !in_box(y)) return -std::numeric_limits<double>::infinity();
  const double v = values[static_cast<std::size_t>(t)][cell(y)];
  if (!(v > 0.0)) return -std::numeric_limits<double>::infinity();
  return std::log(v) + log_offset[static_cast<std::size_t>(t)];
}

double PartitionTable::g(Coord t, const Point& y) const { return std::exp(log_g(t, y)); }

Coord default_box_radius(const StepLaw& law, Coord n) {
  const double v = law.transverse_variance();
  const auto gauss = static_cast<Coord>(std::ceil(4.0 * std::sqrt(static_cast<double>(n) * v)));
  return std::max(gauss, law.transverse_reach());
}

PartitionTable dp_partition(const StepLaw& law, Coord n, Coord radius) {
  PartitionTable table = detail::partition_kernel_omp(law, n, radius);
  const PartitionTable wide = detail::partition_kernel_omp(law, n, 2 * radius);
  table.leakage = detail::box_leakage(table, wide);
  return table;
}

PartitionTable dp_partition_serial(const StepLaw& law, Coord n, Coord radius) {
  PartitionTable table = detail::partition_kernel_serial(law, n, radius);
  const PartitionTable wide = detail::partition_kernel_serial(law, n, 2 * radius);
  table.leakage = detail::box_leakage(table, wide);
  return table;
}

namespace detail {

std::vector<StepGroup> group_steps(const StepLaw& law) {
  std::vector<StepGroup> groups;
  for (const auto& e : law.steps) {
    if (!(e.p > 0.0)) continue;
    if (groups.empty() || groups.back().t != e.step.t) groups.push_back({e.step.t, {}, {}});
    groups.back().y.push_back(e.step.y);
    groups.back().p.push_back(e.p);
  }
  return groups;
}

void validate_partition_inputs(const StepLaw& law, Coord n, Coord radius) {
  if (n < 1) fail(ErrorKind::Validation, "dp_partition: n must be at least 1");
  if (law.steps.empty()) fail(ErrorKind::Validation, "dp_partition: empty step law");
  for (const auto& e : law.steps) {
    if (e.step.t < 1) fail(ErrorKind::Validation, "dp_partition: step with t < 1");
    if (e.step.y.dim() != law.dim - 1) fail(ErrorKind::Validation, "dp_partition: step dimension mismatch");
  }
  if (radius < law.transverse_reach()) {
    fail(ErrorKind::Validation, "box-too-small: R = " + std::to_string(radius) + " below the step reach " +
                                    std::to_string(law.transverse_reach()));
  }
}

PartitionTable make_table(const StepLaw& law, Coord n, Coord radius) {
  PartitionTable table;
  table.dim = law.dim;
  table.n = n;
  table.radius = radius;
  table.width = static_cast<std::size_t>(2 * radius + 1);
  table.cells = 1;
  for (int i = 0; i < law.dim - 1; ++i) table.cells *= table.width;
  table.values.assign(static_cast<std::size_t>(n + 1), std::vector<double>(table.cells, 0.0));
  table.log_offset.assign(static_cast<std::size_t>(n + 1), -std::numeric_limits<double>::infinity());
  table.values[0][table.cell(Point(law.dim - 1))] = 1.0;
  table.log_offset[0] = 0.0;
  return table;
}

std::ptrdiff_t cell_shift(const PartitionTable& table, const Point& y) {
  std::ptrdiff_t s = 0;
  for (int i = 0; i < y.dim(); ++i) s = s * static_cast<std::ptrdiff_t>(table.width) + y[i];
  return s;
}

double box_leakage(const PartitionTable& box, const PartitionTable& wide) {
  const Point zero(box.dim - 1);
  const double a = box.log_g(box.n, zero);
  const double b = wide.log_g(wide.n, zero);
  if (!std::isfinite(b)) return 0.0;
  if (!std::isfinite(a)) return 1.0;
  return std::max(0.0, -std::expm1(a - b));
}

}  // namespace detail
}  // namespace saw
