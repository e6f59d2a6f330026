#pragma once

#include <vector>

#include "saw/sampler.hpp"

namespace saw::detail {

// Steps of a law grouped by their t component.
struct StepGroup {
  Coord t = 0;
  std::vector<Point> y;
  std::vector<double> p;
};

std::vector<StepGroup> group_steps(const StepLaw& law);

void validate_partition_inputs(const StepLaw& law, Coord n, Coord radius);

// Box geometry with G(0, 0~) = 1 and every other slab unset.
PartitionTable make_table(const StepLaw& law, Coord n, Coord radius);

// Linear cell offset of a transverse displacement (valid when both ends are
// in the box).
std::ptrdiff_t cell_shift(const PartitionTable& table, const Point& y);

PartitionTable partition_kernel_omp(const StepLaw& law, Coord n, Coord radius);
PartitionTable partition_kernel_serial(const StepLaw& law, Coord n, Coord radius);

// 1 - G_R(n, 0~) / G_2R(n, 0~), clamped at 0.
double box_leakage(const PartitionTable& box, const PartitionTable& wide);

}  // namespace saw::detail
