#include <algorithm>
#include <cmath>
#include <limits>

#include "partition_kernel.hpp"

namespace saw::detail {

// Pushes mass forward from each finished slab instead of pulling it into the
// slab being built; only shares the box geometry with the OpenMP kernel.
PartitionTable partition_kernel_serial(const StepLaw& law, Coord n, Coord radius) {
  validate_partition_inputs(law, n, radius);
  PartitionTable table = make_table(law, n, radius);

  std::vector<std::vector<double>> raw(static_cast<std::size_t>(n + 1), std::vector<double>(table.cells, 0.0));
  std::vector<double> ref(static_cast<std::size_t>(n + 1), std::numeric_limits<double>::quiet_NaN());

  for (Coord src = 0; src <= n; ++src) {
    const auto s = static_cast<std::size_t>(src);
    if (src > 0) {
      const double mx = *std::max_element(raw[s].begin(), raw[s].end());
      if (mx > 0.0) {
        for (std::size_t c = 0; c < table.cells; ++c) table.values[s][c] = raw[s][c] / mx;
        table.log_offset[s] = ref[s] + std::log(mx);
      }
    }
    if (!std::isfinite(table.log_offset[s])) continue;

    for (const auto& e : law.steps) {
      const Coord dst = src + e.step.t;
      if (dst > n || !(e.p > 0.0)) continue;
      const auto d = static_cast<std::size_t>(dst);
      if (std::isnan(ref[d])) ref[d] = table.log_offset[s];
      const double f = e.p * std::exp(table.log_offset[s] - ref[d]);
      for (std::size_t c = 0; c < table.cells; ++c) {
        const double v = table.values[s][c];
        if (v == 0.0) continue;
        const Point y = table.cell_point(c) + e.step.y;
        if (table.in_box(y)) raw[d][table.cell(y)] += f * v;
      }
    }
  }
  return table;
}

}  // namespace saw::detail
