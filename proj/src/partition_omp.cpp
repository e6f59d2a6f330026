#include <algorithm>
#include <cmath>
#include <limits>

#include "partition_kernel.hpp"

namespace saw::detail {

PartitionTable partition_kernel_omp(const StepLaw& law, Coord n, Coord radius) {
  validate_partition_inputs(law, n, radius);
  PartitionTable table = make_table(law, n, radius);
  const auto groups = group_steps(law);

  std::vector<std::vector<std::ptrdiff_t>> shifts(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (const auto& y : groups[g].y) shifts[g].push_back(cell_shift(table, y));
  }

  const int k = law.dim - 1;
  const auto cells = static_cast<std::ptrdiff_t>(table.cells);
  std::vector<double> factor(groups.size());

  for (Coord t = 1; t <= n; ++t) {
    double ref = -std::numeric_limits<double>::infinity();
    for (const auto& grp : groups) {
      if (grp.t <= t) ref = std::max(ref, table.log_offset[static_cast<std::size_t>(t - grp.t)]);
    }
    if (!std::isfinite(ref)) continue;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const Coord src = t - groups[g].t;
      factor[g] = (src >= 0 && std::isfinite(table.log_offset[static_cast<std::size_t>(src)]))
                      ? std::exp(table.log_offset[static_cast<std::size_t>(src)] - ref)
                      : 0.0;
    }

    std::vector<double>& cur = table.values[static_cast<std::size_t>(t)];
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < cells; ++c) {
      const Point y = table.cell_point(static_cast<std::size_t>(c));
      double acc = 0.0;
      for (std::size_t g = 0; g < groups.size(); ++g) {
        if (factor[g] == 0.0) continue;
        const std::vector<double>& src = table.values[static_cast<std::size_t>(t - groups[g].t)];
        double sub = 0.0;
        for (std::size_t s = 0; s < groups[g].y.size(); ++s) {
          const Point& sy = groups[g].y[s];
          bool inside = true;
          for (int i = 0; i < k && inside; ++i) inside = std::abs(y[i] - sy[i]) <= radius;
          if (inside) sub += groups[g].p[s] * src[static_cast<std::size_t>(c - shifts[g][s])];
        }
        acc += factor[g] * sub;
      }
      cur[static_cast<std::size_t>(c)] = acc;
    }

    const double mx = *std::max_element(cur.begin(), cur.end());
    if (mx > 0.0) {
      for (double& v : cur) v /= mx;
      table.log_offset[static_cast<std::size_t>(t)] = ref + std::log(mx);
    }
  }
  return table;
}

}  // namespace saw::detail
