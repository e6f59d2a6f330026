#include <omp.h>

#include <memory>
#include <vector>

#include "saw/enumerate.hpp"
#include "walker.hpp"

namespace saw {

namespace {

// Counts every node shallower than `depth` into `shallow` and records the
// step sequence of every node at exactly `depth`.
void collect_prefixes(detail::Walker& w, int depth, detail::Accumulator& shallow,
                      std::vector<std::vector<int>>& prefixes) {
  if (w.length() == depth) {
    prefixes.push_back(w.dirs());
    return;
  }
  if (w.in_class()) shallow.add(w.position(), w.length());
  if (w.length() == w.cutoff()) return;
  for (int dir = 0; dir < w.num_dirs(); ++dir) {
    if (w.push(dir)) {
      collect_prefixes(w, depth, shallow, prefixes);
      w.pop();
    }
  }
}

}  // namespace

CountTable enumerate_counts(int dim, int cutoff, WalkClass cls, const EnumerateOptions& options) {
  detail::check_budget(dim, cutoff, options.node_budget);

  detail::Accumulator total(dim, cutoff);
  std::vector<std::vector<int>> prefixes;
  {
    detail::Walker root(dim, cutoff, cls);
    collect_prefixes(root, std::max(options.prefix_depth, 0), total, prefixes);
  }

  const auto tasks = static_cast<std::ptrdiff_t>(prefixes.size());
#pragma omp parallel
  {
    detail::Walker walker(dim, cutoff, cls);
    auto local = std::make_unique<detail::Accumulator>(dim, cutoff);
#pragma omp for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < tasks; ++i) {
      const auto& prefix = prefixes[static_cast<std::size_t>(i)];
      for (int dir : prefix) walker.push(dir);
      detail::search(walker, *local);
      for (std::size_t k = 0; k < prefix.size(); ++k) walker.pop();
    }
    // Integer addition commutes, so merge order does not affect the result.
#pragma omp critical(saw_enumerate_merge)
    total.merge(*local);
  }

  CountTable table(dim, cutoff, cls);
  total.fill(table);
  return table;
}

}  // namespace saw
