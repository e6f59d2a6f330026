#include "saw/enumerate.hpp"
#include "walker.hpp"

namespace saw {

CountTable enumerate_counts_serial(int dim, int cutoff, WalkClass cls, const EnumerateOptions& options) {
  detail::check_budget(dim, cutoff, options.node_budget);
  detail::Walker walker(dim, cutoff, cls);
  detail::Accumulator acc(dim, cutoff);
  detail::search(walker, acc);
  CountTable table(dim, cutoff, cls);
  acc.fill(table);
  return table;
}

}  // namespace saw
