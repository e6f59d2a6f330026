#pragma once

// Exhaustive enumeration of self-avoiding walks on Z^d with exact counts per
// endpoint and length, for all walks, bridges and irreducible bridges.
//
// A bridge 0 -> x satisfies 0 < w_1(j) <= w_1(N) for 0 < j <= N. A level k
// with 0 < k < w_1(N) is a break point when the walk is at level <= k up to
// some time r and strictly above k afterwards; a bridge without break points
// is irreducible. Because every step changes w_1 by at most one, k is a break
// point exactly when the gap between levels k and k+1 is crossed once.

#include <functional>
#include <vector>

#include "saw/count_table.hpp"
#include "saw/lattice.hpp"
#include "saw/skeleton.hpp"

namespace saw {

struct EnumerateOptions {
  // Depth at which the search tree is cut into independent subtree tasks.
  int prefix_depth = 6;
  // Upper bound on the estimated number of search nodes. The default admits
  // d = 2 up to L = 24 and rejects L = 25.
  double node_budget = 3.0e10;
};

// Rough node count sum_{N <= L} mu_d^N used by the feasibility guard.
double estimate_nodes(int dim, int cutoff);

// OpenMP enumeration. Result is independent of the thread count.
CountTable enumerate_counts(int dim, int cutoff, WalkClass cls, const EnumerateOptions& options = {});
// Single-threaded reference of the same search, kept for testing.
CountTable enumerate_counts_serial(int dim, int cutoff, WalkClass cls, const EnumerateOptions& options = {});

struct Totals {
  std::vector<Count> c;      // c_N for N = 0..L
  std::vector<double> root;  // c_N^{1/N}; root[0] is defined as 1
};

// Requires an All table.
Totals total_counts(const CountTable& table);

// Truncated two-point weight sum_{N <= L} counts(x)[N] e^{-beta N}.
double evaluate_weight(const CountTable& table, double beta, const Point& x);

// Truncated bubble diagram sum_x g_L(x)^2. Requires an All table.
double bubble_diagram(const CountTable& table, double beta);

struct MassEstimate {
  std::vector<double> sequence;  // -log g_L((n, 0~)) / n for n = 1..n_max
  double estimate = 0.0;
};

MassEstimate mass_estimate(const CountTable& table, double beta, int n_max);

struct BridgeAnatomy {
  bool is_bridge = false;
  std::vector<Coord> break_points;       // increasing
  std::vector<Point> regeneration_sites;  // w(T_b), T_b = last time at level b
};

BridgeAnatomy classify_bridge(const SawPath& path);

// Increments between consecutive points of 0, regeneration sites, endpoint.
// Throws Error(Validation) if the path is not a bridge from its start.
Skeleton skeleton_of(const SawPath& path);

// Calls visit(sites) for every bridge 0 -> (n, 0~) with 1 <= length <= L, in
// a fixed deterministic order.
void for_each_axis_bridge(int dim, int n, int cutoff, const std::function<void(std::span<const Point>)>& visit);

// P_n restricted to |w| <= L, pushed forward to skeletons.
SkeletonLaw exact_conditioned_skeleton_law(int dim, int n, double beta, int cutoff);

}  // namespace saw
