#pragma once

// Exact sampling of regeneration skeletons conditioned to end at (n, 0~).
//
// The renewal partition function G(t, y) = sum over compositions of (t, y)
// of prod Q(x_i) is computed slab by slab on the transverse box |y|_inf <= R.
// A skeleton is then drawn backwards from (n, 0~): the last increment x is
// chosen with probability Q(x) G(n - x_t, -x_y) / G(n, 0~), and so on down to
// the origin. Within the box this is exactly the renewal law conditioned on
// hitting (n, 0~).

#include <array>
#include <cstdint>
#include <vector>

#include "saw/lattice.hpp"
#include "saw/renewal.hpp"
#include "saw/skeleton.hpp"

namespace saw {

// G(t, y) = values[t][cell(y)] * exp(log_offset[t]). Each slab is scaled so
// its largest entry is 1; an all-zero slab has log_offset = -inf.
struct PartitionTable {
  int dim = 2;  // lattice dimension; the box is (d-1)-dimensional
  Coord n = 0;
  Coord radius = 0;
  std::size_t width = 1;  // 2R + 1
  std::size_t cells = 1;  // width^(d-1)
  std::vector<std::vector<double>> values;
  std::vector<double> log_offset;
  // Fraction of conditioned mass lost to the box: 1 - G_R(n, 0~) / G_2R(n, 0~).
  double leakage = 0.0;

  bool in_box(const Point& y) const;
  std::size_t cell(const Point& y) const;
  Point cell_point(std::size_t cell) const;
  double log_g(Coord t, const Point& y) const;
  double g(Coord t, const Point& y) const;
};

// ceil(4 sqrt(n v)) with v the per-coordinate transverse step variance, but
// never less than the law's transverse reach.
Coord default_box_radius(const StepLaw& law, Coord n);

// OpenMP slab kernel (gather over predecessors, parallel across cells).
PartitionTable dp_partition(const StepLaw& law, Coord n, Coord radius);
// Serial reference (scatter from finished slabs), kept for testing.
PartitionTable dp_partition_serial(const StepLaw& law, Coord n, Coord radius);

class SkeletonSampler {
 public:
  // The table must have been built from the same law; both are copied. Throws
  // Error(Numerical) if G(n, 0~) is zero.
  SkeletonSampler(const StepLaw& law, const PartitionTable& table);

  Coord n() const noexcept { return table_.n; }
  // Deterministic in (seed, replicate).
  Skeleton sample(std::uint64_t seed, std::uint64_t replicate) const;

 private:
  struct Group {
    Coord t;
    std::vector<Point> y;
    std::vector<double> p;
  };

  PartitionTable table_;
  std::vector<Group> groups_;
  // ratio_[t][g] = exp(log_offset[t - groups_[g].t] - log_offset[t]).
  std::vector<std::vector<double>> ratio_;
};

Skeleton sample_skeleton(const StepLaw& law, const PartitionTable& table, Coord n, std::uint64_t seed,
                         std::uint64_t replicate);

// Replicates 0..count-1, in replicate order, sampled in parallel.
std::vector<Skeleton> sample_ensemble(const SkeletonSampler& sampler, std::uint64_t seed, std::size_t count);

struct Knot {
  double time = 0.0;
  std::array<double, kMaxDim - 1> value{};
};

// Piecewise-linear path [0, 1] -> R^{d-1} through (s_t / n, s_y / sqrt(n)).
struct ScaledBridgeProcess {
  int dims = 1;
  std::vector<Knot> knots;
};

ScaledBridgeProcess scale_skeleton(const Skeleton& skeleton, Coord n);
// Throws Error(Validation) for t outside [0, 1].
std::array<double, kMaxDim - 1> evaluate_process(const ScaledBridgeProcess& process, double t);

// Exact sampler of P_n restricted to |w| <= L: every bridge 0 -> (n, 0~) is
// enumerated once and drawn with probability proportional to e^{-beta |w|}.
class ExhaustiveBridgeSampler {
 public:
  ExhaustiveBridgeSampler(int dim, int n, double beta, int cutoff);

  std::size_t size() const noexcept { return walks_.size(); }
  SawPath sample(std::uint64_t seed, std::uint64_t replicate) const;
  // P(|w| = N) for N = 0..L.
  std::vector<double> length_distribution() const;

 private:
  int cutoff_;
  double beta_;
  std::vector<SawPath> walks_;
  std::vector<double> cumulative_;
};

SawPath sample_conditioned_walk_exhaustive(int dim, int n, double beta, int cutoff, std::uint64_t seed);

}  // namespace saw
