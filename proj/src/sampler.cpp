#include "saw/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "partition_kernel.hpp"
#include "saw/enumerate.hpp"
#include "saw/error.hpp"
#include "saw/rng.hpp"

namespace saw {

SkeletonSampler::SkeletonSampler(const StepLaw& law, const PartitionTable& table) : table_(table) {
  if (law.dim != table.dim) fail(ErrorKind::Validation, "sampler: law and table dimensions differ");
  for (auto& g : detail::group_steps(law)) groups_.push_back({g.t, std::move(g.y), std::move(g.p)});
  if (!std::isfinite(table_.log_g(table_.n, Point(table_.dim - 1)))) {
    fail(ErrorKind::Numerical, "unreachable-state: G(n, 0) vanishes (check n and the box radius)");
  }
  ratio_.assign(static_cast<std::size_t>(table_.n + 1), std::vector<double>(groups_.size(), 0.0));
  for (Coord t = 1; t <= table_.n; ++t) {
    const double here = table_.log_offset[static_cast<std::size_t>(t)];
    if (!std::isfinite(here)) continue;
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      const Coord src = t - groups_[g].t;
      if (src < 0) continue;
      const double there = table_.log_offset[static_cast<std::size_t>(src)];
      if (std::isfinite(there)) ratio_[static_cast<std::size_t>(t)][g] = std::exp(there - here);
    }
  }
}

Skeleton SkeletonSampler::sample(std::uint64_t seed, std::uint64_t replicate) const {
  SplitMix64 rng = make_stream(seed, replicate);
  Skeleton sk;
  Coord t = table_.n;
  Point y(table_.dim - 1);

  // Weight of stepping back from (t, y) by group g, entry s; zero when the
  // predecessor is outside the box.
  auto weight = [&](std::size_t g, std::size_t s) {
    const Coord src = t - groups_[g].t;
    if (src < 0) return 0.0;
    const Point prev = y - groups_[g].y[s];
    if (!table_.in_box(prev)) return 0.0;
    return groups_[g].p[s] * table_.values[static_cast<std::size_t>(src)][table_.cell(prev)] *
           ratio_[static_cast<std::size_t>(t)][g];
  };

  std::vector<double> weights;
  std::vector<std::pair<std::size_t, std::size_t>> index;
  while (t > 0) {
    weights.clear();
    index.clear();
    double total = 0.0;
    for (std::size_t g = 0; g < groups_.size() && groups_[g].t <= t; ++g) {
      for (std::size_t s = 0; s < groups_[g].y.size(); ++s) {
        const double w = weight(g, s);
        if (w <= 0.0) continue;
        total += w;
        weights.push_back(total);
        index.emplace_back(g, s);
      }
    }
    if (!(total > 0.0)) fail(ErrorKind::Numerical, "unreachable-state during backward sampling");

    const double target = rng.uniform() * total;
    auto it = std::upper_bound(weights.begin(), weights.end(), target);
    // Rounding can leave target at the very end of the range.
    if (it == weights.end()) --it;
    const auto [pick_g, pick_s] = index[static_cast<std::size_t>(it - weights.begin())];
    const FrameSplit step{groups_[pick_g].t, groups_[pick_g].y[pick_s]};
    sk.increments.push_back(step);
    t -= step.t;
    y = y - step.y;
  }
  std::reverse(sk.increments.begin(), sk.increments.end());
  return sk;
}

Skeleton sample_skeleton(const StepLaw& law, const PartitionTable& table, Coord n, std::uint64_t seed,
                         std::uint64_t replicate) {
  if (n != table.n) fail(ErrorKind::Validation, "sample_skeleton: table was built for a different n");
  return SkeletonSampler(law, table).sample(seed, replicate);
}

std::vector<Skeleton> sample_ensemble(const SkeletonSampler& sampler, std::uint64_t seed, std::size_t count) {
  std::vector<Skeleton> out(count);
  const auto total = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    out[static_cast<std::size_t>(i)] = sampler.sample(seed, static_cast<std::uint64_t>(i));
  }
  return out;
}

ScaledBridgeProcess scale_skeleton(const Skeleton& skeleton, Coord n) {
  if (!skeleton.valid_for(n)) fail(ErrorKind::Validation, "scale_skeleton: skeleton does not sum to (n, 0)");
  ScaledBridgeProcess proc;
  proc.dims = skeleton.transverse_dim();
  const double tn = static_cast<double>(n);
  const double sn = std::sqrt(tn);
  proc.knots.push_back(Knot{});
  Coord t = 0;
  Point y(proc.dims);
  for (const auto& x : skeleton.increments) {
    t += x.t;
    y = y + x.y;
    Knot k;
    k.time = static_cast<double>(t) / tn;
    for (int i = 0; i < proc.dims; ++i) k.value[static_cast<std::size_t>(i)] = static_cast<double>(y[i]) / sn;
    proc.knots.push_back(k);
  }
  return proc;
}

std::array<double, kMaxDim - 1> evaluate_process(const ScaledBridgeProcess& process, double t) {
  if (!(t >= 0.0 && t <= 1.0)) fail(ErrorKind::Validation, "evaluate_process: t outside [0, 1]");
  const auto& k = process.knots;
  auto hi = std::lower_bound(k.begin(), k.end(), t, [](const Knot& a, double v) { return a.time < v; });
  if (hi == k.end()) return k.back().value;
  if (hi->time == t || hi == k.begin()) return hi->value;
  const auto lo = hi - 1;
  const double w = (t - lo->time) / (hi->time - lo->time);
  std::array<double, kMaxDim - 1> out{};
  for (int i = 0; i < process.dims; ++i) {
    const auto u = static_cast<std::size_t>(i);
    out[u] = lo->value[u] + w * (hi->value[u] - lo->value[u]);
  }
  return out;
}

ExhaustiveBridgeSampler::ExhaustiveBridgeSampler(int dim, int n, double beta, int cutoff)
    : cutoff_(cutoff), beta_(beta) {
  if (!(beta > 0.0)) fail(ErrorKind::Validation, "beta must be positive");
  double run = 0.0;
  for_each_axis_bridge(dim, n, cutoff, [&](std::span<const Point> sites) {
    walks_.emplace_back(std::vector<Point>(sites.begin(), sites.end()));
    run += std::exp(-beta * static_cast<double>(walks_.back().length()));
    cumulative_.push_back(run);
  });
  if (walks_.empty()) fail(ErrorKind::Validation, "no-bridges-found: no bridge 0 -> (n, 0) with length <= L");
}

SawPath ExhaustiveBridgeSampler::sample(std::uint64_t seed, std::uint64_t replicate) const {
  SplitMix64 rng = make_stream(seed, replicate);
  const double target = rng.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  if (it == cumulative_.end()) --it;
  return walks_[static_cast<std::size_t>(it - cumulative_.begin())];
}

std::vector<double> ExhaustiveBridgeSampler::length_distribution() const {
  std::vector<double> dist(static_cast<std::size_t>(cutoff_ + 1), 0.0);
  for (const auto& w : walks_) dist[w.length()] += std::exp(-beta_ * static_cast<double>(w.length()));
  double z = 0.0;
  for (double v : dist) z += v;
  for (double& v : dist) v /= z;
  return dist;
}

SawPath sample_conditioned_walk_exhaustive(int dim, int n, double beta, int cutoff, std::uint64_t seed) {
  return ExhaustiveBridgeSampler(dim, n, beta, cutoff).sample(seed, 0);
}

}  // namespace saw
