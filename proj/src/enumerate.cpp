#include "saw/enumerate.hpp"

#include <cmath>
#include <map>

#include "saw/error.hpp"
#include "walker.hpp"

namespace saw {

double estimate_nodes(int dim, int cutoff) {
  // Connective constants of Z^2, Z^3, Z^4.
  static constexpr double kMu[] = {2.638158, 4.684043, 6.774043};
  const double mu = kMu[std::clamp(dim, kMinDim, kMaxDim) - kMinDim];
  double total = 0.0;
  double term = 1.0;
  for (int n = 0; n <= cutoff; ++n) {
    total += term;
    term *= mu;
  }
  return total;
}

Totals total_counts(const CountTable& table) {
  if (table.walk_class() != WalkClass::All) fail(ErrorKind::Validation, "total_counts requires an all-walks table");
  Totals out;
  out.c.assign(static_cast<std::size_t>(table.cutoff() + 1), 0);
  table.for_each([&](const Point&, std::span<const Count> prof) {
    for (std::size_t n = 0; n < prof.size(); ++n) out.c[n] += prof[n];
  });
  out.root.resize(out.c.size());
  for (std::size_t n = 0; n < out.c.size(); ++n) {
    out.root[n] = n == 0 ? 1.0 : std::pow(static_cast<double>(out.c[n]), 1.0 / static_cast<double>(n));
  }
  return out;
}

namespace {

long double weight_of(std::span<const Count> prof, double beta) {
  long double w = 0.0L;
  for (std::size_t n = 0; n < prof.size(); ++n) {
    if (prof[n] != 0) w += static_cast<long double>(prof[n]) * std::exp(-static_cast<long double>(beta) * n);
  }
  return w;
}

void require_positive_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) fail(ErrorKind::Validation, "beta must be positive");
}

}  // namespace

double evaluate_weight(const CountTable& table, double beta, const Point& x) {
  require_positive_beta(beta);
  return static_cast<double>(weight_of(table.counts(x), beta));
}

double bubble_diagram(const CountTable& table, double beta) {
  require_positive_beta(beta);
  if (table.walk_class() != WalkClass::All) fail(ErrorKind::Validation, "bubble_diagram requires an all-walks table");
  long double sum = 0.0L;
  table.for_each([&](const Point&, std::span<const Count> prof) {
    const long double w = weight_of(prof, beta);
    sum += w * w;
  });
  return static_cast<double>(sum);
}

MassEstimate mass_estimate(const CountTable& table, double beta, int n_max) {
  require_positive_beta(beta);
  if (table.walk_class() != WalkClass::All) fail(ErrorKind::Validation, "mass_estimate requires an all-walks table");
  if (n_max < 1) fail(ErrorKind::Validation, "n_max must be at least 1");
  MassEstimate out;
  for (int n = 1; n <= n_max; ++n) {
    Point x(table.dim());
    x[0] = n;
    const double w = evaluate_weight(table, beta, x);
    if (!(w > 0.0)) {
      fail(ErrorKind::Validation, "zero-weight endpoint at n = " + std::to_string(n) + " (cutoff too small)");
    }
    out.sequence.push_back(-std::log(w) / n);
  }
  out.estimate = out.sequence.back();
  return out;
}

BridgeAnatomy classify_bridge(const SawPath& path) {
  BridgeAnatomy out;
  const auto sites = path.sites();
  const Coord start = sites.front()[0];
  const Coord end = sites.back()[0];
  for (std::size_t j = 1; j < sites.size(); ++j) {
    if (!(start < sites[j][0] && sites[j][0] <= end)) return out;
  }
  out.is_bridge = true;
  if (end - start < 2) return out;

  // crossings[k - start] counts steps between levels k and k + 1.
  std::vector<int> crossings(static_cast<std::size_t>(end - start), 0);
  std::vector<std::size_t> last_visit(static_cast<std::size_t>(end - start + 1), 0);
  for (std::size_t j = 0; j < sites.size(); ++j) {
    last_visit[static_cast<std::size_t>(sites[j][0] - start)] = j;
    if (j > 0 && sites[j][0] != sites[j - 1][0]) {
      const Coord gap = std::min(sites[j][0], sites[j - 1][0]);
      ++crossings[static_cast<std::size_t>(gap - start)];
    }
  }
  for (Coord k = start + 1; k < end; ++k) {
    if (crossings[static_cast<std::size_t>(k - start)] == 1) {
      out.break_points.push_back(k);
      out.regeneration_sites.push_back(sites[last_visit[static_cast<std::size_t>(k - start)]]);
    }
  }
  return out;
}

Skeleton skeleton_of(const SawPath& path) {
  const BridgeAnatomy anatomy = classify_bridge(path);
  if (!anatomy.is_bridge) fail(ErrorKind::Validation, "skeleton_of: path is not a bridge");
  Skeleton sk;
  if (path.length() == 0) return sk;
  Point prev = path.start();
  for (const Point& r : anatomy.regeneration_sites) {
    sk.increments.push_back(split_frame(r - prev));
    prev = r;
  }
  sk.increments.push_back(split_frame(path.end() - prev));
  return sk;
}

namespace {

void axis_bridge_search(detail::Walker& w, Coord n, const std::function<void(std::span<const Point>)>& visit) {
  if (w.length() > 0 && w.coord(0) == n && w.in_class()) {
    bool on_axis = true;
    for (int i = 1; i < w.dim(); ++i) on_axis = on_axis && w.coord(i) == 0;
    if (on_axis) {
      const auto sites = w.sites();
      visit(sites);
    }
  }
  const int remaining = w.cutoff() - w.length();
  if (remaining == 0) return;
  for (int dir = 0; dir < w.num_dirs(); ++dir) {
    if (!w.push(dir)) continue;
    Coord dist = std::abs(n - w.coord(0));
    for (int i = 1; i < w.dim(); ++i) dist += std::abs(w.coord(i));
    if (w.coord(0) <= n && dist <= remaining - 1) axis_bridge_search(w, n, visit);
    w.pop();
  }
}

}  // namespace

void for_each_axis_bridge(int dim, int n, int cutoff, const std::function<void(std::span<const Point>)>& visit) {
  if (dim < kMinDim || dim > kMaxDim) fail(ErrorKind::Validation, "dimension must be in [2, 4]");
  if (n < 1) fail(ErrorKind::Validation, "target distance n must be at least 1");
  if (cutoff < n) return;
  detail::Walker walker(dim, cutoff, WalkClass::Bridge);
  axis_bridge_search(walker, n, visit);
}

SkeletonLaw exact_conditioned_skeleton_law(int dim, int n, double beta, int cutoff) {
  require_positive_beta(beta);
  std::map<Skeleton, std::vector<Count>> by_length;
  for_each_axis_bridge(dim, n, cutoff, [&](std::span<const Point> sites) {
    const SawPath path(std::vector<Point>(sites.begin(), sites.end()));
    auto [it, inserted] = by_length.try_emplace(skeleton_of(path), static_cast<std::size_t>(cutoff + 1), Count{0});
    ++it->second[path.length()];
  });
  if (by_length.empty()) {
    fail(ErrorKind::Validation, "no-bridges-found: no bridge 0 -> (n, 0) with length <= L");
  }

  std::vector<long double> weights;
  long double z = 0.0L;
  for (const auto& [sk, prof] : by_length) {
    weights.push_back(weight_of(prof, beta));
    z += weights.back();
  }
  SkeletonLaw law;
  std::size_t i = 0;
  for (const auto& [sk, prof] : by_length) law.emplace(sk, static_cast<double>(weights[i++] / z));
  return law;
}

}  // namespace saw
