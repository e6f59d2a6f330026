#include "saw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "saw/enumerate.hpp"
#include "saw/error.hpp"
#include "saw/rng.hpp"

namespace saw {

std::vector<double> default_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 9; ++i) g.push_back(i / 10.0);
  return g;
}

namespace {

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) fail(ErrorKind::Validation, "empty time grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] < 1.0)) fail(ErrorKind::Validation, "grid points must lie inside (0, 1)");
    if (i > 0 && !(grid[i] > grid[i - 1])) fail(ErrorKind::Validation, "grid must be strictly increasing");
  }
}

double bridge_kernel(double s, double t) { return std::min(s, t) * (1.0 - std::max(s, t)); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

Ensemble make_ensemble(const std::vector<Skeleton>& skeletons, Coord n, const std::vector<double>& grid) {
  check_grid(grid);
  Ensemble ens;
  ens.n = n;
  ens.grid = grid;
  ens.replicas = skeletons.size();
  ens.dims = skeletons.empty() ? 1 : skeletons.front().transverse_dim();
  ens.values.reserve(skeletons.size() * grid.size() * static_cast<std::size_t>(ens.dims));
  for (const auto& sk : skeletons) {
    const ScaledBridgeProcess proc = scale_skeleton(sk, n);
    for (double t : grid) {
      const auto v = evaluate_process(proc, t);
      for (int i = 0; i < ens.dims; ++i) ens.values.push_back(v[static_cast<std::size_t>(i)]);
    }
  }
  return ens;
}

Matrix empirical_covariance(const Ensemble& ens) {
  if (ens.replicas < 2) fail(ErrorKind::Validation, "empirical_covariance needs at least two replicas");
  const std::size_t g = ens.grid.size();
  Matrix cov{g, std::vector<double>(g * g, 0.0)};
  const double r = static_cast<double>(ens.replicas);
  for (int c = 0; c < ens.dims; ++c) {
    std::vector<double> mean(g, 0.0);
    for (std::size_t k = 0; k < ens.replicas; ++k) {
      for (std::size_t i = 0; i < g; ++i) mean[i] += ens.at(k, i, c);
    }
    for (double& m : mean) m /= r;
    std::vector<double> acc(g * g, 0.0);
    for (std::size_t k = 0; k < ens.replicas; ++k) {
      for (std::size_t i = 0; i < g; ++i) {
        const double a = ens.at(k, i, c) - mean[i];
        for (std::size_t j = i; j < g; ++j) acc[i * g + j] += a * (ens.at(k, j, c) - mean[j]);
      }
    }
    for (std::size_t i = 0; i < g; ++i) {
      for (std::size_t j = i; j < g; ++j) {
        const double v = acc[i * g + j] / (r - 1.0) / ens.dims;
        cov(i, j) += v;
        if (j != i) cov(j, i) += v;
      }
    }
  }
  return cov;
}

MeanPath empirical_mean(const Ensemble& ens) {
  if (ens.replicas < 2) fail(ErrorKind::Validation, "empirical_mean needs at least two replicas");
  MeanPath out;
  const double r = static_cast<double>(ens.replicas);
  for (std::size_t i = 0; i < ens.grid.size(); ++i) {
    double s = 0.0, s2 = 0.0;
    for (std::size_t k = 0; k < ens.replicas; ++k) s += ens.at(k, i, 0);
    const double m = s / r;
    for (std::size_t k = 0; k < ens.replicas; ++k) s2 += (ens.at(k, i, 0) - m) * (ens.at(k, i, 0) - m);
    out.mean.push_back(m);
    out.standard_error.push_back(std::sqrt(s2 / (r - 1.0) / r));
  }
  return out;
}

BridgeFit fit_bridge_covariance(const Matrix& cov, const std::vector<double>& grid) {
  check_grid(grid);
  if (cov.size != grid.size()) fail(ErrorKind::Validation, "covariance size does not match the grid");
  double ck = 0.0, kk = 0.0, cc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i; j < grid.size(); ++j) {
      const double k = bridge_kernel(grid[i], grid[j]);
      ck += cov(i, j) * k;
      kk += k * k;
      cc += cov(i, j) * cov(i, j);
    }
  }
  if (cc == 0.0) fail(ErrorKind::Validation, "degenerate-fit: covariance matrix is identically zero");
  BridgeFit fit;
  fit.sigma2_hat = ck / kk;
  double res2 = 0.0, fit2 = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i; j < grid.size(); ++j) {
      const double model = fit.sigma2_hat * bridge_kernel(grid[i], grid[j]);
      fit.residuals.push_back({i, j, cov(i, j), model});
      res2 += (cov(i, j) - model) * (cov(i, j) - model);
      fit2 += model * model;
    }
  }
  if (!(fit.sigma2_hat > 0.0)) fail(ErrorKind::Validation, "degenerate-fit: nonpositive variance estimate");
  fit.rel_rms = std::sqrt(res2 / fit2);
  return fit;
}

double kolmogorov_pvalue(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  double p = 0.0;
  if (lambda < 1.0) {
    // P(K <= lambda) = sqrt(2 pi)/lambda sum_k exp(-(2k-1)^2 pi^2 / (8 lambda^2)).
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double cdf = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double m = 2.0 * k - 1.0;
      cdf += std::exp(-m * m * pi2 / (8.0 * lambda * lambda));
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    p = 1.0 - cdf;
  } else {
    // P(K > lambda) = 2 sum_k (-1)^{k-1} exp(-2 k^2 lambda^2).
    for (int k = 1; k <= 100; ++k) {
      const double term = std::exp(-2.0 * k * k * lambda * lambda);
      p += (k % 2 == 1) ? term : -term;
    }
    p *= 2.0;
  }
  return std::clamp(p, 0.0, 1.0);
}

double ks_statistic_normal(std::vector<double> sample) {
  if (sample.empty()) fail(ErrorKind::Validation, "KS test on an empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = normal_cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

namespace {

std::size_t ks_grid_index(const Ensemble& ens, double t, double sigma2_hat) {
  if (!(sigma2_hat > 0.0)) fail(ErrorKind::Validation, "invalid-variance: sigma2_hat must be positive");
  if (!(t > 0.0 && t < 1.0)) fail(ErrorKind::Validation, "ks_marginal: t must lie inside (0, 1)");
  if (ens.replicas < 100) fail(ErrorKind::Validation, "ks_marginal needs at least 100 replicas");
  auto it = std::find_if(ens.grid.begin(), ens.grid.end(), [&](double g) { return std::abs(g - t) < 1e-12; });
  if (it == ens.grid.end()) fail(ErrorKind::Validation, "ks_marginal: t is not a grid point");
  return static_cast<std::size_t>(it - ens.grid.begin());
}

KsResult ks_result(double t, std::vector<double> z) {
  KsResult res;
  res.t = t;
  const double count = static_cast<double>(z.size());
  res.statistic = ks_statistic_normal(std::move(z));
  res.p_value = kolmogorov_pvalue(std::sqrt(count) * res.statistic);
  return res;
}

}  // namespace

KsResult ks_marginal(const Ensemble& ens, double t, double sigma2_hat) {
  const std::size_t gi = ks_grid_index(ens, t, sigma2_hat);
  const double scale = std::sqrt(sigma2_hat * t * (1.0 - t));
  std::vector<double> z;
  z.reserve(ens.replicas);
  for (std::size_t k = 0; k < ens.replicas; ++k) z.push_back(ens.at(k, gi, 0) / scale);
  return ks_result(t, std::move(z));
}

KsResult ks_marginal_jittered(const Ensemble& ens, double t, double sigma2_hat, std::uint64_t seed) {
  const std::size_t gi = ks_grid_index(ens, t, sigma2_hat);
  const double cell = 1.0 / std::sqrt(static_cast<double>(ens.n));
  const double scale = std::sqrt(sigma2_hat * t * (1.0 - t) + cell * cell / 12.0);
  std::vector<double> z;
  z.reserve(ens.replicas);
  for (std::size_t k = 0; k < ens.replicas; ++k) {
    SplitMix64 rng = make_stream(seed, k);
    z.push_back((ens.at(k, gi, 0) + (rng.uniform() - 0.5) * cell) / scale);
  }
  return ks_result(t, std::move(z));
}

double max_increment_norm(const Skeleton& skeleton) {
  double m = 0.0;
  for (const auto& x : skeleton.increments) m = std::max(m, join_frame(x).euclidean());
  return m;
}

double gap_statistic(const std::vector<Skeleton>& skeletons, Coord n) {
  if (skeletons.empty()) return 0.0;
  const double threshold = std::cbrt(static_cast<double>(n));
  std::size_t hits = 0;
  for (const auto& sk : skeletons) {
    if (max_increment_norm(sk) > threshold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(skeletons.size());
}

namespace {

// Euclidean distance from p to segment [a, b] in R^{1 + dims}.
double segment_distance(const Knot& p, const Knot& a, const Knot& b, int dims) {
  auto coord = [&](const Knot& k, int i) { return i == 0 ? k.time : k.value[static_cast<std::size_t>(i - 1)]; };
  double ab2 = 0.0, apab = 0.0;
  for (int i = 0; i <= dims; ++i) {
    const double ab = coord(b, i) - coord(a, i);
    ab2 += ab * ab;
    apab += (coord(p, i) - coord(a, i)) * ab;
  }
  const double u = ab2 > 0.0 ? std::clamp(apab / ab2, 0.0, 1.0) : 0.0;
  double d2 = 0.0;
  for (int i = 0; i <= dims; ++i) {
    const double q = coord(a, i) + u * (coord(b, i) - coord(a, i));
    d2 += (coord(p, i) - q) * (coord(p, i) - q);
  }
  return std::sqrt(d2);
}

}  // namespace

double shrinking_statistic(const SawPath& walk, const Skeleton& skeleton, Coord n) {
  if (!(skeleton_of(walk) == skeleton)) fail(ErrorKind::Validation, "skeleton-mismatch: not the walk's own skeleton");
  const ScaledBridgeProcess curve = scale_skeleton(skeleton, n);
  const double tn = static_cast<double>(n);
  const double sn = std::sqrt(tn);
  double worst = 0.0;
  for (const Point& site : walk.sites()) {
    Knot p;
    p.time = static_cast<double>(site[0]) / tn;
    for (int i = 0; i < curve.dims; ++i) p.value[static_cast<std::size_t>(i)] = static_cast<double>(site[i + 1]) / sn;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < curve.knots.size(); ++k) {
      best = std::min(best, segment_distance(p, curve.knots[k - 1], curve.knots[k], curve.dims));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

double renewal_variance_candidate(const StepLaw& law) { return law.transverse_variance() / law.mean_t(); }

}  // namespace saw
