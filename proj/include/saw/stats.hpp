#pragma once

// Statistics for checking that scaled skeletons look like a Brownian bridge
// B with E[B_s B_t] = sigma^2 s (1 - t) for s <= t, that increments between
// regeneration points stay short, and that walks stay close to their
// skeletons.

#include <cstdint>
#include <string>
#include <vector>

#include "saw/lattice.hpp"
#include "saw/renewal.hpp"
#include "saw/sampler.hpp"
#include "saw/skeleton.hpp"

namespace saw {

std::vector<double> default_grid();  // 0.1, 0.2, ..., 0.9

// Scaled processes evaluated on a fixed time grid.
struct Ensemble {
  Coord n = 0;
  int dims = 1;  // d - 1
  std::vector<double> grid;
  std::size_t replicas = 0;
  // values[(r * grid.size() + g) * dims + i]
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::string law_id;

  double at(std::size_t r, std::size_t g, int i) const {
    return values[(r * grid.size() + g) * static_cast<std::size_t>(dims) + static_cast<std::size_t>(i)];
  }
};

// Evaluates each skeleton's scaled process on the grid. Throws
// Error(Validation) if a grid point is outside (0, 1) or the grid is not
// strictly increasing, or if any skeleton does not end at (n, 0~).
Ensemble make_ensemble(const std::vector<Skeleton>& skeletons, Coord n, const std::vector<double>& grid);

// Symmetric G x G matrix, row-major.
struct Matrix {
  std::size_t size = 0;
  std::vector<double> data;
  double operator()(std::size_t i, std::size_t j) const { return data[i * size + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data[i * size + j]; }
};

// Unbiased sample covariance across replicas, averaged over transverse
// coordinates.
Matrix empirical_covariance(const Ensemble& ensemble);

// Mean of Y_1(t_g) and its standard error, per grid point.
struct MeanPath {
  std::vector<double> mean;
  std::vector<double> standard_error;
};
MeanPath empirical_mean(const Ensemble& ensemble);

struct BridgeFit {
  double sigma2_hat = 0.0;
  double rel_rms = 0.0;
  struct Residual {
    std::size_t i = 0, j = 0;
    double empirical = 0.0, model = 0.0;
  };
  std::vector<Residual> residuals;  // upper triangle i <= j
};

// Least-squares sigma^2 for cov(i, j) ~ sigma^2 min(t_i, t_j)(1 - max(t_i, t_j))
// over the upper triangle; rel_rms = |residual| / |fit|.
BridgeFit fit_bridge_covariance(const Matrix& cov, const std::vector<double>& grid);

struct KsResult {
  double t = 0.0;
  double statistic = 0.0;
  double p_value = 0.0;
};

// Asymptotic Kolmogorov tail P(K > lambda), 100 series terms.
double kolmogorov_pvalue(double lambda);

// One-sample KS statistic of a sample against N(0, 1).
double ks_statistic_normal(std::vector<double> sample);

// KS test of Y_1(t) / sqrt(sigma2 t (1 - t)) against N(0, 1); t must be a
// grid point of the ensemble.
KsResult ks_marginal(const Ensemble& ensemble, double t, double sigma2_hat);

// Same test after spreading each value uniformly over its lattice cell of
// width 1 / sqrt(n), with the model variance widened by the cell's 1/12.
// Removes the atoms that make the plain statistic at least half the largest
// atom mass. Deterministic in seed.
KsResult ks_marginal_jittered(const Ensemble& ensemble, double t, double sigma2_hat, std::uint64_t seed);

double max_increment_norm(const Skeleton& skeleton);

// Fraction of skeletons whose largest increment (Euclidean norm) exceeds n^{1/3}.
double gap_statistic(const std::vector<Skeleton>& skeletons, Coord n);

// Largest distance from a scaled walk vertex (w_1 / n, w_perp / sqrt(n)) to
// the polyline through the scaled skeleton. Throws Error(Validation) if the
// skeleton is not the walk's own.
double shrinking_statistic(const SawPath& walk, const Skeleton& skeleton, Coord n);

// E[y_1^2] / E[t] under the step law; a candidate for the limit variance,
// reported next to the fitted value.
double renewal_variance_candidate(const StepLaw& law);

}  // namespace saw
