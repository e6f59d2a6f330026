#pragma once

// The renewal step law of axis bridges. Irreducible bridges are the renewal
// steps: with f_L(x) the truncated irreducible two-point function, the tilt
// m_hat solves sum_x f_L(x) e^{-m_hat x_1} = 1 and
//
//   Q(x) = f_L(x) e^{-m_hat x_1}
//
// is a probability law on strictly advancing displacements (t >= 1, y).

#include <string>
#include <vector>

#include "saw/count_table.hpp"
#include "saw/skeleton.hpp"

namespace saw {

struct StepEntry {
  FrameSplit step;
  double p = 0.0;
};

struct StepLaw {
  int dim = 2;
  double beta = 0.0;
  int cutoff = 0;      // length cutoff of the irreducible table it came from
  double m_hat = 0.0;  // calibrated tilt along axis 1
  // Mass carried by irreducible bridges of exactly length L under the tilt;
  // shrinks as L grows and is reported as a truncation indicator.
  double tail_mass_proxy = 0.0;
  std::vector<StepEntry> steps;  // sorted by (t, y)

  double total() const;
  double probability(const FrameSplit& step) const;  // 0 if absent
  Coord max_t() const;
  Coord transverse_reach() const;  // max |y|_inf
  // E[t] and per-coordinate E[y_i^2] (averaged over transverse coordinates).
  double mean_t() const;
  double transverse_variance() const;
  // Mass on steps with Euclidean norm strictly greater than radius.
  double tail_mass(double radius) const;
  // Restriction to steps with t <= t_max, renormalised.
  StepLaw truncated_to(Coord t_max) const;
};

// Phi(m) = sum_{x_1 >= 1} sum_{N <= max_length} counts(x)[N] e^{-beta N} e^{-m x_1}.
// max_length < 0 means the table cutoff.
double tilted_mass(const CountTable& irr, double beta, double m, int max_length = -1);

// Unique root of Phi(m) = 1 by bisection, |Phi(m_hat) - 1| <= 1e-12.
double calibrate_mass(const CountTable& irr, double beta);

StepLaw build_step_law(const CountTable& irr, double beta, double m_hat);

struct MassGapReport {
  std::vector<double> log_h;  // (1/n) log H_n(0), n = 1..n_max
  std::vector<double> log_f;  // (1/n) log F_n(0)
  double gap = 0.0;           // log_h.back() - log_f.back()
};

MassGapReport mass_gap_diagnostic(const CountTable& bridges, const CountTable& irr, double beta, int n_max);

struct PrefactorReport {
  double tau_hat = 0.0;
  std::vector<double> r;       // g_L(n, 0~) n^{(d-1)/2} e^{n tau}, n = 1..n_max
  std::vector<double> ratios;  // r(n+1) / r(n)
};

// tau = mass_estimate(n_max) + tau_shift.
PrefactorReport oz_prefactor_diagnostic(const CountTable& all, double beta, int n_max, double tau_shift = 0.0);

// How piece lengths are truncated when a skeleton weight is assembled from
// the irreducible table.
enum class LengthTruncation {
  // Sum of piece lengths <= L: the law of exhaustively enumerated bridges
  // with |w| <= L.
  Total,
  // Each piece independently <= L: the renewal law driven by a step law
  // built from the same table.
  PerPiece,
};

// Normalised product law prod f(x_i) over all compositions of (n, 0~) into
// irreducible displacements present in the table.
SkeletonLaw product_skeleton_law(const CountTable& irr, int n, double beta, LengthTruncation mode);

}  // namespace saw
