#include "saw/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "saw/enumerate.hpp"
#include "saw/error.hpp"

namespace saw {

namespace {

void require_class(const CountTable& t, WalkClass cls, const char* what) {
  if (t.walk_class() != cls) {
    fail(ErrorKind::Validation, std::string(what) + " requires a " + std::string(to_string(cls)) + " table");
  }
}

long double profile_weight(std::span<const Count> prof, double beta, int max_length) {
  long double w = 0.0L;
  const std::size_t top = std::min(prof.size(), static_cast<std::size_t>(max_length + 1));
  for (std::size_t n = 0; n < top; ++n) {
    if (prof[n] != 0) w += static_cast<long double>(prof[n]) * std::exp(-static_cast<long double>(beta) * n);
  }
  return w;
}

// F_t = sum_y f_L(t, y) for t = 0..L (F_0 unused).
std::vector<long double> slab_weights(const CountTable& irr, double beta, int max_length) {
  std::vector<long double> slabs(static_cast<std::size_t>(irr.cutoff() + 1), 0.0L);
  irr.for_each([&](const Point& x, std::span<const Count> prof) {
    if (x[0] >= 1) slabs[static_cast<std::size_t>(x[0])] += profile_weight(prof, beta, max_length);
  });
  return slabs;
}

long double phi(const std::vector<long double>& slabs, long double m) {
  long double s = 0.0L;
  for (std::size_t t = 1; t < slabs.size(); ++t) {
    if (slabs[t] > 0.0L) s += slabs[t] * std::exp(-m * static_cast<long double>(t));
  }
  return s;
}

}  // namespace

double tilted_mass(const CountTable& irr, double beta, double m, int max_length) {
  require_class(irr, WalkClass::IrreducibleBridge, "tilted_mass");
  if (max_length < 0) max_length = irr.cutoff();
  return static_cast<double>(phi(slab_weights(irr, beta, max_length), m));
}

double calibrate_mass(const CountTable& irr, double beta) {
  require_class(irr, WalkClass::IrreducibleBridge, "calibrate_mass");
  if (!(beta > 0.0)) fail(ErrorKind::Validation, "beta must be positive");
  const auto slabs = slab_weights(irr, beta, irr.cutoff());
  long double total = 0.0L;
  for (std::size_t t = 1; t < slabs.size(); ++t) total += slabs[t];
  if (!(total > 0.0L)) fail(ErrorKind::Validation, "empty-table: no irreducible bridges counted");

  // Phi is strictly decreasing with range (0, inf). For m >= 0,
  // Phi(m) <= e^{-m} * total, which gives the upper end of the bracket.
  long double lo = -static_cast<long double>(beta) - std::log(2.0L * irr.dim());
  long double hi = std::max(0.0L, std::log(total)) + 1.0L;
  for (long double step = 1.0L; phi(slabs, lo) <= 1.0L; step *= 2.0L) lo -= step;
  for (long double step = 1.0L; phi(slabs, hi) >= 1.0L; step *= 2.0L) hi += step;

  double a = static_cast<double>(lo);
  double b = static_cast<double>(hi);
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    if (phi(slabs, mid) > 1.0L) a = mid;
    else b = mid;
  }
  const double m_hat = std::abs(phi(slabs, a) - 1.0L) <= std::abs(phi(slabs, b) - 1.0L) ? a : b;
  if (std::abs(phi(slabs, m_hat) - 1.0L) > 1e-12L) {
    fail(ErrorKind::Numerical, "calibrate_mass: bisection did not reach |Phi - 1| <= 1e-12");
  }
  return m_hat;
}

StepLaw build_step_law(const CountTable& irr, double beta, double m_hat) {
  require_class(irr, WalkClass::IrreducibleBridge, "build_step_law");
  StepLaw law;
  law.dim = irr.dim();
  law.beta = beta;
  law.cutoff = irr.cutoff();
  law.m_hat = m_hat;
  long double sum = 0.0L;
  irr.for_each([&](const Point& x, std::span<const Count> prof) {
    if (x[0] < 1) return;
    const long double p = profile_weight(prof, beta, irr.cutoff()) * std::exp(-static_cast<long double>(m_hat) * x[0]);
    law.steps.push_back({split_frame(x), static_cast<double>(p)});
    sum += p;
  });
  std::sort(law.steps.begin(), law.steps.end(), [](const StepEntry& a, const StepEntry& b) { return a.step < b.step; });
  if (std::abs(sum - 1.0L) > 1e-10L) {
    fail(ErrorKind::Numerical, "normalization-failure: step law sums to " + std::to_string(static_cast<double>(sum)));
  }
  if (irr.cutoff() >= 1) {
    law.tail_mass_proxy =
        tilted_mass(irr, beta, m_hat, irr.cutoff()) - tilted_mass(irr, beta, m_hat, irr.cutoff() - 1);
  }
  return law;
}

double StepLaw::total() const {
  long double s = 0.0L;
  for (const auto& e : steps) s += e.p;
  return static_cast<double>(s);
}

double StepLaw::probability(const FrameSplit& step) const {
  auto it = std::lower_bound(steps.begin(), steps.end(), step,
                             [](const StepEntry& e, const FrameSplit& s) { return e.step < s; });
  return (it != steps.end() && it->step == step) ? it->p : 0.0;
}

Coord StepLaw::max_t() const {
  Coord m = 0;
  for (const auto& e : steps) m = std::max(m, e.step.t);
  return m;
}

Coord StepLaw::transverse_reach() const {
  Coord m = 0;
  for (const auto& e : steps) m = std::max(m, e.step.y.linf());
  return m;
}

double StepLaw::mean_t() const {
  long double s = 0.0L;
  for (const auto& e : steps) s += e.p * static_cast<long double>(e.step.t);
  return static_cast<double>(s);
}

double StepLaw::transverse_variance() const {
  if (steps.empty()) return 0.0;
  const int k = steps.front().step.y.dim();
  long double s = 0.0L;
  for (const auto& e : steps) {
    for (int i = 0; i < k; ++i) s += e.p * static_cast<long double>(e.step.y[i]) * e.step.y[i];
  }
  return static_cast<double>(s / k);
}

double StepLaw::tail_mass(double radius) const {
  long double s = 0.0L;
  for (const auto& e : steps) {
    if (join_frame(e.step).euclidean() > radius) s += e.p;
  }
  return static_cast<double>(s);
}

StepLaw StepLaw::truncated_to(Coord t_max) const {
  StepLaw out = *this;
  out.steps.clear();
  long double s = 0.0L;
  for (const auto& e : steps) {
    if (e.step.t <= t_max) {
      out.steps.push_back(e);
      s += e.p;
    }
  }
  if (!(s > 0.0L)) fail(ErrorKind::Validation, "truncated step law is empty");
  for (auto& e : out.steps) e.p = static_cast<double>(e.p / s);
  return out;
}

MassGapReport mass_gap_diagnostic(const CountTable& bridges, const CountTable& irr, double beta, int n_max) {
  require_class(bridges, WalkClass::Bridge, "mass_gap_diagnostic");
  require_class(irr, WalkClass::IrreducibleBridge, "mass_gap_diagnostic");
  if (bridges.dim() != irr.dim() || bridges.cutoff() != irr.cutoff()) {
    fail(ErrorKind::Validation, "mass_gap_diagnostic: tables differ in d or L");
  }
  if (n_max < 1 || n_max > irr.cutoff()) fail(ErrorKind::Validation, "mass_gap_diagnostic: need 1 <= n_max <= L");

  std::vector<long double> h(static_cast<std::size_t>(n_max + 1), 0.0L);
  std::vector<long double> f(h.size(), 0.0L);
  auto slab = [&](const CountTable& t, std::vector<long double>& out) {
    t.for_each([&](const Point& x, std::span<const Count> prof) {
      if (x[0] >= 1 && x[0] <= n_max) out[static_cast<std::size_t>(x[0])] += profile_weight(prof, beta, t.cutoff());
    });
  };
  slab(bridges, h);
  slab(irr, f);

  MassGapReport rep;
  for (int n = 1; n <= n_max; ++n) {
    if (!(h[static_cast<std::size_t>(n)] > 0.0L) || !(f[static_cast<std::size_t>(n)] > 0.0L)) {
      fail(ErrorKind::Validation, "zero-sum slab at n = " + std::to_string(n));
    }
    rep.log_h.push_back(static_cast<double>(std::log(h[static_cast<std::size_t>(n)]) / n));
    rep.log_f.push_back(static_cast<double>(std::log(f[static_cast<std::size_t>(n)]) / n));
  }
  rep.gap = rep.log_h.back() - rep.log_f.back();
  return rep;
}

PrefactorReport oz_prefactor_diagnostic(const CountTable& all, double beta, int n_max, double tau_shift) {
  require_class(all, WalkClass::All, "oz_prefactor_diagnostic");
  PrefactorReport rep;
  rep.tau_hat = mass_estimate(all, beta, n_max).estimate + tau_shift;
  const double half = 0.5 * (all.dim() - 1);
  for (int n = 1; n <= n_max; ++n) {
    Point x(all.dim());
    x[0] = n;
    const double g = evaluate_weight(all, beta, x);
    if (!(g > 0.0)) fail(ErrorKind::Validation, "zero-weight endpoint at n = " + std::to_string(n));
    rep.r.push_back(g * std::pow(static_cast<double>(n), half) * std::exp(n * rep.tau_hat));
  }
  for (std::size_t i = 1; i < rep.r.size(); ++i) rep.ratios.push_back(rep.r[i] / rep.r[i - 1]);
  return rep;
}

namespace {

struct Piece {
  FrameSplit x;
  std::vector<Count> profile;
  int min_length = 0;
};

class CompositionSearch {
 public:
  CompositionSearch(const CountTable& irr, int n, double beta, LengthTruncation mode)
      : n_(n), beta_(beta), cutoff_(irr.cutoff()), mode_(mode) {
    irr.for_each([&](const Point& x, std::span<const Count> prof) {
      if (x[0] < 1 || x[0] > n) return;
      Piece p{split_frame(x), std::vector<Count>(prof.begin(), prof.end()), 0};
      while (p.profile[static_cast<std::size_t>(p.min_length)] == 0) ++p.min_length;
      pieces_.push_back(std::move(p));
    });
    std::sort(pieces_.begin(), pieces_.end(), [](const Piece& a, const Piece& b) { return a.x < b.x; });
  }

  // Calls emit(increments, weight) for every composition of (n, 0~).
  template <typename Emit>
  void run(Emit&& emit) {
    std::vector<Count> poly(static_cast<std::size_t>(cutoff_ + 1), 0);
    poly[0] = 1;
    std::vector<FrameSplit> incs;
    Point ysum(pieces_.empty() ? 1 : pieces_.front().x.y.dim());
    recurse(0, ysum, 0, poly, 1.0L, incs, emit);
  }

 private:
  template <typename Emit>
  void recurse(Coord tsum, const Point& ysum, int min_total, const std::vector<Count>& poly, long double product,
               std::vector<FrameSplit>& incs, Emit& emit) {
    for (const Piece& piece : pieces_) {
      const Coord t = tsum + piece.x.t;
      if (t > n_) break;
      const int min_next = min_total + piece.min_length;
      if (mode_ == LengthTruncation::Total && min_next > cutoff_) continue;
      const Point y = ysum + piece.x.y;
      if (t == n_ && !y.is_zero()) continue;

      std::vector<Count> next_poly;
      long double next_product = product;
      if (mode_ == LengthTruncation::Total) {
        next_poly.assign(poly.size(), 0);
        for (std::size_t a = 0; a < poly.size(); ++a) {
          if (poly[a] == 0) continue;
          for (std::size_t b = 0; a + b < poly.size(); ++b) next_poly[a + b] += poly[a] * piece.profile[b];
        }
      } else {
        next_product *= profile_weight(piece.profile, beta_, cutoff_);
      }

      incs.push_back(piece.x);
      if (t == n_) {
        emit(incs, mode_ == LengthTruncation::Total ? profile_weight(next_poly, beta_, cutoff_) : next_product);
      } else {
        recurse(t, y, min_next, next_poly, next_product, incs, emit);
      }
      incs.pop_back();
    }
  }

  int n_;
  double beta_;
  int cutoff_;
  LengthTruncation mode_;
  std::vector<Piece> pieces_;
};

}  // namespace

SkeletonLaw product_skeleton_law(const CountTable& irr, int n, double beta, LengthTruncation mode) {
  require_class(irr, WalkClass::IrreducibleBridge, "product_skeleton_law");
  if (n < 1) fail(ErrorKind::Validation, "target distance n must be at least 1");
  CompositionSearch search(irr, n, beta, mode);
  std::map<Skeleton, long double> weights;
  long double z = 0.0L;
  search.run([&](const std::vector<FrameSplit>& incs, long double w) {
    if (w <= 0.0L) return;
    weights.emplace(Skeleton{incs}, w);
    z += w;
  });
  if (!(z > 0.0L)) fail(ErrorKind::Validation, "no composition of (n, 0) by irreducible steps in the table");
  SkeletonLaw law;
  for (const auto& [sk, w] : weights) law.emplace(sk, static_cast<double>(w / z));
  return law;
}

}  // namespace saw
