#include <doctest.h>

#include <cmath>

#include "saw/enumerate.hpp"
#include "saw/error.hpp"
#include "saw/io.hpp"
#include "saw/renewal.hpp"

using namespace saw;

namespace {

CountTable single_step_table(int d) {
  CountTable t(d, 1, WalkClass::IrreducibleBridge);
  t.add(Point(d), 0, 1);
  Point x(d);
  x[0] = 1;
  t.add(x, 1, 1);
  return t;
}

const CountTable& irr12() {
  static const CountTable t = enumerate_counts(2, 12, WalkClass::IrreducibleBridge);
  return t;
}

}  // namespace

TEST_CASE("calibration on a single-step table") {
  for (double beta : {0.5, 1.2, 3.0}) {
    const double m = calibrate_mass(single_step_table(2), beta);
    CHECK(m == doctest::Approx(-beta).epsilon(1e-12));
    const StepLaw law = build_step_law(single_step_table(2), beta, m);
    REQUIRE(law.steps.size() == 1);
    CHECK(law.steps[0].step == FrameSplit{1, Point{0}});
    CHECK(law.steps[0].p == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("calibration root at beta 1.2, L 12") {
  const double beta = 1.2;
  const double m = calibrate_mass(irr12(), beta);
  CHECK(m < 0.0);

  // Independent re-summation of Phi at the root.
  long double phi = 0.0L;
  irr12().for_each([&](const Point& x, std::span<const Count> prof) {
    if (x[0] < 1) return;
    for (std::size_t n = 0; n < prof.size(); ++n) {
      phi += static_cast<long double>(prof[n]) * std::exp(-1.2L * n - static_cast<long double>(m) * x[0]);
    }
  });
  CHECK(std::abs(static_cast<double>(phi) - 1.0) <= 1e-12);
  CHECK(tilted_mass(irr12(), beta, m - 0.1) > 1.0);
  CHECK(tilted_mass(irr12(), beta, m + 0.1) < 1.0);
}

// Phi grows pointwise with L and decreases in m, so the root moves up.
TEST_CASE("calibrated tilt is nondecreasing in the cutoff") {
  double prev = -1e300;
  for (int cutoff = 4; cutoff <= 12; cutoff += 2) {
    const double m = calibrate_mass(enumerate_counts(2, cutoff, WalkClass::IrreducibleBridge), 1.2);
    CHECK(m >= prev);
    prev = m;
  }
}

TEST_CASE("calibration errors") {
  CountTable empty(2, 3, WalkClass::IrreducibleBridge);
  empty.add(Point{0, 0}, 0, 1);
  CHECK_THROWS_AS(calibrate_mass(empty, 1.2), Error);
  CHECK_THROWS_AS(calibrate_mass(enumerate_counts(2, 3, WalkClass::Bridge), 1.2), Error);
  CHECK_THROWS_AS(build_step_law(irr12(), 1.2, 0.0), Error);
}

TEST_CASE("step law invariants at beta 1.2, L 12") {
  const double beta = 1.2;
  const StepLaw law = build_step_law(irr12(), beta, calibrate_mass(irr12(), beta));
  CHECK(std::abs(law.total() - 1.0) <= 1e-10);
  CHECK(law.cutoff == 12);
  CHECK(law.tail_mass_proxy > 0.0);

  std::size_t support = 0;
  irr12().for_each([&](const Point& x, std::span<const Count>) {
    if (x[0] >= 1) ++support;
  });
  CHECK(law.steps.size() == support);
  for (std::size_t i = 0; i < law.steps.size(); ++i) {
    const auto& e = law.steps[i];
    CHECK(e.step.t >= 1);
    CHECK(e.p > 0.0);
    if (i > 0) CHECK(law.steps[i - 1].step < e.step);
    for (const Point& y : transverse_orbit(e.step.y)) CHECK(law.probability({e.step.t, y}) == e.p);
  }
  CHECK(law.probability({1, Point{0}}) > law.probability({1, Point{3}}));
  CHECK(law.probability({1, Point{0}}) > law.probability({1, Point{5}}));
  CHECK(law.probability({100, Point{0}}) == 0.0);

  double prev = 2.0;
  for (double r = 0.0; r <= 14.0; r += 1.0) {
    const double tail = law.tail_mass(r);
    CHECK(tail <= prev);
    prev = tail;
  }
  CHECK(law.tail_mass(100.0) == 0.0);
  CHECK(law.mean_t() >= 1.0);
  CHECK(law.transverse_variance() > 0.0);
}

TEST_CASE("step law truncation") {
  const StepLaw law = build_step_law(irr12(), 1.2, calibrate_mass(irr12(), 1.2));
  const StepLaw cut = law.truncated_to(3);
  CHECK(cut.max_t() == 3);
  CHECK(std::abs(cut.total() - 1.0) <= 1e-12);
  const double ratio = cut.probability({1, Point{0}}) / law.probability({1, Point{0}});
  for (const auto& e : cut.steps) CHECK(e.p / law.probability(e.step) == doctest::Approx(ratio));
  CHECK_THROWS_AS(law.truncated_to(0), Error);
}

TEST_CASE("step law survives a round trip through the count cache") {
  const double beta = 1.2;
  const CountTable restored = io::decode_count_table(io::encode_count_table(irr12()));
  const StepLaw a = build_step_law(irr12(), beta, calibrate_mass(irr12(), beta));
  const StepLaw b = build_step_law(restored, beta, calibrate_mass(restored, beta));
  CHECK(a.m_hat == b.m_hat);
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    CHECK(a.steps[i].step == b.steps[i].step);
    CHECK(a.steps[i].p == b.steps[i].p);
  }
}

TEST_CASE("mass gap diagnostic") {
  const double beta = 1.2;
  // Irreducible bridges of span t >= 2 need at least 3t steps, so n_max = 6
  // needs L = 18.
  const CountTable br = enumerate_counts(2, 18, WalkClass::Bridge);
  const CountTable irr = enumerate_counts(2, 18, WalkClass::IrreducibleBridge);
  const MassGapReport rep = mass_gap_diagnostic(br, irr, beta, 6);
  REQUIRE(rep.log_h.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(std::isfinite(rep.log_h[i]));
    CHECK(std::isfinite(rep.log_f[i]));
    CHECK(rep.log_f[i] <= rep.log_h[i]);
  }
  CHECK(rep.log_h[0] >= -beta);
  CHECK(rep.gap > 0.0);
  CHECK_THROWS_AS(mass_gap_diagnostic(enumerate_counts(2, 14, WalkClass::Bridge),
                                      enumerate_counts(2, 14, WalkClass::IrreducibleBridge), beta, 6),
                  Error);
  CHECK_THROWS_AS(mass_gap_diagnostic(br, irr, beta, 19), Error);
  CHECK_THROWS_AS(mass_gap_diagnostic(br, enumerate_counts(2, 10, WalkClass::IrreducibleBridge), beta, 4), Error);
}

TEST_CASE("prefactor diagnostic") {
  const CountTable all = enumerate_counts(2, 16, WalkClass::All);
  const PrefactorReport rep = oz_prefactor_diagnostic(all, 1.2, 6);
  REQUIRE(rep.r.size() == 6);
  REQUIRE(rep.ratios.size() == 5);
  for (double r : rep.r) CHECK(r > 0.0);
  CHECK(rep.tau_hat == mass_estimate(all, 1.2, 6).estimate);

  const PrefactorReport shifted = oz_prefactor_diagnostic(all, 1.2, 6, 0.1);
  for (std::size_t i = 0; i < rep.ratios.size(); ++i) {
    CHECK(shifted.ratios[i] == doctest::Approx(rep.ratios[i] * std::exp(0.1)));
  }
  CHECK_THROWS_AS(oz_prefactor_diagnostic(all, 1.2, 17), Error);
}

TEST_CASE("product law with total length truncation equals the exhaustive law") {
  for (auto [n, cutoff] : {std::pair{1, 5}, std::pair{3, 9}, std::pair{4, 10}}) {
    CAPTURE(n);
    const CountTable irr = enumerate_counts(2, cutoff, WalkClass::IrreducibleBridge);
    const SkeletonLaw product = product_skeleton_law(irr, n, 1.2, LengthTruncation::Total);
    const SkeletonLaw exact = exact_conditioned_skeleton_law(2, n, 1.2, cutoff);
    CHECK(product.size() == exact.size());
    CHECK(max_abs_difference(product, exact) <= 1e-12);
  }
  const CountTable irr3 = enumerate_counts(3, 6, WalkClass::IrreducibleBridge);
  CHECK(max_abs_difference(product_skeleton_law(irr3, 2, 1.2, LengthTruncation::Total),
                           exact_conditioned_skeleton_law(3, 2, 1.2, 6)) <= 1e-12);
}

TEST_CASE("product law with per-piece truncation") {
  const CountTable irr = enumerate_counts(2, 8, WalkClass::IrreducibleBridge);
  const SkeletonLaw law = product_skeleton_law(irr, 3, 1.2, LengthTruncation::PerPiece);
  double total = 0.0;
  for (const auto& [sk, p] : law) {
    CHECK(sk.valid_for(3));
    total += p;
  }
  CHECK(std::abs(total - 1.0) <= 1e-12);
  // Per-piece truncation admits more skeletons than the total-length one.
  CHECK(law.size() >= product_skeleton_law(irr, 3, 1.2, LengthTruncation::Total).size());
  const SkeletonLaw point = product_skeleton_law(irr, 1, 1.2, LengthTruncation::PerPiece);
  REQUIRE(point.size() == 1);
  CHECK(point.begin()->second == 1.0);
}
