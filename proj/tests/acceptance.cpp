// End-to-end acceptance run: one [PASS]/[FAIL] line per criterion.
// Exit status is nonzero if any criterion fails.

#include <fmt/format.h>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "identities.hpp"
#include "naive_oracle.hpp"
#include "saw/enumerate.hpp"
#include "saw/error.hpp"
#include "saw/io.hpp"
#include "saw/renewal.hpp"
#include "saw/rng.hpp"
#include "saw/sampler.hpp"
#include "saw/stats.hpp"

using namespace saw;

namespace {

constexpr double kBeta = 1.2;
constexpr std::uint64_t kSeed = 1;
constexpr std::size_t kReplicas = 20000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double time_limit_s;  // 0: none
  std::function<Outcome()> body;
};

// Step law for d = 2 at the given cutoff, shared across criteria.
const StepLaw& step_law(int cutoff) {
  static std::map<int, StepLaw> cache;
  auto it = cache.find(cutoff);
  if (it == cache.end()) {
    const CountTable irr = enumerate_counts(2, cutoff, WalkClass::IrreducibleBridge);
    it = cache.emplace(cutoff, build_step_law(irr, kBeta, calibrate_mass(irr, kBeta))).first;
  }
  return it->second;
}

// Skeleton ensembles keyed by n, drawn as the CLI does: seed stream_key(1, n).
const std::vector<Skeleton>& ensemble(Coord n) {
  static std::map<Coord, std::vector<Skeleton>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    const StepLaw& law = step_law(12);
    const PartitionTable table = dp_partition(law, n, default_box_radius(law, n));
    if (!(table.leakage < 1e-6)) fail(ErrorKind::Threshold, fmt::format("leakage {:.3g} at n = {}", table.leakage, n));
    const SkeletonSampler sampler(law, table);
    it = cache.emplace(n, sample_ensemble(sampler, stream_key(kSeed, static_cast<std::uint64_t>(n)), kReplicas)).first;
  }
  return it->second;
}

struct BridgeSummary {
  double sigma2_hat;
  double rel_rms;
  Ensemble ens;
};

const BridgeSummary& bridge_summary(Coord n) {
  static std::map<Coord, BridgeSummary> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    Ensemble ens = make_ensemble(ensemble(n), n, default_grid());
    const BridgeFit fit = fit_bridge_covariance(empirical_covariance(ens), ens.grid);
    it = cache.emplace(n, BridgeSummary{fit.sigma2_hat, fit.rel_rms, std::move(ens)}).first;
  }
  return it->second;
}

Outcome saw_counts() {
  static const std::vector<std::uint64_t> expected{4, 12, 36, 100, 284, 780, 2172, 5916, 16268, 44100};
  const Totals fast = total_counts(enumerate_counts(2, 10, WalkClass::All));
  const std::vector<Count> naive_totals = naive::totals(2, 10);
  int bad = 0;
  for (std::size_t n = 1; n <= 10; ++n) {
    if (fast.c[n] != expected[n - 1] || naive_totals[n] != expected[n - 1]) ++bad;
  }
  return {bad == 0, fmt::format("c_1..c_10 match in {}/10 (enumerator and naive oracle), c_10 = {}", 10 - bad,
                                to_string(fast.c[10]))};
}

Outcome subadditivity() {
  const Totals t = total_counts(enumerate_counts(2, 10, WalkClass::All));
  int pairs = 0, bad = 0;
  for (std::size_t m = 1; m <= 10; ++m) {
    for (std::size_t n = 1; m + n <= 10; ++n) {
      ++pairs;
      if (t.c[m + n] > t.c[m] * t.c[n]) ++bad;
    }
  }
  return {bad == 0, fmt::format("{} pairs checked, {} violations", pairs, bad)};
}

Outcome oz_identity() {
  const CountTable bridges = enumerate_counts(2, 12, WalkClass::Bridge);
  const CountTable irr = enumerate_counts(2, 12, WalkClass::IrreducibleBridge);
  const auto r = check::first_break_convolution(bridges, irr);
  return {r.mismatches == 0 && r.entries_checked > 0,
          fmt::format("{} (endpoint, N) entries, {} mismatches", r.entries_checked, r.mismatches)};
}

Outcome q_normalization() {
  const CountTable irr = enumerate_counts(2, 12, WalkClass::IrreducibleBridge);
  const double m_hat = calibrate_mass(irr, kBeta);
  const double phi_err = std::abs(tilted_mass(irr, kBeta, m_hat) - 1.0);
  const double err = std::abs(build_step_law(irr, kBeta, m_hat).total() - 1.0);
  return {err <= 1e-10 && phi_err <= 1e-12,
          fmt::format("m_hat = {:.12g}, |Phi - 1| = {:.2e}, |sum Q - 1| = {:.2e}", m_hat, phi_err, err)};
}

Outcome skeleton_oracle() {
  const CountTable irr = enumerate_counts(2, 13, WalkClass::IrreducibleBridge);
  const SkeletonLaw exact = exact_conditioned_skeleton_law(2, 5, kBeta, 13);
  const SkeletonLaw product = product_skeleton_law(irr, 5, kBeta, LengthTruncation::Total);
  const double diff = max_abs_difference(exact, product);
  return {diff <= 1e-12, fmt::format("{} skeletons, max |exact - product| = {:.3g}", exact.size(), diff)};
}

Outcome sampler_correctness() {
  constexpr Coord n = 5;
  constexpr std::size_t reps = 1000000;
  const CountTable irr = enumerate_counts(2, 13, WalkClass::IrreducibleBridge);
  const StepLaw law = build_step_law(irr, kBeta, calibrate_mass(irr, kBeta));
  // Every composition of n fits in this box, so the sampler targets the
  // untruncated renewal law of the enumeration-backed steps.
  const SkeletonSampler sampler(law, dp_partition(law, n, n * law.transverse_reach()));
  const SkeletonLaw target = product_skeleton_law(irr, n, kBeta, LengthTruncation::PerPiece);
  std::map<Skeleton, std::size_t> counts;
  for (const auto& sk : sample_ensemble(sampler, stream_key(kSeed, n), reps)) ++counts[sk];

  std::size_t checked = 0, outside = 0;
  double worst = 0.0;
  for (const auto& [sk, p] : target) {
    if (p < 1e-4) continue;
    ++checked;
    const auto it = counts.find(sk);
    const double freq = it == counts.end() ? 0.0 : static_cast<double>(it->second) / reps;
    const double z = std::abs(freq - p) / std::sqrt(p * (1.0 - p) / reps);
    worst = std::max(worst, z);
    if (z > 3.0) ++outside;
  }
  const double expected = static_cast<double>(checked) * std::erfc(3.0 / std::sqrt(2.0));
  return {outside == 0,
          fmt::format("{} of {} skeletons with p >= 1e-4 outside 3 SE (largest |z| = {:.2f}; {:.2f} expected "
                      "outside by chance)",
                      outside, checked, worst, expected)};
}

Outcome bridge_covariance() {
  const BridgeSummary& a = bridge_summary(200);
  const BridgeSummary& b = bridge_summary(400);
  const double drift = std::abs(a.sigma2_hat - b.sigma2_hat) / b.sigma2_hat;
  return {b.rel_rms <= 0.10 && drift <= 0.05,
          fmt::format("n = 400: sigma2_hat = {:.5f}, rel_rms = {:.4f}; n = 200: sigma2_hat = {:.5f}, relative "
                      "difference {:.4f}",
                      b.sigma2_hat, b.rel_rms, a.sigma2_hat, drift)};
}

Outcome gaussian_marginal() {
  const BridgeSummary& s = bridge_summary(400);
  const KsResult r = ks_marginal(s.ens, 0.5, s.sigma2_hat);
  const KsResult j = ks_marginal_jittered(s.ens, 0.5, s.sigma2_hat, stream_key(kSeed, 0x4a49545445520000ull + 400));
  const double atom = 1.0 / std::sqrt(400.0);
  return {r.p_value > 0.01,
          fmt::format("KS D = {:.4f}, p = {:.3g}; values sit on a lattice of spacing {:.3f}; jittered over the "
                      "lattice cell: D = {:.4f}, p = {:.3f}",
                      r.statistic, r.p_value, atom, j.statistic, j.p_value)};
}

Outcome gap_trend() {
  std::vector<double> frac;
  std::string detail;
  for (Coord n : {64, 128, 256, 512}) {
    frac.push_back(gap_statistic(ensemble(n), n));
    detail += fmt::format("{}n = {}: {:.4f}", detail.empty() ? "" : ", ", n, frac.back());
  }
  bool monotone = true;
  for (std::size_t i = 1; i < frac.size(); ++i) monotone = monotone && frac[i] <= frac[i - 1];
  return {monotone && frac.back() < 0.05, detail};
}

Outcome pinning_and_determinism() {
  std::size_t checked = 0, unpinned = 0;
  for (Coord n : {64, 128, 200, 256, 400, 512}) {
    for (const auto& sk : ensemble(n)) {
      ++checked;
      if (!sk.valid_for(n)) ++unpinned;
    }
  }
  constexpr Coord n = 200;
  const StepLaw& law = step_law(12);
  std::vector<std::uint64_t> hashes;
  for (int threads : {1, 4, 8}) {
    omp_set_num_threads(threads);
    const SkeletonSampler sampler(law, dp_partition(law, n, default_box_radius(law, n)));
    const auto sks = sample_ensemble(sampler, stream_key(kSeed, n), kReplicas);
    const std::string bytes = io::skeletons_csv(sks) + io::process_csv(make_ensemble(sks, n, default_grid()));
    hashes.push_back(io::content_hash(bytes));
  }
  const bool same = hashes[0] == hashes[1] && hashes[1] == hashes[2];
  return {unpinned == 0 && same,
          fmt::format("{} skeletons, {} not ending at (n, 0); CSV hash at 1/4/8 threads: {} {} {}", checked, unpinned,
                      io::hex64(hashes[0]), io::hex64(hashes[1]), io::hex64(hashes[2]))};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "SAW counts c_1..c_10 (d = 2)", 60.0, saw_counts},
      {2, "subadditivity c_{m+n} <= c_m c_n", 0.0, subadditivity},
      {3, "first-break convolution identity, d = 2, L = 12", 300.0, oz_identity},
      {4, "step law normalization, d = 2, beta = 1.2, L = 12", 0.0, q_normalization},
      {5, "exhaustive vs product skeleton law, n = 5, L = 13", 0.0, skeleton_oracle},
      {6, "backward sampler frequencies, n = 5, 10^6 replicas", 0.0, sampler_correctness},
      {7, "Brownian-bridge covariance, n = 400 (and 200), 20000 replicas", 600.0, bridge_covariance},
      {8, "Gaussian marginal at t = 0.5, KS p > 0.01", 0.0, gaussian_marginal},
      {9, "gap fraction non-increasing, < 0.05 at n = 512", 0.0, gap_trend},
      {10, "endpoint pinning and thread-count determinism", 0.0, pinning_and_determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.body();
    } catch (const std::exception& e) {
      out = {false, fmt::format("error: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0.0 && secs > c.time_limit_s) {
      out.pass = false;
      out.detail += fmt::format("; exceeded {:.0f} s", c.time_limit_s);
    }
    if (!out.pass) ++failed;
    fmt::print("[{}] {:>2}. {}: {} ({:.1f} s)\n", out.pass ? "PASS" : "FAIL", c.id, c.title, out.detail, secs);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
