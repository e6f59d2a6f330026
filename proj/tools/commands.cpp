#include <fmt/format.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <map>

#include <CLI11.hpp>

#include "experiment.hpp"
#include "saw/enumerate.hpp"
#include "saw/error.hpp"
#include "saw/io.hpp"
#include "saw/renewal.hpp"
#include "saw/rng.hpp"
#include "saw/sampler.hpp"
#include "saw/stats.hpp"

namespace saw::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kMaxLeakage = 1e-6;

struct Run {
  ExperimentConfig cfg;
  std::string command;
  bool check = false;

  std::vector<double> grid() const { return cfg.grid.empty() ? default_grid() : cfg.grid; }
};

void note(const std::string& msg) { fmt::print(stderr, "{}\n", msg); }

// Writes an output file and its <name>.meta.json sidecar.
void emit_file(const Run& run, const std::string& name, const std::string& bytes) {
  const fs::path path = run.cfg.out / name;
  io::write_file(path, bytes);
  const json meta = {{"command", run.command},
                     {"config", to_json(run.cfg)},
                     {"file", name},
                     {"bytes", bytes.size()},
                     {"fnv1a64", io::hex64(io::content_hash(bytes))}};
  io::write_file(run.cfg.out / (name + ".meta.json"), meta.dump(2) + "\n");
  note("wrote " + path.string());
}

void emit_json(const Run& run, const std::string& name, json body) {
  body["command"] = run.command;
  body["config"] = to_json(run.cfg);
  emit_file(run, name, body.dump(2) + "\n");
}

std::string read_input(const Run& run, const std::string& name) {
  const fs::path path = run.cfg.out / name;
  if (!fs::exists(path)) fail(ErrorKind::Validation, "missing input " + path.string());
  return io::read_file(path);
}

CountTable load_table(const Run& run, WalkClass cls) {
  CountTable t = io::decode_count_table(read_input(run, fmt::format("counts_{}.bin", to_string(cls))));
  if (t.dim() != run.cfg.d || t.cutoff() != run.cfg.L || t.walk_class() != cls) {
    fail(ErrorKind::Validation, fmt::format("count cache for {} does not match d = {}, L = {}", to_string(cls),
                                            run.cfg.d, run.cfg.L));
  }
  return t;
}

StepLaw load_step_law(const Run& run) {
  json j;
  try {
    j = json::parse(read_input(run, "steplaw.json"));
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Validation, std::string("steplaw.json: ") + e.what());
  }
  StepLaw law = io::step_law_from_json(j);
  if (law.dim != run.cfg.d || law.beta != run.cfg.beta || law.cutoff != run.cfg.L) {
    fail(ErrorKind::Validation, "steplaw.json was calibrated for a different d, beta or L");
  }
  return law;
}

std::string skeleton_key(const Skeleton& sk) {
  std::string s;
  for (const auto& x : sk.increments) {
    if (!s.empty()) s += '|';
    s += fmt::format("{}", x.t);
    for (int i = 0; i < x.y.dim(); ++i) s += fmt::format(":{}", x.y[i]);
  }
  return s;
}


int cmd_enumerate(const Run& run) {
  const auto& cfg = run.cfg;
  for (WalkClass cls : {WalkClass::All, WalkClass::Bridge, WalkClass::IrreducibleBridge}) {
    note(fmt::format("enumerating {} walks, d = {}, L = {}", to_string(cls), cfg.d, cfg.L));
    const CountTable table = enumerate_counts(cfg.d, cfg.L, cls);
    const std::string stem = fmt::format("counts_{}", to_string(cls));
    emit_file(run, stem + ".bin", io::encode_count_table(table));
    emit_file(run, stem + ".csv", io::count_table_csv(table));
    if (cls == WalkClass::All) {
      const Totals tot = total_counts(table);
      std::string csv = "N,c_N,c_N_root\n";
      for (std::size_t n = 0; n < tot.c.size(); ++n) {
        csv += fmt::format("{},{},{}\n", n, to_string(tot.c[n]), io::format_double(tot.root[n]));
      }
      emit_file(run, "totals.csv", csv);
    }
  }
  return 0;
}

int cmd_calibrate(const Run& run) {
  const auto& cfg = run.cfg;
  const CountTable irr = load_table(run, WalkClass::IrreducibleBridge);
  const double m_hat = calibrate_mass(irr, cfg.beta);
  const StepLaw law = build_step_law(irr, cfg.beta, m_hat);
  note(fmt::format("m_hat = {:.15g}, {} steps", m_hat, law.steps.size()));

  json diag = {{"sum_p", law.total()},
               {"normalization_error", std::abs(law.total() - 1.0)},
               {"phi_at_m_hat", tilted_mass(irr, cfg.beta, m_hat)},
               {"tail_mass_proxy", law.tail_mass_proxy},
               {"mean_t", law.mean_t()},
               {"transverse_variance", law.transverse_variance()},
               {"transverse_reach", law.transverse_reach()},
               {"max_t", law.max_t()},
               {"variance_candidate", renewal_variance_candidate(law)}};

  // Irreducible bridges of span t >= 2 need 3t steps, so F_n is only
  // populated up to n = L / 3.
  const int gap_n = cfg.L / 3;
  if (gap_n >= 1 && fs::exists(cfg.out / "counts_bridge.bin")) {
    const MassGapReport gap = mass_gap_diagnostic(load_table(run, WalkClass::Bridge), irr, cfg.beta, gap_n);
    diag["mass_gap"] = {{"n_max", gap_n}, {"log_h", gap.log_h}, {"log_f", gap.log_f}, {"gap", gap.gap}};
  }
  const int two_point_n = cfg.L / 2;
  if (two_point_n >= 1 && fs::exists(cfg.out / "counts_all.bin")) {
    const CountTable all = load_table(run, WalkClass::All);
    const MassEstimate mass = mass_estimate(all, cfg.beta, two_point_n);
    const PrefactorReport oz = oz_prefactor_diagnostic(all, cfg.beta, two_point_n);
    diag["two_point"] = {{"n_max", two_point_n},
                         {"bubble", bubble_diagram(all, cfg.beta)},
                         {"mass_sequence", mass.sequence},
                         {"mass_estimate", mass.estimate},
                         {"prefactor", oz.r},
                         {"prefactor_ratios", oz.ratios}};
  }

  json body = io::step_law_to_json(law);
  body["diagnostics"] = diag;
  emit_json(run, "steplaw.json", body);
  return 0;
}

int cmd_sample(const Run& run) {
  const auto& cfg = run.cfg;
  const StepLaw law = load_step_law(run);
  json runs = json::array();
  for (int n : cfg.n) {
    const Coord radius = cfg.box_radius > 0 ? cfg.box_radius : default_box_radius(law, n);
    const PartitionTable table = dp_partition(law, n, radius);
    note(fmt::format("n = {}: box radius {}, leakage {:.3g}", n, radius, table.leakage));
    if (!(table.leakage < kMaxLeakage)) {
      fail(ErrorKind::Threshold, fmt::format("leakage {:.3g} at n = {} exceeds {:.0e}; raise --box-radius",
                                             table.leakage, n, kMaxLeakage));
    }
    const SkeletonSampler sampler(law, table);
    const std::uint64_t campaign = stream_key(cfg.seed, static_cast<std::uint64_t>(n));
    const std::vector<Skeleton> skeletons = sample_ensemble(sampler, campaign, cfg.replicas);
    for (const auto& sk : skeletons) {
      if (!sk.valid_for(n)) fail(ErrorKind::Threshold, fmt::format("sampled skeleton does not end at ({}, 0)", n));
    }
    emit_file(run, fmt::format("skeletons_n{}.csv", n), io::skeletons_csv(skeletons));
    emit_file(run, fmt::format("process_n{}.csv", n), io::process_csv(make_ensemble(skeletons, n, run.grid())));
    runs.push_back({{"n", n},
                    {"box_radius", radius},
                    {"leakage", table.leakage},
                    {"log_G", table.log_g(n, Point(cfg.d - 1))},
                    {"replicas", skeletons.size()},
                    {"campaign_seed", io::hex64(campaign)}});
  }
  emit_json(run, "sample_summary.json", {{"runs", runs}});
  return 0;
}

int cmd_analyze(const Run& run) {
  const auto& cfg = run.cfg;
  std::vector<int> ns = cfg.n;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  const std::vector<double> grid = run.grid();

  json per_n = json::array();
  json gap = json::array();
  std::string fit_csv = "n,sigma2_hat,rel_rms\n";
  std::string ks_csv = "n,t,statistic,p_value\n";
  std::string gap_csv = "n,threshold,fraction\n";
  std::vector<double> sigma2;
  std::vector<double> gap_fraction;
  bool rel_rms_ok = true;
  bool ks_ok = true;

  for (int n : ns) {
    const std::vector<Skeleton> skeletons = io::parse_skeletons_csv(read_input(run, fmt::format("skeletons_n{}.csv", n)));
    const Ensemble ens = io::parse_process_csv(read_input(run, fmt::format("process_n{}.csv", n)), n);
    if (skeletons.size() != cfg.replicas || ens.replicas != cfg.replicas) {
      fail(ErrorKind::Validation, fmt::format("ensemble for n = {} has {} replicas, config says {}", n,
                                              skeletons.size(), cfg.replicas));
    }
    if (ens.grid.size() != grid.size()) fail(ErrorKind::Validation, "process grid differs from the config grid");
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (std::abs(ens.grid[g] - grid[g]) > 1e-12) fail(ErrorKind::Validation, "process grid differs from the config grid");
    }
    for (const auto& sk : skeletons) {
      if (!sk.valid_for(n)) fail(ErrorKind::Validation, fmt::format("skeleton does not end at ({}, 0)", n));
    }

    const Matrix cov = empirical_covariance(ens);
    const BridgeFit fit = fit_bridge_covariance(cov, grid);
    const MeanPath mean = empirical_mean(ens);
    double worst_mean_z = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (mean.standard_error[g] > 0.0) worst_mean_z = std::max(worst_mean_z, std::abs(mean.mean[g]) / mean.standard_error[g]);
    }
    json ks = json::array();
    double ks_mid_p = 1.0;
    if (ens.replicas >= 100) {
      for (double t : grid) {
        const KsResult r = ks_marginal(ens, t, fit.sigma2_hat);
        ks.push_back({{"t", t}, {"stat", r.statistic}, {"p", r.p_value}});
        ks_csv += fmt::format("{},{},{},{}\n", n, io::format_double(t), io::format_double(r.statistic),
                              io::format_double(r.p_value));
        if (std::abs(t - 0.5) < 1e-12) ks_mid_p = r.p_value;
      }
    }
    json ks_jittered = nullptr;
    if (ens.replicas >= 100 && std::any_of(grid.begin(), grid.end(), [](double t) { return std::abs(t - 0.5) < 1e-12; })) {
      const KsResult r = ks_marginal_jittered(ens, 0.5, fit.sigma2_hat, stream_key(cfg.seed, 0x4a49545445520000ull + n));
      ks_jittered = {{"t", 0.5}, {"stat", r.statistic}, {"p", r.p_value}};
    }
    const double frac = gap_statistic(skeletons, n);

    std::string cov_csv = "i,j,t_i,t_j,empirical,model\n";
    for (const auto& r : fit.residuals) {
      cov_csv += fmt::format("{},{},{},{},{},{}\n", r.i, r.j, io::format_double(grid[r.i]), io::format_double(grid[r.j]),
                             io::format_double(r.empirical), io::format_double(r.model));
    }
    emit_file(run, fmt::format("covariance_n{}.csv", n), cov_csv);
    fit_csv += fmt::format("{},{},{}\n", n, io::format_double(fit.sigma2_hat), io::format_double(fit.rel_rms));
    gap_csv += fmt::format("{},{},{}\n", n, io::format_double(std::cbrt(static_cast<double>(n))), io::format_double(frac));

    rel_rms_ok = rel_rms_ok && fit.rel_rms <= 0.10;
    ks_ok = ks_ok && ks_mid_p > 0.01;
    sigma2.push_back(fit.sigma2_hat);
    gap_fraction.push_back(frac);
    gap.push_back({{"n", n}, {"fraction", frac}});
    per_n.push_back({{"n", n},
                     {"replicas", ens.replicas},
                     {"sigma2_hat", fit.sigma2_hat},
                     {"rel_rms", fit.rel_rms},
                     {"ks", ks},
                     {"ks_jittered", ks_jittered},
                     {"gap_fraction", frac},
                     {"max_mean_z", worst_mean_z}});
    note(fmt::format("n = {}: sigma2_hat {:.6g}, rel_rms {:.4g}, gap fraction {:.4g}", n, fit.sigma2_hat, fit.rel_rms, frac));
  }

  bool gap_ok = true;
  for (std::size_t i = 1; i < gap_fraction.size(); ++i) gap_ok = gap_ok && gap_fraction[i] <= gap_fraction[i - 1];
  double sigma2_drift = 0.0;
  if (sigma2.size() >= 2) {
    const double a = sigma2[sigma2.size() - 2];
    const double b = sigma2.back();
    sigma2_drift = std::abs(a - b) / b;
  }

  json shrink = json::array();
  std::string shrink_csv = "n,mean,max\n";
  for (int m : cfg.shrink_n) {
    if (m > cfg.L) {
      note(fmt::format("skipping walk-level shrinking at n = {} (needs L >= n)", m));
      continue;
    }
    const ExhaustiveBridgeSampler sampler(cfg.d, m, cfg.beta, cfg.L);
    const std::uint64_t campaign = stream_key(cfg.seed ^ 0x5348524e4bull, static_cast<std::uint64_t>(m));
    double sum = 0.0, worst = 0.0;
    for (std::size_t r = 0; r < cfg.shrink_replicas; ++r) {
      const SawPath w = sampler.sample(campaign, r);
      const double s = shrinking_statistic(w, skeleton_of(w), m);
      sum += s;
      worst = std::max(worst, s);
    }
    const double mean = cfg.shrink_replicas > 0 ? sum / static_cast<double>(cfg.shrink_replicas) : 0.0;
    shrink.push_back({{"n", m}, {"mean", mean}, {"max", worst}});
    shrink_csv += fmt::format("{},{},{}\n", m, io::format_double(mean), io::format_double(worst));
  }

  json report = {{"per_n", per_n},
                 {"gap", gap},
                 {"gap_non_increasing", gap_ok},
                 {"shrink", shrink},
                 {"sigma2_hat", per_n.back().at("sigma2_hat")},
                 {"rel_rms", per_n.back().at("rel_rms")},
                 {"ks", per_n.back().at("ks")},
                 {"sigma2_relative_drift", sigma2_drift},
                 {"checks",
                  {{"rel_rms_at_most_0.10", rel_rms_ok},
                   {"ks_p_at_half_above_0.01", ks_ok},
                   {"gap_non_increasing", gap_ok},
                   {"sigma2_drift_within_5pct", sigma2_drift <= 0.05}}}};
  if (fs::exists(cfg.out / "steplaw.json")) report["variance_candidate"] = renewal_variance_candidate(load_step_law(run));

  emit_file(run, "fit.csv", fit_csv);
  emit_file(run, "ks.csv", ks_csv);
  emit_file(run, "gap.csv", gap_csv);
  emit_file(run, "shrink.csv", shrink_csv);
  emit_json(run, "report.json", report);

  if (run.check && !(rel_rms_ok && ks_ok && gap_ok && sigma2_drift <= 0.05)) {
    fail(ErrorKind::Threshold, "analysis thresholds violated; see report.json checks");
  }
  return 0;
}

int cmd_oracle(const Run& run) {
  const auto& cfg = run.cfg;
  const int n = cfg.n.front();
  const int max_n = cfg.d == 2 ? 6 : 4;
  if (n > max_n) fail(ErrorKind::Validation, fmt::format("infeasible n: the oracle supports n <= {} in d = {}", max_n, cfg.d));
  if (cfg.L < n) fail(ErrorKind::Validation, "no-bridges-found: L must be at least n");

  const CountTable irr = enumerate_counts(cfg.d, cfg.L, WalkClass::IrreducibleBridge);
  const SkeletonLaw exact = exact_conditioned_skeleton_law(cfg.d, n, cfg.beta, cfg.L);
  const SkeletonLaw product = product_skeleton_law(irr, n, cfg.beta, LengthTruncation::Total);
  const double diff = max_abs_difference(exact, product);

  // Sampler side: the renewal law of the step law built from the same table,
  // in a box wide enough that no composition is cut off.
  const StepLaw law = build_step_law(irr, cfg.beta, calibrate_mass(irr, cfg.beta));
  const Coord radius = std::max<Coord>(1, n * law.transverse_reach());
  const SkeletonSampler sampler(law, dp_partition(law, n, radius));
  const std::vector<Skeleton> draws = sample_ensemble(sampler, stream_key(cfg.seed, static_cast<std::uint64_t>(n)), cfg.replicas);
  const SkeletonLaw renewal = product_skeleton_law(irr, n, cfg.beta, LengthTruncation::PerPiece);
  std::map<Skeleton, std::size_t> counts;
  for (const auto& sk : draws) ++counts[sk];
  SkeletonLaw empirical;
  const double reps = static_cast<double>(cfg.replicas);
  for (const auto& [sk, c] : counts) empirical.emplace(sk, static_cast<double>(c) / reps);

  std::size_t checked = 0, outside = 0;
  for (const auto& [sk, p] : renewal) {
    if (p < 1e-4) continue;
    ++checked;
    const auto it = empirical.find(sk);
    const double emp = it == empirical.end() ? 0.0 : it->second;
    if (std::abs(emp - p) > 3.0 * std::sqrt(p * (1.0 - p) / reps)) ++outside;
  }

  std::string csv = "skeleton,exact,product,renewal,empirical\n";
  auto prob = [](const SkeletonLaw& l, const Skeleton& sk) {
    const auto it = l.find(sk);
    return it == l.end() ? 0.0 : it->second;
  };
  double sum_exact = 0.0, sum_product = 0.0;
  for (const auto& [sk, p] : exact) {
    sum_exact += p;
    sum_product += prob(product, sk);
    csv += fmt::format("{},{},{},{},{}\n", skeleton_key(sk), io::format_double(p), io::format_double(prob(product, sk)),
                       io::format_double(prob(renewal, sk)), io::format_double(prob(empirical, sk)));
  }
  emit_file(run, fmt::format("oracle_laws_n{}.csv", n), csv);

  const double expected_outside = static_cast<double>(checked) * std::erfc(3.0 / std::sqrt(2.0));
  json body = {{"n", n},
               {"L", cfg.L},
               {"skeletons_exact", exact.size()},
               {"skeletons_product", product.size()},
               {"sum_exact", sum_exact},
               {"sum_product", sum_product},
               {"max_abs_difference", diff},
               {"sampler",
                {{"replicas", cfg.replicas},
                 {"box_radius", radius},
                 {"renewal_skeletons", renewal.size()},
                 {"tv_vs_renewal", total_variation(empirical, renewal)},
                 {"tv_vs_exact", total_variation(empirical, exact)},
                 {"checked_p_at_least_1e-4", checked},
                 {"outside_3_se", outside},
                 {"expected_outside_3_se", expected_outside}}},
               {"tv_renewal_vs_exact", total_variation(renewal, exact)}};
  emit_json(run, "oracle.json", body);
  note(fmt::format("n = {}: max |exact - product| = {:.3g}, sampler outside 3 SE: {} of {}", n, diff, outside, checked));

  if (diff > 1e-12) fail(ErrorKind::Threshold, fmt::format("product law differs from the exhaustive law by {:.3g}", diff));
  if (run.check && outside > 0) fail(ErrorKind::Threshold, "sampler frequencies outside 3 standard errors");
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Renewal structure of self-avoiding walks: enumeration, calibration, sampling, analysis"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  ExperimentConfig flags;
  std::string out;
  bool check = false;
  app.add_option("--config", config_path, "JSON config file; flags override its values")->check(CLI::ExistingFile);
  auto* o_d = app.add_option("--d", flags.d, "lattice dimension (2-4)");
  auto* o_beta = app.add_option("--beta", flags.beta, "inverse temperature per step");
  auto* o_L = app.add_option("--L", flags.L, "enumeration length cutoff");
  auto* o_n = app.add_option("--n", flags.n, "target distance(s), comma separated")->delimiter(',');
  auto* o_rep = app.add_option("--replicas", flags.replicas, "replicas per n");
  auto* o_seed = app.add_option("--seed", flags.seed, "campaign seed");
  auto* o_grid = app.add_option("--grid", flags.grid, "time grid inside (0, 1), comma separated")->delimiter(',');
  auto* o_threads = app.add_option("--threads", flags.threads, "OpenMP threads (0: default)");
  auto* o_out = app.add_option("--out", out, "output directory");
  auto* o_box = app.add_option("--box-radius", flags.box_radius, "transverse box radius (0: automatic)");
  app.add_flag("--check", check, "exit with code 3 when analysis or oracle thresholds fail");

  static const char* kCommands[][2] = {
      {"enumerate", "exact walk counts for all walks, bridges and irreducible bridges"},
      {"calibrate", "calibrate the renewal step law from the irreducible counts"},
      {"sample", "sample conditioned skeletons for every n"},
      {"analyze", "Brownian-bridge fit, KS marginals, gap and shrinking statistics"},
      {"oracle", "exhaustive vs product skeleton law, and sampler vs exact law"},
  };
  for (const auto& c : kCommands) app.add_subcommand(c[0], c[1]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Run run;
    run.command = app.get_subcommands().front()->get_name();
    run.check = check;
    if (!config_path.empty()) {
      json j;
      try {
        j = json::parse(io::read_file(config_path));
      } catch (const json::parse_error& e) {
        fail(ErrorKind::Validation, std::string("config: ") + e.what());
      }
      apply_json(run.cfg, j);
    }
    auto& cfg = run.cfg;
    if (o_d->count()) cfg.d = flags.d;
    if (o_beta->count()) cfg.beta = flags.beta;
    if (o_L->count()) cfg.L = flags.L;
    if (o_n->count()) cfg.n = flags.n;
    if (o_rep->count()) cfg.replicas = flags.replicas;
    if (o_seed->count()) cfg.seed = flags.seed;
    if (o_grid->count()) cfg.grid = flags.grid;
    if (o_threads->count()) cfg.threads = flags.threads;
    if (o_out->count()) cfg.out = out;
    if (o_box->count()) cfg.box_radius = flags.box_radius;
    validate(cfg);

    if (cfg.d == 2 && cfg.beta <= 0.98) {
      note(fmt::format("warning: beta = {} is at or below the square-lattice critical value (about log mu = 0.97); "
                       "the renewal picture needs supercritical beta",
                       cfg.beta));
    }
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);

    if (run.command == "enumerate") return cmd_enumerate(run);
    if (run.command == "calibrate") return cmd_calibrate(run);
    if (run.command == "sample") return cmd_sample(run);
    if (run.command == "analyze") return cmd_analyze(run);
    return cmd_oracle(run);
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    switch (e.kind()) {
      case ErrorKind::Validation: return 2;
      case ErrorKind::Threshold: return 3;
      default: return 1;
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}

}  // namespace saw::cli
