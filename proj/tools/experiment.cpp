#include "experiment.hpp"

#include <cmath>

#include "saw/error.hpp"
#include "saw/stats.hpp"

namespace saw::cli {

namespace {

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& dst) {
  if (auto it = j.find(key); it != j.end()) dst = it->get<T>();
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  auto bad = [](const std::string& what) { fail(ErrorKind::Validation, "config: " + what); };
  if (cfg.d < kMinDim || cfg.d > kMaxDim) bad("d must be in [2, 4]");
  if (!(cfg.beta > 0.0) || !std::isfinite(cfg.beta)) bad("beta must be positive and finite");
  if (cfg.L < 0) bad("L must be nonnegative");
  if (cfg.n.empty()) bad("n needs at least one value");
  for (int n : cfg.n) {
    if (n < 1) bad("every n must be at least 1");
  }
  for (int n : cfg.shrink_n) {
    if (n < 1) bad("every shrink_n must be at least 1");
  }
  if (cfg.replicas < 1) bad("replicas must be at least 1");
  if (cfg.box_radius < 0) bad("box_radius must be nonnegative");
  if (cfg.threads < 0) bad("threads must be nonnegative");
  for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
    if (!(cfg.grid[i] > 0.0 && cfg.grid[i] < 1.0)) bad("grid points must lie inside (0, 1)");
    if (i > 0 && !(cfg.grid[i] > cfg.grid[i - 1])) bad("grid must be strictly increasing");
  }
  if (cfg.out.empty()) bad("out must not be empty");
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  return {{"d", cfg.d},
          {"beta", cfg.beta},
          {"L", cfg.L},
          {"n", cfg.n},
          {"replicas", cfg.replicas},
          {"seed", cfg.seed},
          {"grid", cfg.grid.empty() ? default_grid() : cfg.grid},
          {"box_radius", cfg.box_radius},
          {"shrink_n", cfg.shrink_n},
          {"shrink_replicas", cfg.shrink_replicas}};
}

void apply_json(ExperimentConfig& cfg, const nlohmann::json& j) {
  static const char* kKnown[] = {"d",          "beta",    "L",   "n",        "replicas",        "seed",
                                 "grid",       "threads", "out", "shrink_n", "shrink_replicas", "box_radius"};
  if (!j.is_object()) fail(ErrorKind::Validation, "config: top level must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : kKnown) known = known || key == k;
    if (!known) fail(ErrorKind::Validation, "config: unknown key '" + key + "'");
  }
  try {
    read_field(j, "d", cfg.d);
    read_field(j, "beta", cfg.beta);
    read_field(j, "L", cfg.L);
    if (auto it = j.find("n"); it != j.end()) {
      cfg.n = it->is_array() ? it->get<std::vector<int>>() : std::vector<int>{it->get<int>()};
    }
    read_field(j, "replicas", cfg.replicas);
    read_field(j, "seed", cfg.seed);
    read_field(j, "grid", cfg.grid);
    read_field(j, "threads", cfg.threads);
    read_field(j, "box_radius", cfg.box_radius);
    read_field(j, "shrink_n", cfg.shrink_n);
    read_field(j, "shrink_replicas", cfg.shrink_replicas);
    if (auto it = j.find("out"); it != j.end()) cfg.out = it->get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Validation, std::string("config: ") + e.what());
  }
}

}  // namespace saw::cli
