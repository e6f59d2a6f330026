#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "saw/lattice.hpp"

namespace saw::cli {

struct ExperimentConfig {
  int d = 2;
  double beta = 1.2;
  int L = 12;
  std::vector<int> n{400};
  std::size_t replicas = 20000;
  std::uint64_t seed = 1;
  std::vector<double> grid;  // empty: 0.1, ..., 0.9
  Coord box_radius = 0;      // 0: chosen from the step law
  int threads = 0;           // 0: OpenMP default
  std::filesystem::path out = "out";
  // Walk-level shrinking runs (exhaustive sampling, small n only).
  std::vector<int> shrink_n{4, 5, 6};
  std::size_t shrink_replicas = 4000;
};

// Throws Error(Validation) on any out-of-range field.
void validate(const ExperimentConfig& cfg);

// Fields that can change results. threads and out are left out so that
// outputs are byte-identical across thread counts and directories.
nlohmann::json to_json(const ExperimentConfig& cfg);
// Overlays the keys present in j onto cfg; unknown keys are rejected.
void apply_json(ExperimentConfig& cfg, const nlohmann::json& j);

int run(int argc, char** argv);

}  // namespace saw::cli
