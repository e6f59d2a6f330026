#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "saw/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("saw_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(SAW_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) { return saw::io::read_file(p); }

}  // namespace

TEST_CASE("enumerate writes totals and caches") {
  const fs::path out = scratch("enumerate");
  REQUIRE(cli("enumerate --L 10 --out " + out.string()) == 0);
  const std::string totals = slurp(out / "totals.csv");
  CHECK(totals.find("\n10,44100,") != std::string::npos);
  CHECK(totals.find("\n4,100,") != std::string::npos);
  for (const char* f : {"counts_all.bin", "counts_bridge.bin", "counts_irreducible.bin", "counts_all.csv"}) {
    CHECK(fs::exists(out / f));
    CHECK(fs::exists(out / (std::string(f) + ".meta.json")));
  }
  const json meta = json::parse(slurp(out / "totals.csv.meta.json"));
  CHECK(meta.at("fnv1a64") == saw::io::hex64(saw::io::content_hash(totals)));
  CHECK(meta.at("config").at("L") == 10);

  const fs::path empty = scratch("enumerate_l0");
  REQUIRE(cli("enumerate --L 0 --out " + empty.string()) == 0);
  CHECK(slurp(empty / "totals.csv") == "N,c_N,c_N_root\n0,1,1\n");
}

TEST_CASE("validation and missing inputs exit with code 2") {
  const fs::path out = scratch("invalid");
  CHECK(cli("enumerate --d 5 --out " + out.string()) == 2);
  CHECK(cli("enumerate --beta -1 --out " + out.string()) == 2);
  CHECK(cli("sample --out " + out.string()) == 2);
  CHECK(cli("calibrate --out " + out.string()) == 2);
  CHECK(cli("frobnicate") == 2);
  CHECK(cli("oracle --n 9 --L 13 --out " + out.string()) == 2);
}

TEST_CASE("calibrate, sample and analyze are reproducible") {
  const fs::path a = scratch("pipeline_a");
  const fs::path b = scratch("pipeline_b");
  const std::string common = " --L 9 --n 40,80 --replicas 400 --seed 7";
  for (const auto& [dir, threads] : {std::pair{a, 1}, std::pair{b, 4}}) {
    const std::string flags = common + " --threads " + std::to_string(threads) + " --out " + dir.string();
    REQUIRE(cli("enumerate" + flags) == 0);
    REQUIRE(cli("calibrate" + flags) == 0);
    REQUIRE(cli("sample" + flags) == 0);
    REQUIRE(cli("analyze" + flags) == 0);
  }
  const json law = json::parse(slurp(a / "steplaw.json"));
  CHECK(law.at("diagnostics").at("normalization_error").get<double>() <= 1e-10);
  for (const char* f : {"steplaw.json", "skeletons_n40.csv", "process_n80.csv", "sample_summary.json", "report.json",
                        "covariance_n80.csv", "skeletons_n80.csv.meta.json"}) {
    CAPTURE(f);
    CHECK(slurp(a / f) == slurp(b / f));
  }
  // A rerun into the same directory reproduces the bytes.
  const std::string before = slurp(a / "skeletons_n80.csv");
  REQUIRE(cli("sample" + common + " --out " + a.string()) == 0);
  CHECK(slurp(a / "skeletons_n80.csv") == before);
}

TEST_CASE("config file with flag overrides") {
  const fs::path out = scratch("config");
  fs::create_directories(out);
  saw::io::write_file(out / "cfg.json", R"({"d": 2, "L": 6, "beta": 1.3})");
  REQUIRE(cli("enumerate --config " + (out / "cfg.json").string() + " --L 5 --out " + out.string()) == 0);
  const json meta = json::parse(slurp(out / "totals.csv.meta.json"));
  CHECK(meta.at("config").at("L") == 5);
  CHECK(meta.at("config").at("beta") == 1.3);

  saw::io::write_file(out / "bad.json", R"({"colour": 3})");
  CHECK(cli("enumerate --config " + (out / "bad.json").string() + " --out " + out.string()) == 2);
}

TEST_CASE("threshold violations exit with code 3") {
  const fs::path out = scratch("threshold");
  const std::string flags = " --L 9 --n 200 --replicas 100 --out " + out.string();
  REQUIRE(cli("enumerate" + flags) == 0);
  REQUIRE(cli("calibrate" + flags) == 0);
  // A box as narrow as one step loses most of the bridge mass.
  CHECK(cli("sample --box-radius 8" + flags) == 3);
  CHECK(cli("sample --box-radius 2" + flags) == 2);
}

TEST_CASE("oracle matches the product law") {
  const fs::path out = scratch("oracle");
  REQUIRE(cli("oracle --n 3 --L 9 --replicas 20000 --out " + out.string()) == 0);
  const json report = json::parse(slurp(out / "oracle.json"));
  CHECK(report.at("max_abs_difference").get<double>() <= 1e-12);
  CHECK(report.at("skeletons_exact") == report.at("skeletons_product"));
}
