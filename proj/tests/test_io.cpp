#include <doctest.h>

#include <filesystem>

#include "saw/enumerate.hpp"
#include "saw/error.hpp"
#include "saw/io.hpp"
#include "saw/sampler.hpp"

using namespace saw;

TEST_CASE("count cache round trip") {
  for (int d : {2, 3}) {
    for (WalkClass cls : {WalkClass::All, WalkClass::Bridge, WalkClass::IrreducibleBridge}) {
      const CountTable t = enumerate_counts(d, d == 2 ? 8 : 5, cls);
      const std::string bytes = io::encode_count_table(t);
      CHECK(bytes.substr(0, 8) == "SAWCOUNT");
      const CountTable back = io::decode_count_table(bytes);
      CHECK(back == t);
      CHECK(back.walk_class() == cls);
      CHECK(io::encode_count_table(back) == bytes);
    }
  }
}

TEST_CASE("count cache keeps 128-bit counts") {
  CountTable t(2, 2, WalkClass::All);
  const Count big = (Count{1} << 100) + 12345;
  t.add(Point{1, 1}, 2, big);
  CHECK(io::decode_count_table(io::encode_count_table(t)).count(Point{1, 1}, 2) == big);
}

TEST_CASE("count cache rejects damaged input") {
  const std::string bytes = io::encode_count_table(enumerate_counts(2, 3, WalkClass::All));
  CHECK_THROWS_AS(io::decode_count_table("NOTCOUNT"), Error);
  CHECK_THROWS_AS(io::decode_count_table(bytes.substr(0, bytes.size() - 3)), Error);
  CHECK_THROWS_AS(io::decode_count_table(bytes + "x"), Error);
  std::string bad_version = bytes;
  bad_version[8] = 9;
  CHECK_THROWS_AS(io::decode_count_table(bad_version), Error);
}

TEST_CASE("count table csv") {
  const std::string csv = io::count_table_csv(enumerate_counts(2, 1, WalkClass::All));
  CHECK(csv == "x1,x2,N,count\n-1,0,1,1\n0,-1,1,1\n0,0,0,1\n0,1,1,1\n1,0,1,1\n");
}

TEST_CASE("step law json round trip") {
  const CountTable irr = enumerate_counts(2, 10, WalkClass::IrreducibleBridge);
  const StepLaw law = build_step_law(irr, 1.2, calibrate_mass(irr, 1.2));
  const nlohmann::json j = io::step_law_to_json(law);
  CHECK(j.at("d") == 2);
  CHECK(j.at("L") == 10);
  const StepLaw back = io::step_law_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.m_hat == law.m_hat);
  CHECK(back.tail_mass_proxy == law.tail_mass_proxy);
  REQUIRE(back.steps.size() == law.steps.size());
  for (std::size_t i = 0; i < law.steps.size(); ++i) {
    CHECK(back.steps[i].step == law.steps[i].step);
    CHECK(back.steps[i].p == law.steps[i].p);
  }
  CHECK_THROWS_AS(io::step_law_from_json(nlohmann::json::parse(R"({"d": 2})")), Error);
  CHECK_THROWS_AS(io::step_law_from_json(nlohmann::json::parse(
                      R"({"d": 2, "beta": 1, "L": 1, "m_hat": 0, "steps": [{"t": 1, "y": [0, 0], "p": 1}]})")),
                  Error);
}

TEST_CASE("skeleton csv round trip") {
  const std::vector<Skeleton> sks{Skeleton{{{2, Point{1}}, {1, Point{-1}}}}, Skeleton{{{3, Point{0}}}}};
  const std::string csv = io::skeletons_csv(sks);
  CHECK(csv == "replicate,k,step_index,t,y_1\n0,2,0,2,1\n0,2,1,1,-1\n1,1,0,3,0\n");
  CHECK(io::parse_skeletons_csv(csv) == sks);

  const std::vector<Skeleton> three{Skeleton{{{1, Point{1, -2}}, {1, Point{-1, 2}}}}};
  CHECK(io::parse_skeletons_csv(io::skeletons_csv(three)) == three);
  CHECK_THROWS_AS(io::parse_skeletons_csv("bad\n"), Error);
  CHECK_THROWS_AS(io::parse_skeletons_csv("replicate,k,step_index,t,y_1\n1,1,0,3,0\n"), Error);
}

TEST_CASE("process csv round trip") {
  const std::vector<Skeleton> sks{Skeleton{{{8, Point{4}}, {8, Point{-4}}}}, Skeleton{{{16, Point{0}}}}};
  const Ensemble e = make_ensemble(sks, 16, default_grid());
  const std::string csv = io::process_csv(e);
  CHECK(csv.starts_with("replicate,t,Y_1\n0,0.10000000000000001,0.20000000000000001\n"));
  const Ensemble back = io::parse_process_csv(csv, 16);
  CHECK(back.replicas == 2);
  CHECK(back.grid == e.grid);
  CHECK(back.values == e.values);
  CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("hash and files") {
  CHECK(io::content_hash("") == 0xcbf29ce484222325ull);
  CHECK(io::hex64(io::content_hash("a")) == "af63dc4c8601ec8c");
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(1.0) == "1");

  const auto dir = std::filesystem::temp_directory_path() / "saw_io_test";
  std::filesystem::remove_all(dir);
  io::write_file(dir / "sub" / "f.bin", std::string("a\0b", 3));
  CHECK(io::read_file(dir / "sub" / "f.bin") == std::string("a\0b", 3));
  CHECK_THROWS_AS(io::read_file(dir / "missing"), Error);
  std::filesystem::remove_all(dir);
}
