#include <doctest.h>

#include <random>
#include <set>

#include "saw/error.hpp"
#include "saw/lattice.hpp"

using namespace saw;

TEST_CASE("self-avoidance predicate") {
  CHECK(is_self_avoiding(std::vector<Point>{{0, 0}}));
  CHECK_FALSE(is_self_avoiding(std::vector<Point>{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}}));
  CHECK(is_self_avoiding(std::vector<Point>{{0, 0}, {1, 0}, {2, 0}, {2, 1}}));
  // Not nearest-neighbour.
  CHECK_FALSE(is_self_avoiding(std::vector<Point>{{0, 0}, {2, 0}}));
  CHECK_FALSE(is_self_avoiding(std::vector<Point>{{0, 0}, {1, 1}}));
  CHECK_FALSE(is_self_avoiding(std::vector<Point>{{0, 0}, {0, 0}}));
}

TEST_CASE("monotone paths are accepted, duplicates rejected") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(gen() % 3);
    std::vector<Point> sites{Point(d)};
    for (int j = 0; j < 20; ++j) {
      Point p = sites.back();
      p[static_cast<int>(gen() % static_cast<unsigned>(d))] += 1;
      sites.push_back(p);
    }
    CHECK(is_self_avoiding(sites));
    sites.push_back(sites[gen() % sites.size()]);
    CHECK_FALSE(is_self_avoiding(sites));
  }
}

TEST_CASE("SawPath validates its sites") {
  SawPath ok(std::vector<Point>{{0, 0}, {1, 0}, {1, 1}});
  CHECK(ok.length() == 2);
  CHECK(ok.dim() == 2);
  CHECK(ok.end() == Point{1, 1});
  CHECK_THROWS_AS(SawPath(std::vector<Point>{{0, 0}, {1, 0}, {0, 0}}), Error);
  CHECK_THROWS_AS(SawPath(std::vector<Point>{}), Error);
}

TEST_CASE("frame split") {
  const FrameSplit f = split_frame(Point{5, -2});
  CHECK(f.t == 5);
  CHECK(f.y == Point{-2});
  const FrameSplit o = split_frame(Point(3));
  CHECK(o.t == 0);
  CHECK(o.y.is_zero());
  CHECK(o.y.dim() == 2);
}

TEST_CASE("frame split round-trips") {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<Coord> coord(-1000000, 1000000);
  for (int i = 0; i < 1000; ++i) {
    const int d = 2 + i % 3;
    Point p(d);
    for (int k = 0; k < d; ++k) p[k] = coord(gen);
    CHECK(join_frame(split_frame(p)) == p);
  }
}

TEST_CASE("point arithmetic and norms") {
  const Point a{3, -4};
  CHECK(a.l1() == 7);
  CHECK(a.linf() == 4);
  CHECK(a.euclidean() == doctest::Approx(5.0));
  CHECK((a + Point{1, 1}) == Point{4, -3});
  CHECK((a - a).is_zero());
  CHECK(-a == Point{-3, 4});
  CHECK(Point{0, 5} < Point{1, -5});
  CHECK(a.str() == "(3,-4)");
}

TEST_CASE("unit steps and transverse orbits") {
  const auto steps = unit_steps(3);
  REQUIRE(steps.size() == 6);
  CHECK(steps[0] == Point{1, 0, 0});
  CHECK(steps[1] == Point{-1, 0, 0});
  CHECK(steps[2] == Point{0, 1, 0});
  for (const Point& s : steps) CHECK(s.l1() == 1);

  const auto one = transverse_orbit(Point{2});
  CHECK(std::set<Point>(one.begin(), one.end()) == std::set<Point>{Point{2}, Point{-2}});
  const auto two = transverse_orbit(Point{1, 2});
  CHECK(std::set<Point>(two.begin(), two.end()).size() == 8);
  const auto zero = transverse_orbit(Point{0, 0});
  CHECK(std::set<Point>(zero.begin(), zero.end()).size() == 1);
}

TEST_CASE("128-bit count formatting") {
  CHECK(to_string(Count{0}) == "0");
  CHECK(to_string(Count{44100}) == "44100");
  const Count big = Count{1} << 100;
  CHECK(to_string(big) == "1267650600228229401496703205376");
}
