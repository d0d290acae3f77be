#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "hbfsm/constellation.hpp"

using namespace hbfsm;

namespace {
int bit_diff(int a, int b) { return __builtin_popcount(unsigned(a ^ b)); }
}  // namespace

TEST_CASE("BPSK is {+1, -1} with one bit") {
  const Constellation c = build_constellation(2);
  CHECK(c.bits == 1);
  REQUIRE(c.points.size() == 2);
  CHECK(c.points[0] == cd(1, 0));
  CHECK(c.points[1] == cd(-1, 0));
}

TEST_CASE("supported orders only") {
  for (int m : {2, 4, 16, 64}) CHECK(build_constellation(m).m == m);
  for (int m : {1, 3, 8, 32, 128}) CHECK_THROWS_AS(build_constellation(m), std::invalid_argument);
}

TEST_CASE("unit average energy") {
  for (int m : {2, 4, 16, 64}) {
    const Constellation c = build_constellation(m);
    double e = 0.0;
    for (const cd& p : c.points) e += std::norm(p);
    CHECK(e / m == doctest::Approx(1.0));
  }
}

TEST_CASE("square QAM levels and Gray adjacency") {
  const Constellation c = build_constellation(16);
  REQUIRE(c.points.size() == 16);
  // all 16 points distinct, on the +-1, +-3 grid (scaled)
  const double scale = 1.0 / std::sqrt(10.0);
  std::set<std::pair<int, int>> seen;
  for (const cd& p : c.points) {
    const int i = int(std::lround(p.real() / scale));
    const int q = int(std::lround(p.imag() / scale));
    CHECK((std::abs(i) == 1 || std::abs(i) == 3));
    CHECK((std::abs(q) == 1 || std::abs(q) == 3));
    seen.insert({i, q});
  }
  CHECK(seen.size() == 16);

  // geometric neighbors differ in exactly one label bit
  auto label_at = [&](int i, int q) {
    for (int l = 0; l < 16; ++l) {
      const cd& p = c.points[size_t(l)];
      if (std::lround(p.real() / scale) == i && std::lround(p.imag() / scale) == q) return l;
    }
    return -1;
  };
  for (int i : {-3, -1, 1, 3})
    for (int q : {-3, -1, 1, 3}) {
      const int l = label_at(i, q);
      REQUIRE(l >= 0);
      if (i < 3) CHECK(bit_diff(l, label_at(i + 2, q)) == 1);
      if (q < 3) CHECK(bit_diff(l, label_at(i, q + 2)) == 1);
    }
}

TEST_CASE("QPSK matches the generic construction") {
  const Constellation c = build_constellation(4);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(c.points[0] - cd(-s, -s)) < 1e-12);  // label 00 -> level (-1, -1)
  for (const cd& p : c.points) CHECK(std::abs(p) == doctest::Approx(1.0));
}

TEST_CASE("sm_map is MSB-first and one-based on the array index") {
  const Constellation c = build_constellation(4);
  const SmSymbol sym = sm_map({1, 0, 1, 1}, 4, c);
  CHECK(sym.aa_index == 3);  // bits 10 -> array 2 zero-based
  CHECK(sym.label == 3);
  CHECK(sym.s == c.points[3]);
  CHECK_THROWS_AS(sm_map({1, 0, 1}, 4, c), std::invalid_argument);

  // round trip over every input
  for (int v = 0; v < 16; ++v) {
    std::vector<int> bits{(v >> 3) & 1, (v >> 2) & 1, (v >> 1) & 1, v & 1};
    const SmSymbol sy = sm_map(bits, 4, c);
    CHECK(sm_unmap(sy, 4, c) == bits);
  }
}
