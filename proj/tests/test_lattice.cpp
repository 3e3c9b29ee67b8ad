#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "wmk/lattice.hpp"

using namespace wmk;

namespace {

IntMatrix make(std::size_t rows, std::size_t cols,
               std::vector<long long> entries) {
  REQUIRE(entries.size() == rows * cols);
  IntMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = entries[r * cols + c];
  return m;
}

std::vector<Int> factors(std::vector<long long> v) {
  return std::vector<Int>(v.begin(), v.end());
}

}  // namespace

TEST_CASE("matrix product and identity") {
  const IntMatrix a = make(2, 3, {1, 2, 3, 4, 5, 6});
  const IntMatrix b = make(3, 2, {7, 8, 9, 10, 11, 12});
  CHECK(a * b == make(2, 2, {58, 64, 139, 154}));
  CHECK(IntMatrix::identity(2) * a * IntMatrix::identity(3) == a);
  CHECK_THROWS_AS(a * a, DimensionMismatch);
}

TEST_CASE("snf of hand-checked matrices") {
  SUBCASE("diag(2,3) has invariant factors 1, 6") {
    const IntMatrix a = make(2, 2, {2, 0, 0, 3});
    const SnfDecomposition s = smith_normal_form(a);
    CHECK(s.invariant_factors == factors({1, 6}));
    CHECK(s.rank == 2);
    CHECK(oracle::snf_is_valid(a, s));
  }
  SUBCASE("rank-deficient") {
    const IntMatrix a = make(2, 2, {1, 0, 0, 0});
    const SnfDecomposition s = smith_normal_form(a);
    CHECK(s.invariant_factors == factors({1}));
    CHECK(s.rank == 1);
    CHECK(oracle::snf_is_valid(a, s));
  }
  SUBCASE("zero matrix") {
    const IntMatrix a(2, 3);
    const SnfDecomposition s = smith_normal_form(a);
    CHECK(s.invariant_factors.empty());
    CHECK(s.rank == 0);
    CHECK(oracle::snf_is_valid(a, s));
  }
  SUBCASE("single negative entry is normalized to a positive factor") {
    const IntMatrix a = make(1, 1, {-4});
    const SnfDecomposition s = smith_normal_form(a);
    CHECK(s.invariant_factors == factors({4}));
    CHECK(oracle::snf_is_valid(a, s));
  }
  SUBCASE("wide matrix") {
    const IntMatrix a = make(1, 3, {-1, 2, -1});
    const SnfDecomposition s = smith_normal_form(a);
    CHECK(s.invariant_factors == factors({1}));
    CHECK(oracle::snf_is_valid(a, s));
  }
  SUBCASE("divisibility chain is nontrivial") {
    const IntMatrix a = make(3, 3, {2, 4, 4, -6, 6, 12, 10, 4, 16});
    const SnfDecomposition s = smith_normal_form(a);
    REQUIRE(s.rank == 3);
    CHECK(s.invariant_factors == oracle::minor_gcd_invariants(a));
    for (std::size_t i = 0; i + 1 < s.invariant_factors.size(); ++i)
      CHECK(s.invariant_factors[i + 1] % s.invariant_factors[i] == 0);
    CHECK(oracle::snf_is_valid(a, s));
  }
  SUBCASE("empty matrix") {
    const SnfDecomposition s = smith_normal_form(IntMatrix(0, 0));
    CHECK(s.invariant_factors.empty());
    CHECK(s.rank == 0);
  }
}

TEST_CASE("snf is deterministic") {
  const IntMatrix a = make(3, 2, {6, 4, -2, 8, 0, 10});
  const SnfDecomposition s1 = smith_normal_form(a);
  const SnfDecomposition s2 = smith_normal_form(a);
  CHECK(s1.U == s2.U);
  CHECK(s1.D == s2.D);
  CHECK(s1.V == s2.V);
}

TEST_CASE("snf on seeded random matrices agrees with the minor-gcd oracle") {
  std::mt19937 rng(20260815);
  std::uniform_int_distribution<int> dim(1, 4), entry(-5, 5);
  for (int trial = 0; trial < 150; ++trial) {
    IntMatrix a(dim(rng), dim(rng));
    for (std::size_t r = 0; r < a.rows(); ++r)
      for (std::size_t c = 0; c < a.cols(); ++c) a(r, c) = entry(rng);
    const SnfDecomposition s = smith_normal_form(a);
    REQUIRE_MESSAGE(oracle::snf_is_valid(a, s), "matrix:\n" << a.str());
  }
}

TEST_CASE("abelian invariants") {
  SUBCASE("free part only") {
    const AbelianGroupInvariants g = abelian_invariants(IntMatrix(0, 3), 3);
    CHECK(g.free_rank == 3);
    CHECK(g.torsion.empty());
  }
  SUBCASE("mixed free and torsion") {
    // Z^3 / <2a, 3b> = Z x Z/2 x Z/3 = Z x Z/6
    const IntMatrix rel = make(2, 3, {2, 0, 0, 0, 3, 0});
    const AbelianGroupInvariants g = abelian_invariants(rel, 3);
    CHECK(g.free_rank == 1);
    CHECK(g.torsion == factors({6}));
  }
  SUBCASE("trivial factors are dropped") {
    const IntMatrix rel = make(1, 2, {1, -1});  // a = b
    const AbelianGroupInvariants g = abelian_invariants(rel, 2);
    CHECK(g.free_rank == 1);
    CHECK(g.torsion.empty());
  }
  SUBCASE("trivial group") {
    const IntMatrix rel = make(1, 1, {1});
    const AbelianGroupInvariants g = abelian_invariants(rel, 1);
    CHECK(g.free_rank == 0);
    CHECK(g.torsion.empty());
  }
  SUBCASE("mismatched column count is rejected") {
    CHECK_THROWS_AS(abelian_invariants(make(1, 2, {1, 1}), 3),
                    DimensionMismatch);
  }
}

TEST_CASE("group isomorphism check compares invariants") {
  const AbelianGroupInvariants a{2, {}};
  const AbelianGroupInvariants b{2, {}};
  const AbelianGroupInvariants c{1, {Int(2)}};
  CHECK(group_iso_check(a, b));
  CHECK_FALSE(group_iso_check(a, c));
  CHECK_FALSE(group_iso_check(b, c));
}

TEST_CASE("integer lattice membership") {
  auto rows = [](std::vector<std::vector<long long>> rs) {
    std::vector<std::vector<Int>> out;
    for (const auto& r : rs) out.emplace_back(r.begin(), r.end());
    return out;
  };
  SUBCASE("span of (2,0) and (0,2)") {
    const IntegerLattice lat(rows({{2, 0}, {0, 2}}), 2);
    CHECK(lat.rank() == 2);
    CHECK(lat.contains({Int(4), Int(2)}));
    CHECK(lat.contains({Int(0), Int(0)}));
    CHECK(lat.contains({Int(-2), Int(6)}));
    CHECK_FALSE(lat.contains({Int(1), Int(0)}));
    CHECK_FALSE(lat.contains({Int(2), Int(1)}));
  }
  SUBCASE("dependent generators collapse") {
    const IntegerLattice lat(rows({{1, -1}, {2, -2}, {-3, 3}}), 2);
    CHECK(lat.rank() == 1);
    CHECK(lat.contains({Int(5), Int(-5)}));
    CHECK_FALSE(lat.contains({Int(5), Int(5)}));
  }
  SUBCASE("empty lattice contains only zero") {
    const IntegerLattice lat({}, 2);
    CHECK(lat.rank() == 0);
    CHECK(lat.contains({Int(0), Int(0)}));
    CHECK_FALSE(lat.contains({Int(0), Int(1)}));
  }
  SUBCASE("membership agrees with brute force on a seeded sweep") {
    const IntegerLattice lat(rows({{2, 1, 0}, {0, 3, -1}}), 3);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coef(-4, 4);
    for (int t = 0; t < 50; ++t) {
      const int a = coef(rng), b = coef(rng);
      CHECK(lat.contains({Int(2 * a), Int(a + 3 * b), Int(-b)}));
    }
    // perturbations off the lattice
    CHECK_FALSE(lat.contains({Int(1), Int(0), Int(0)}));
    CHECK_FALSE(lat.contains({Int(2), Int(1), Int(1)}));
  }
}
