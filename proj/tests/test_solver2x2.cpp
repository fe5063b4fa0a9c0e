#include <doctest.h>

#include "support.hpp"
#include "twodevp/solver.hpp"
#include "twodevp/solver2x2.hpp"

using namespace twodevp;

TEST_CASE("closed form with a nonzero coupling") {
  const auto [a, c] = testing::two_by_two(0.2);
  const TwoByTwoSolution s = solve_2x2(validate_pair(a, c));
  CHECK(s.kind == TwoByTwoCase::offdiag);
  REQUIRE(s.triples.size() == 2);
  std::vector<std::pair<double, double>> got;
  for (const auto& t : s.triples) {
    CHECK(t.certified);
    got.emplace_back(t.mu, t.lambda);
  }
  std::sort(got.begin(), got.end());
  CHECK(got[0].first == doctest::Approx(-testing::kTwoByTwoMu).epsilon(1e-12));
  CHECK(got[0].second == doctest::Approx(testing::kTwoByTwoTop).epsilon(1e-12));
  CHECK(got[1].first == doctest::Approx(testing::kTwoByTwoMu).epsilon(1e-12));
  CHECK(got[1].second == doctest::Approx(testing::kTwoByTwoBottom).epsilon(1e-12));
}

TEST_CASE("decoupled case gives one 2D-eigenvalue with a circle of vectors") {
  const auto [a, c] = testing::two_by_two(0.0);
  const HermitianPair p = validate_pair(a, c);
  const TwoByTwoSolution s = solve_2x2(p);
  CHECK(s.kind == TwoByTwoCase::diag);
  CHECK(s.family);
  for (const auto& t : s.triples) {
    CHECK(t.mu == doctest::Approx(0.0).scale(1.0));
    CHECK(t.lambda == doctest::Approx(1.0));
    CHECK(t.certified);
  }
  for (double phase : {0.3, 1.7, 4.0}) {
    const CVector x = s.family_vector(std::polar(1.0, phase));
    CHECK(certify(p, 0.0, 1.0, x).certified);
  }
}

TEST_CASE("wrong size and C with swapped signs") {
  const auto [a, c] = testing::touching_pair();
  CHECK_THROWS_AS(solve_2x2(validate_pair(a, c)), Error);
  const CMatrix a2 = testing::real_matrix({{3, 1}, {1, -2}});
  const CMatrix c2 = testing::real_matrix({{-1, 0}, {0, 4}});
  const TwoByTwoSolution s = solve_2x2(validate_pair(a2, c2));
  REQUIRE(s.triples.size() == 2);
  for (const auto& t : s.triples) CHECK(t.certified);
}

TEST_CASE("random 2x2 pairs agree with the general solver") {
  testing::Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const CMatrix a = testing::random_hermitian(rng, 2);
    const CMatrix c = testing::random_indefinite(rng, 2);
    const HermitianPair p = validate_pair(a, c);
    const TwoByTwoSolution s = solve_2x2(p);
    const SolveReport r = find_all(p);
    REQUIRE(s.kind == TwoByTwoCase::offdiag);
    REQUIRE(r.triples.size() == 2);
    std::vector<std::pair<double, double>> closed;
    for (const auto& t : s.triples) {
      CHECK(t.certified);
      closed.emplace_back(t.mu, t.lambda);
    }
    std::sort(closed.begin(), closed.end());
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(r.triples[i].mu == doctest::Approx(closed[i].first).epsilon(1e-8).scale(1.0));
      CHECK(r.triples[i].lambda == doctest::Approx(closed[i].second).epsilon(1e-8).scale(1.0));
    }
  }
}
