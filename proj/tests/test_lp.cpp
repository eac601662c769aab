#include <doctest.h>

#include <random>

#include "bomtsp/lp.hpp"
#include "bomtsp/rng.hpp"
#include "oracles.hpp"

using namespace bomtsp;

namespace {

LpProblem random_problem(uint64_t seed) {
  std::mt19937_64 gen(mix_seed(seed, 0x17));
  std::uniform_int_distribution<int> nvars(2, 5), nrows(1, 5), coef(-4, 4);
  std::uniform_real_distribution<double> rhs(-3.0, 8.0);
  std::uniform_int_distribution<int> sense_pick(0, 2);

  LpProblem p;
  const int n = nvars(gen);
  for (int v = 0; v < n; ++v)
    p.add_var(coef(gen), 0.0, 1.0 + (coef(gen) + 4));
  const int m = nrows(gen);
  for (int r = 0; r < m; ++r) {
    std::vector<std::pair<int, double>> entries;
    for (int v = 0; v < n; ++v) {
      const int c = coef(gen);
      if (c != 0) entries.emplace_back(v, double(c));
    }
    if (entries.empty()) entries.emplace_back(0, 1.0);
    // Keep x = 0 feasible so the instance cannot be infeasible.
    const RowSense s[] = {RowSense::kLe, RowSense::kGe, RowSense::kEq};
    RowSense sense = s[sense_pick(gen)];
    double b = rhs(gen);
    if (sense == RowSense::kLe) b = std::abs(b);
    if (sense == RowSense::kGe) b = -std::abs(b);
    if (sense == RowSense::kEq) b = 0.0;
    p.add_row(sense, b, std::move(entries));
  }
  return p;
}

}  // namespace

TEST_CASE("simplex agrees with basic-solution enumeration") {
  int solved = 0;
  for (uint64_t seed = 0; seed < 60; ++seed) {
    LpProblem p = random_problem(seed);
    p.maximize = seed % 2 == 0;
    const LpResult res = solve_lp(p);
    REQUIRE(res.status == LpStatus::kOptimal);
    double want = 0.0;
    REQUIRE(oracle::lp_enumerate(p, &want));
    CHECK(res.objective == doctest::Approx(want).epsilon(1e-7));
    ++solved;
  }
  CHECK(solved == 60);
}

TEST_CASE("bounded variables off their lower bounds") {
  LpProblem p;
  p.add_var(-1.0, 2.0, 5.0);  // min -x pushes x to its upper bound
  p.add_var(3.0, -2.0, 7.0);
  p.add_row(RowSense::kLe, 4.0, {{0, 1.0}, {1, 1.0}});
  const LpResult res = solve_lp(p);
  REQUIRE(res.status == LpStatus::kOptimal);
  CHECK(res.x[0] == doctest::Approx(5.0));
  CHECK(res.x[1] == doctest::Approx(-2.0));
  CHECK(res.objective == doctest::Approx(-11.0));
}

TEST_CASE("infeasible and unbounded are reported") {
  LpProblem inf;
  inf.add_var(1.0, 0.0, 1.0);
  inf.add_row(RowSense::kGe, 2.0, {{0, 1.0}});
  CHECK(solve_lp(inf).status == LpStatus::kInfeasible);

  LpProblem unb;
  unb.add_var(-1.0, 0.0, kLpInf);
  unb.add_row(RowSense::kGe, 0.0, {{0, 1.0}});
  CHECK(solve_lp(unb).status == LpStatus::kUnbounded);
}

TEST_CASE("duals price the rows") {
  LpProblem p;
  p.add_var(1.0, 0.0, kLpInf);
  p.add_var(2.0, 0.0, kLpInf);
  p.add_row(RowSense::kGe, 3.0, {{0, 1.0}, {1, 1.0}});
  const LpResult res = solve_lp(p);
  REQUIRE(res.status == LpStatus::kOptimal);
  CHECK(res.objective == doctest::Approx(3.0));
  CHECK(res.duals[0] == doctest::Approx(1.0));  // marginal cost of the rhs
}

TEST_CASE("warm column addition reaches the new optimum") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    LpProblem p = random_problem(seed + 500);
    LpSolver solver(p);
    REQUIRE(solver.solve().status == LpStatus::kOptimal);

    std::mt19937_64 gen(mix_seed(seed, 0x33));
    std::uniform_int_distribution<int> coef(-3, 3);
    std::vector<std::pair<int, double>> entries;
    for (int r = 0; r < p.num_rows(); ++r) {
      const int c = coef(gen);
      if (c != 0) entries.emplace_back(r, double(c));
    }
    solver.add_column(-2.0, 0.0, 4.0, entries);
    const LpResult warm = solver.resolve();
    REQUIRE(warm.status == LpStatus::kOptimal);

    double want = 0.0;
    REQUIRE(oracle::lp_enumerate(solver.problem(), &want));
    CHECK(warm.objective == doctest::Approx(want).epsilon(1e-7));
  }
}

TEST_CASE("warm row addition reaches the new optimum") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    LpProblem p = random_problem(seed + 900);
    LpSolver solver(p);
    REQUIRE(solver.solve().status == LpStatus::kOptimal);

    std::mt19937_64 gen(mix_seed(seed, 0x44));
    std::uniform_int_distribution<int> coef(0, 3);
    std::vector<std::pair<int, double>> entries;
    for (int v = 0; v < p.num_vars(); ++v) {
      const int c = coef(gen);
      if (c != 0) entries.emplace_back(v, double(c));
    }
    if (entries.empty()) entries.emplace_back(0, 1.0);
    solver.add_row(RowSense::kLe, 3.0, entries);
    const LpResult warm = solver.resolve();
    REQUIRE(warm.status == LpStatus::kOptimal);

    double want = 0.0;
    REQUIRE(oracle::lp_enumerate(solver.problem(), &want));
    CHECK(warm.objective == doctest::Approx(want).epsilon(1e-7));
  }
}

TEST_CASE("degenerate ties terminate") {
  // Many rows active at the same vertex.
  LpProblem p;
  p.add_var(1.0, 0.0, kLpInf);
  p.add_var(1.0, 0.0, kLpInf);
  for (int k = 1; k <= 6; ++k)
    p.add_row(RowSense::kGe, 1.0, {{0, double(k)}, {1, double(7 - k)}});
  const LpResult res = solve_lp(p);
  REQUIRE(res.status == LpStatus::kOptimal);
  double want = 0.0;
  REQUIRE(oracle::lp_enumerate(p, &want));
  CHECK(res.objective == doctest::Approx(want).epsilon(1e-7));
}
