#include <doctest.h>

#include <map>
#include <random>
#include <sstream>

#include "bomtsp/decompose.hpp"
#include "bomtsp/errors.hpp"
#include "bomtsp/graph_util.hpp"
#include "bomtsp/harness.hpp"
#include "bomtsp/rng.hpp"
#include "bomtsp/subtour.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace bomtsp;

namespace {

std::vector<int> random_tour(int n, std::mt19937_64& gen) {
  std::vector<int> tour(n);
  std::iota(tour.begin(), tour.end(), 0);
  std::shuffle(tour.begin() + 1, tour.end(), gen);
  return tour;
}

// Average of k tour incidence vectors: a subtour-polytope point whose
// entries are multiples of 1/k.
EdgeValues tour_mix(int n, int k, uint64_t seed) {
  std::mt19937_64 gen(mix_seed(seed, 0x70c));
  std::map<Edge, int> mult;
  for (int t = 0; t < k; ++t) {
    const std::vector<int> tour = random_tour(n, gen);
    for (int i = 0; i < n; ++i) {
      int u = tour[i], v = tour[(i + 1) % n];
      if (u > v) std::swap(u, v);
      ++mult[{u, v}];
    }
  }
  EdgeValues x;
  x.n = n;
  for (auto& [e, m] : mult) x.add(e.first, e.second, double(m) / k);
  return x;
}

long long units_of(const TreeCombination& combo, const EdgeValues& x) {
  std::map<Edge, long long> got;
  for (size_t t = 0; t < combo.trees.size(); ++t) {
    const long long w = std::llround(combo.weights[t] * double(combo.K));
    for (const Edge& e : combo.trees[t]) got[e] += w;
  }
  for (size_t i = 0; i < combo.leftover.size(); ++i)
    got[combo.leftover[i]] += combo.leftover_mult[i];
  long long total = 0;
  for (size_t i = 0; i < x.edges.size(); ++i) {
    const long long want = std::llround(x.values[i] * double(combo.K));
    if (got[x.edges[i]] != want) return -1;
    got.erase(x.edges[i]);
    total += want;
  }
  return got.empty() ? total : -1;
}

}  // namespace

TEST_CASE("splitting off reproduces tour mixes exactly") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 6 + int(seed % 5);
    const int k = 2 + int(seed % 4);
    const EdgeValues x = tour_mix(n, k, seed);
    const TreeCombination combo = split_decompose(x);
    CHECK(combo.from_split);
    verify_combination(combo, x, 1e-9);  // exact identity, tiny tolerance
    CHECK(units_of(combo, x) > 0);       // integer accounting closes
    for (const EdgeList& t : combo.trees) CHECK(is_spanning_tree(n, t));
    CHECK(combo.coverage() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("splitting off the relaxation solution") {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const Instance inst = testutil::make_euclid(10, seed + 500);
    const SubtourSolution sol = solve_subtour(inst);
    const TreeCombination combo = split_decompose(sol.x);
    verify_combination(combo, sol.x, 1e-6);
    for (const EdgeList& t : combo.trees) CHECK(is_spanning_tree(10, t));
  }
}

TEST_CASE("splitting off the fixture vector") {
  const WorstCaseFixture fx = worst_case_fixture();
  const TreeCombination combo = split_decompose(fx.lp);
  verify_combination(combo, fx.lp, 1e-9);
  CHECK(combo.K % 2 == 0);  // halves rationalize to K = 2
}

TEST_CASE("irrational-ish vectors are rejected") {
  EdgeValues x;
  x.n = 3;
  x.add(0, 1, 1.0 / 10007.0 * 5003.0);  // denominator beyond the cap
  x.add(1, 2, 1.0);
  x.add(0, 2, 1.0);
  SplitOptions opt;
  opt.max_denominator = 100;
  CHECK_THROWS_AS(split_decompose(x, opt), NumericalError);
}

TEST_CASE("column generation covers the scaled solution") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = testutil::make_euclid(10, seed + 600);
    const SubtourSolution sol = solve_subtour(inst);
    const EdgeValues z = scale_to_tree_polytope(sol.x);

    ColgenOptions opt;
    opt.seed = seed + 1;
    opt.to_optimality = true;
    const ColgenResult res = colgen_decompose(z, opt);
    CHECK(res.reached_optimal);
    CHECK(res.objective <= 1e-6);  // z lies in the spanning tree polytope
    verify_combination(res.combo, z, 1e-6);
    for (const EdgeList& t : res.combo.trees)
      CHECK(is_spanning_tree(10, t));
    CHECK(res.combo.coverage() <= 1.0 + 1e-6);
    CHECK(res.combo.coverage() >= 1.0 - 1e-4);  // slack mass is zero here
  }
}

TEST_CASE("early-stopped column generation still dominates") {
  const Instance inst = testutil::make_euclid(12, 61);
  const SubtourSolution sol = solve_subtour(inst);
  const EdgeValues z = scale_to_tree_polytope(sol.x);
  ColgenOptions opt;
  opt.seed = 9;
  const ColgenResult res = colgen_decompose(z, opt);
  verify_combination(res.combo, z, 1e-6);  // dominance holds regardless
  CHECK(res.combo.coverage() > 0.5);       // something substantial emerged
}

TEST_CASE("combination files round trip") {
  const Instance inst = testutil::make_euclid(8, 62);
  const SubtourSolution sol = solve_subtour(inst);
  const TreeCombination combo = split_decompose(sol.x);

  std::ostringstream out;
  write_combination(out, inst, combo);
  std::istringstream in(out.str());
  const TreeCombination back = parse_combination(in, inst);

  CHECK(back.n == combo.n);
  CHECK(back.from_split == combo.from_split);
  CHECK(back.K == combo.K);
  CHECK(back.trees == combo.trees);
  CHECK(back.leftover == combo.leftover);
  CHECK(back.leftover_mult == combo.leftover_mult);
  REQUIRE(back.weights.size() == combo.weights.size());
  for (size_t i = 0; i < back.weights.size(); ++i)
    CHECK(back.weights[i] == doctest::Approx(combo.weights[i]).epsilon(1e-12));
  verify_combination(back, sol.x, 1e-6);
}

TEST_CASE("verification catches covering violations") {
  EdgeValues z;
  z.n = 3;
  z.add(0, 1, 0.5);
  z.add(1, 2, 0.9);
  z.add(0, 2, 0.6);

  TreeCombination combo;
  combo.n = 3;
  combo.trees.push_back({{0, 1}, {1, 2}});
  combo.weights.push_back(0.8);  // overshoots z on edge (0,1)
  CHECK_THROWS_AS(verify_combination(combo, z, 1e-9), ContractViolation);

  combo.weights[0] = 0.4;
  verify_combination(combo, z, 1e-9);  // dominated now

  combo.trees.push_back({{1, 2}, {0, 2}});
  combo.weights.push_back(0.2);
  verify_combination(combo, z, 1e-9);  // still dominated edge-wise

  combo.trees.push_back({{0, 1}, {2, 0}});  // malformed: unsorted pair
  combo.weights.push_back(0.01);
  CHECK_THROWS(verify_combination(combo, z, 1e-9));
}

TEST_CASE("normalized weights sum to one") {
  const EdgeValues x = tour_mix(7, 3, 99);
  const TreeCombination combo = split_decompose(x);
  const std::vector<double> w = combo.normalized_weights();
  double s = 0.0;
  for (double v : w) s += v;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}
