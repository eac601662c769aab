#include <doctest.h>

#include <random>

#include "bomtsp/matching.hpp"
#include "bomtsp/rng.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace bomtsp;

namespace {

bool valid_matching(const std::vector<int>& mate) {
  for (int v = 0; v < int(mate.size()); ++v) {
    if (mate[v] < 0 || mate[v] >= int(mate.size())) return false;
    if (mate[v] == v || mate[mate[v]] != v) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("blossom matches brute force on random integer costs") {
  for (uint64_t seed = 0; seed < 120; ++seed) {
    const int n = 4 + 2 * int(seed % 4);  // 4, 6, 8, 10
    std::mt19937_64 gen(mix_seed(seed, 0xabc));
    std::uniform_int_distribution<int> pick(1, 50);
    std::vector<double> w(size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        w[size_t(i) * n + j] = w[size_t(j) * n + i] = pick(gen);
    const auto cost = [&](int a, int b) { return w[size_t(a) * n + b]; };

    const std::vector<int> mate = min_weight_perfect_matching(n, cost);
    REQUIRE(valid_matching(mate));

    std::vector<int> verts(n);
    std::iota(verts.begin(), verts.end(), 0);
    CHECK(matching_cost(mate, cost) ==
          doctest::Approx(oracle::brute_matching(verts, cost)).epsilon(1e-9));
  }
}

TEST_CASE("blossom handles fractional costs near ties") {
  for (uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 8;
    std::mt19937_64 gen(mix_seed(seed, 0xf00));
    std::uniform_real_distribution<double> pick(0.5, 2.5);
    std::vector<double> w(size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        w[size_t(i) * n + j] = w[size_t(j) * n + i] = pick(gen);
    const auto cost = [&](int a, int b) { return w[size_t(a) * n + b]; };

    const std::vector<int> mate = min_weight_perfect_matching(n, cost);
    REQUIRE(valid_matching(mate));

    std::vector<int> verts(n);
    std::iota(verts.begin(), verts.end(), 0);
    const double want = oracle::brute_matching(verts, cost);
    CHECK(matching_cost(mate, cost) <= want + 1e-5 * n);
  }
}

TEST_CASE("matching on euclidean points") {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    const Instance inst = testutil::make_euclid(10, seed + 40);
    const auto cost = [&](int a, int b) { return inst.cost(a, b); };
    const std::vector<int> mate = min_weight_perfect_matching(10, cost);
    REQUIRE(valid_matching(mate));
    std::vector<int> verts(10);
    std::iota(verts.begin(), verts.end(), 0);
    CHECK(matching_cost(mate, cost) ==
          doctest::Approx(oracle::brute_matching(verts, cost)).epsilon(1e-9));
  }
}

TEST_CASE("two vertices pair up") {
  const std::vector<int> mate =
      min_weight_perfect_matching(2, [](int, int) { return 7.0; });
  CHECK(mate == std::vector<int>{1, 0});
}

TEST_CASE("forced blossom structure") {
  // Cheap triangle 0-1-2 plus far vertex 3: some pair must break the
  // triangle, and the matching picks the cheapest escape.
  std::vector<double> w = {0, 1, 1, 10,  //
                           1, 0, 1, 20,  //
                           1, 1, 0, 30,  //
                           10, 20, 30, 0};
  const auto cost = [&](int a, int b) { return w[size_t(a) * 4 + b]; };
  const std::vector<int> mate = min_weight_perfect_matching(4, cost);
  REQUIRE(valid_matching(mate));
  CHECK(matching_cost(mate, cost) == 11.0);  // (1,2) + (0,3)
}
