#include <doctest.h>

#include <sstream>

#include "bomtsp/errors.hpp"
#include "bomtsp/harness.hpp"
#include "bomtsp/subtour.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace bomtsp;

TEST_CASE("dynamic program matches permutation enumeration") {
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 5 + trial % 5;
    const Instance inst = trial % 2 == 0
                              ? testutil::make_euclid(n, 100 + trial)
                              : testutil::make_explicit(n, 100 + trial);
    CHECK(exact_optimum(inst) == doctest::Approx(oracle::perm_optimum(inst))
                                     .epsilon(1e-12));
  }
}

TEST_CASE("dynamic program handles degenerate sizes") {
  CHECK(exact_optimum(testutil::make_euclid(2, 1)) ==
        2.0 * testutil::make_euclid(2, 1).cost(0, 1));
  CHECK_THROWS_AS(exact_optimum(testutil::make_euclid(20, 1)), InputError);
}

TEST_CASE("local search returns a permutation no worse than its input") {
  const Instance inst = testutil::make_euclid(12, 5);
  std::vector<int> tour(12);
  std::iota(tour.begin(), tour.end(), 0);
  const double before = inst.tour_cost(tour);
  const std::vector<int> after = local_search_tour(inst, tour);
  CHECK(inst.tour_cost(after) <= before);
  std::vector<int> sorted = after;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == tour);
  CHECK(inst.tour_cost(after) >= exact_optimum(inst));
}

TEST_CASE("branch and bound matches the dynamic program") {
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 10 + trial % 7;
    Instance inst;
    switch (trial % 3) {
      case 0: inst = testutil::make_euclid(n, 300 + trial); break;
      case 1: inst = testutil::make_metric(n, 300 + trial); break;
      default: inst = testutil::make_explicit(n, 300 + trial); break;
    }
    CAPTURE(inst.name);
    CHECK(branch_bound_optimum(inst) ==
          doctest::Approx(exact_optimum(inst)).epsilon(1e-9));
  }
}

TEST_CASE("branch and bound solves the planted-cycle graph metric") {
  const Instance inst = testutil::make_planted_graph(14, 7, 9);
  CHECK(branch_bound_optimum(inst) == 14.0);
}

TEST_CASE("branch and bound respects its node limit") {
  BranchBoundOptions opt;
  opt.node_limit = 1;
  // Non-metric costs keep the root gap open, forcing a second node.
  CHECK_THROWS_AS(
      branch_bound_optimum(testutil::make_explicit(14, 4), opt),
      NumericalError);
}

TEST_CASE("degree histogram counts and caps") {
  const EdgeList star{{0, 1}, {0, 2}, {0, 3}, {1, 4}};
  const std::vector<int> h = degree_histogram(5, star, 3);
  CHECK(h == std::vector<int>{0, 3, 1, 1});
}

TEST_CASE("worst case fixture pins the known gap") {
  const WorstCaseFixture fx = worst_case_fixture();
  CHECK(fx.inst.n == 6);
  CHECK(exact_optimum(fx.inst) == 4.0);
  validate_subtour_vector(fx.inst, fx.lp);
  CHECK(fx.lp.sum() == doctest::Approx(6.0));  // degree 2 everywhere
  for (const EdgeList& t : fx.one_trees)
    CHECK(min_walk_over_matchings(fx.inst, t) == 6.0);
}

TEST_CASE("experiment config parsing") {
  std::istringstream in(
      "# comment\n"
      "instance = a.tsp\n"
      "instance = b.tsp\n"
      "csv = out.csv\n"
      "algorithms = Std, MaxEnt\n"
      "samples = 17\n"
      "seed = 5\n"
      "workers = 2\n"
      "colgen_to_optimality = true\n"
      "maxent_epsilon = 0.02\n");
  const ExperimentConfig cfg = parse_experiment_config(in);
  CHECK(cfg.instance_paths == std::vector<std::string>{"a.tsp", "b.tsp"});
  CHECK(cfg.csv_path == "out.csv");
  CHECK(cfg.options.algorithms == std::vector<std::string>{"Std", "MaxEnt"});
  CHECK(cfg.options.samples == 17);
  CHECK(cfg.options.seed == 5);
  CHECK(cfg.options.workers == 2);
  CHECK(cfg.options.colgen_to_optimality);
  CHECK(cfg.options.maxent_epsilon == 0.02);

  std::istringstream bad("instance = a.tsp\nalgorithms = Nope\n");
  CHECK_THROWS_AS(parse_experiment_config(bad), InputError);
  std::istringstream none("samples = 3\n");
  CHECK_THROWS_AS(parse_experiment_config(none), InputError);
  std::istringstream junk("instance = a.tsp\nsamples = many\n");
  CHECK_THROWS_AS(parse_experiment_config(junk), InputError);
}

TEST_CASE("csv layout is stable") {
  InstanceReport rep;
  rep.name = "toy";
  rep.n = 6;
  rep.optimum = 100.0;
  rep.lp_value = 95.0;
  AlgoReport a;
  a.algorithm = "Std";
  a.samples = 1;
  a.best_cost = 110.0;
  a.avg_cost = 110.0;
  a.avg_tree = 90.0;
  a.avg_match = 20.0;
  a.avg_odd_frac = 0.5;
  a.avg_match_edge = 5.0;
  a.wall_s = 0.25;
  rep.algos.push_back(a);

  std::ostringstream out;
  write_csv_header(out);
  write_csv_rows(out, rep);
  CHECK(out.str() ==
        "instance,n,algorithm,best_err_pct,avg_err_pct,tree_cost_pct,"
        "match_cost_pct,odd_frac,match_edge_cost_pct,wall_s\n"
        "toy,6,Std,10.000000,10.000000,90.000000,20.000000,0.500000,"
        "5.000000,0.250\n");
}

TEST_CASE("run_instance produces all algorithms and sane aggregates") {
  Instance inst = testutil::make_euclid(12, 42);
  ExperimentOptions opt;
  opt.samples = 8;
  opt.seed = 3;
  const InstanceReport rep = run_instance(inst, opt);
  CHECK(rep.n == 12);
  CHECK(rep.optimum == exact_optimum(inst));
  CHECK(rep.lp_value <= rep.optimum + 1e-6);
  REQUIRE(rep.algos.size() == kAllAlgorithms.size());
  for (size_t i = 0; i < rep.algos.size(); ++i) {
    const AlgoReport& a = rep.algos[i];
    CHECK(a.algorithm == kAllAlgorithms[i]);
    CHECK(a.best_cost >= rep.optimum - 1e-9);
    CHECK(a.avg_cost >= a.best_cost - 1e-9);
    CHECK(a.avg_tree >= 0.0);
    CHECK(a.avg_odd_frac >= 0.0);
    CHECK(a.avg_odd_frac <= 1.0);
  }
}

TEST_CASE("run_instance on a graph instance uses the planted optimum") {
  Instance inst = testutil::make_planted_graph(12, 6, 11);
  ExperimentOptions opt;
  opt.samples = 4;
  opt.seed = 1;
  const InstanceReport rep = run_instance(inst, opt);
  CHECK(rep.optimum == 12.0);
  for (const AlgoReport& a : rep.algos) CHECK(a.best_cost >= 12.0);
}

TEST_CASE("same seed gives identical reports across worker counts") {
  Instance inst = testutil::make_euclid(11, 8);
  ExperimentOptions a, b;
  a.samples = b.samples = 6;
  a.seed = b.seed = 77;
  a.workers = 1;
  b.workers = 3;
  const InstanceReport ra = run_instance(inst, a);
  const InstanceReport rb = run_instance(inst, b);
  std::ostringstream oa, ob;
  for (const InstanceReport* r : {&ra, &rb}) {
    std::ostringstream& o = r == &ra ? oa : ob;
    for (const AlgoReport& alg : r->algos) {
      AlgoReport scrubbed = alg;
      scrubbed.wall_s = 0.0;
      InstanceReport one;
      one.name = r->name;
      one.n = r->n;
      one.optimum = r->optimum;
      one.lp_value = r->lp_value;
      one.algos.push_back(scrubbed);
      write_csv_rows(o, one);
    }
  }
  CHECK(oa.str() == ob.str());
}
