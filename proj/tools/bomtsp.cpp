#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bomtsp/decompose.hpp"
#include "bomtsp/errors.hpp"
#include "bomtsp/harness.hpp"
#include "bomtsp/instance.hpp"
#include "bomtsp/rng.hpp"
#include "bomtsp/sampling.hpp"
#include "bomtsp/subtour.hpp"

namespace {

using namespace bomtsp;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  return in;
}

int cmd_subtour(const std::string& instance_path, const std::string& out_path) {
  const Instance inst = load_instance(instance_path);
  const SubtourSolution sol = solve_subtour(inst);
  std::printf("instance %s n %d\n", inst.name.c_str(), inst.n);
  std::printf("objective %.6f\n", sol.objective);
  std::printf("support %zu cuts %d pricing_rounds %d pivots %ld\n",
              sol.x.edges.size(), sol.cut_count, sol.price_rounds,
              sol.lp_pivots);
  if (inst.has_opt)
    std::printf("lp_over_opt_pct %.4f\n",
                100.0 * (sol.objective - inst.opt) / inst.opt);
  if (!out_path.empty()) {
    auto out = open_out(out_path);
    write_edge_values(out, inst, sol.x);
  }
  return 0;
}

int cmd_christofides(const std::string& instance_path, uint64_t seed,
                     const std::string& tour_path) {
  const Instance inst = load_instance(instance_path);
  const ChristofidesResult res = run_standard(inst, seed);
  std::printf("instance %s n %d\n", inst.name.c_str(), inst.n);
  std::printf("tree %.6f matching %.6f tour %.6f\n", res.tree_cost,
              res.matching_cost, res.tour_cost);
  if (inst.has_opt)
    std::printf("err_pct %.4f\n",
                100.0 * (res.tour_cost - inst.opt) / inst.opt);
  if (!tour_path.empty()) {
    auto out = open_out(tour_path);
    write_tour(out, inst, res.tour, res.tour_cost);
  }
  return 0;
}

int cmd_decompose(const std::string& instance_path, const std::string& method,
                  const std::string& out_path, uint64_t seed,
                  bool to_optimality) {
  const Instance inst = load_instance(instance_path);
  const SubtourSolution sol = solve_subtour(inst);
  std::printf("instance %s n %d lp %.6f\n", inst.name.c_str(), inst.n,
              sol.objective);
  TreeCombination combo;
  if (method == "colgen") {
    ColgenOptions opt;
    opt.seed = seed;
    opt.to_optimality = to_optimality;
    const ColgenResult res = colgen_decompose(scale_to_tree_polytope(sol.x), opt);
    combo = std::move(res.combo);
    std::printf("iterations %d residual %.6f optimal %d\n", res.iterations,
                res.objective, int(res.reached_optimal));
  } else if (method == "split") {
    combo = split_decompose(sol.x);
    std::printf("denominator %lld leftover_types %zu\n", combo.K,
                combo.leftover.size());
  } else {
    throw InputError("method must be colgen or split");
  }
  std::printf("trees %zu coverage %.6f\n", combo.trees.size(),
              combo.coverage());
  if (!out_path.empty()) {
    auto out = open_out(out_path);
    write_combination(out, inst, combo);
  }
  return 0;
}

int cmd_sample(const std::string& instance_path,
               const std::string& combination_path, bool use_maxent,
               bool use_swap, int samples, uint64_t seed) {
  const Instance inst = load_instance(instance_path);
  TreeDrawer draw;
  TreeCombination combo;
  MaxEntResult fit;
  EdgeValues z;
  if (use_maxent) {
    const SubtourSolution sol = solve_subtour(inst);
    z = scale_to_tree_polytope(sol.x);
    fit = fit_max_entropy(z);
    std::printf("maxent sweeps %d max_ratio %.6f converged %d\n", fit.sweeps,
                fit.max_ratio, int(fit.converged));
    draw = [&](std::mt19937_64& gen) {
      return sample_tree_walk(z.n, z.edges, fit.lambda, gen);
    };
  } else if (!combination_path.empty()) {
    auto in = open_in(combination_path);
    combo = parse_combination(in, inst);
    if (use_swap)
      draw = [&](std::mt19937_64& gen) { return swap_round(combo, gen); };
    else
      draw = [&](std::mt19937_64& gen) {
        return draw_combination_tree(combo, gen);
      };
  } else {
    throw InputError("need --combination or --maxent");
  }
  if (samples <= 0) throw InputError("sample count must be positive");
  double total = 0.0, best = 0.0;
  for (int s = 0; s < samples; ++s) {
    auto gen = make_stream(seed, uint64_t(s));
    const EdgeList tree = draw(gen);
    const double c = tree_cost(inst, tree);
    total += c;
    best = s == 0 ? c : std::min(best, c);
  }
  std::printf("samples %d avg_tree %.6f min_tree %.6f\n", samples,
              total / samples, best);
  return 0;
}

int cmd_bom(const std::string& instance_path, const std::string& algorithm,
            int samples, uint64_t seed, int workers) {
  const Instance inst = load_instance(instance_path);
  ExperimentOptions opt;
  opt.algorithms = {algorithm};
  opt.samples = samples;
  opt.seed = seed;
  opt.workers = workers;
  const InstanceReport rep = run_instance(inst, opt);
  const AlgoReport& row = rep.algos.at(0);
  std::printf("instance %s n %d opt %.6f lp %.6f\n", rep.name.c_str(), rep.n,
              rep.optimum, rep.lp_value);
  std::printf("%s samples %d best %.6f avg %.6f\n", row.algorithm.c_str(),
              row.samples, row.best_cost, row.avg_cost);
  std::printf("best_err_pct %.4f avg_err_pct %.4f\n",
              100.0 * (row.best_cost - rep.optimum) / rep.optimum,
              100.0 * (row.avg_cost - rep.optimum) / rep.optimum);
  return 0;
}

int cmd_experiment(const std::string& config_path) {
  auto in = open_in(config_path);
  const ExperimentConfig cfg = parse_experiment_config(in);
  std::ostringstream csv;
  write_csv_header(csv);
  for (const auto& path : cfg.instance_paths) {
    const Instance inst = load_instance(path);
    std::fprintf(stderr, "running %s (n=%d)\n", inst.name.c_str(), inst.n);
    const InstanceReport rep = run_instance(inst, cfg.options);
    write_csv_rows(csv, rep);
  }
  if (cfg.csv_path.empty()) {
    std::fputs(csv.str().c_str(), stdout);
  } else {
    auto out = open_out(cfg.csv_path);
    out << csv.str();
    std::fprintf(stderr, "wrote %s\n", cfg.csv_path.c_str());
  }
  return 0;
}

int cmd_fixtures() {
  int failures = 0;
  const auto check = [&](const char* name, bool ok) {
    std::printf("%s %s\n", ok ? "PASS" : "FAIL", name);
    if (!ok) ++failures;
  };
  const WorstCaseFixture fx = worst_case_fixture();
  validate_subtour_vector(fx.inst, fx.lp);
  const SubtourSolution sol = solve_subtour(fx.inst);
  check("fixture lp value is exactly 4", std::abs(sol.objective - 4.0) < 1e-6);
  check("fixture optimal tour costs 4",
        std::abs(exact_optimum(fx.inst) - 4.0) < 1e-9);
  for (size_t i = 0; i < fx.one_trees.size(); ++i) {
    const double walk = min_walk_over_matchings(fx.inst, fx.one_trees[i]);
    std::string label = "1-tree " + std::to_string(i) +
                        " walk floor is 3/2 of the lp value";
    check(label.c_str(), walk >= 6.0 - 1e-9 && std::abs(walk - 6.0) < 1e-9);
  }
  return failures == 0 ? 0 : 1;
}

int cmd_exact(const std::string& instance_path) {
  const Instance inst = load_instance(instance_path);
  const double opt = exact_optimum(inst);
  std::printf("instance %s n %d exact %.6f\n", inst.name.c_str(), inst.n, opt);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subtour-LP tree decompositions and best-of-many Christofides"};
  app.require_subcommand(1);

  std::string instance_path, out_path, method = "colgen", combination_path;
  std::string tour_path, config_path, algorithm = "MaxEnt";
  uint64_t seed = 1;
  int samples = 200, workers = 1;
  bool to_optimality = false, use_maxent = false, use_swap = false;

  auto* subtour = app.add_subcommand("subtour", "solve the cycle relaxation");
  subtour->add_option("instance", instance_path)->required();
  subtour->add_option("-o,--out", out_path, "edge values file");

  auto* christo = app.add_subcommand("christofides", "tree + matching tour");
  christo->add_option("instance", instance_path)->required();
  christo->add_option("--seed", seed);
  christo->add_option("-o,--tour", tour_path, "tour file");

  auto* decomp = app.add_subcommand("decompose", "convex combination of trees");
  decomp->add_option("instance", instance_path)->required();
  decomp->add_option("-m,--method", method, "colgen or split");
  decomp->add_option("-o,--out", out_path, "combination file");
  decomp->add_option("--seed", seed);
  decomp->add_flag("--to-optimality", to_optimality);

  auto* sample = app.add_subcommand("sample", "draw spanning trees");
  sample->add_option("instance", instance_path)->required();
  sample->add_option("-c,--combination", combination_path);
  sample->add_flag("--maxent", use_maxent);
  sample->add_flag("--swap", use_swap, "fold the combination per draw");
  sample->add_option("-s,--samples", samples);
  sample->add_option("--seed", seed);

  auto* bom = app.add_subcommand("bom", "best-of-many Christofides");
  bom->add_option("instance", instance_path)->required();
  bom->add_option("-a,--algorithm", algorithm);
  bom->add_option("-s,--samples", samples);
  bom->add_option("--seed", seed);
  bom->add_option("--workers", workers);

  auto* experiment = app.add_subcommand("experiment", "table reproduction");
  experiment->add_option("config", config_path)->required();

  app.add_subcommand("fixtures", "built-in worst-case checks");

  auto* exact = app.add_subcommand("exact", "optimal tour by enumeration");
  exact->add_option("instance", instance_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (subtour->parsed()) return cmd_subtour(instance_path, out_path);
    if (christo->parsed()) return cmd_christofides(instance_path, seed, tour_path);
    if (decomp->parsed())
      return cmd_decompose(instance_path, method, out_path, seed, to_optimality);
    if (sample->parsed())
      return cmd_sample(instance_path, combination_path, use_maxent, use_swap,
                        samples, seed);
    if (bom->parsed())
      return cmd_bom(instance_path, algorithm, samples, seed, workers);
    if (experiment->parsed()) return cmd_experiment(config_path);
    if (app.get_subcommand("fixtures")->parsed()) return cmd_fixtures();
    if (exact->parsed()) return cmd_exact(instance_path);
  } catch (const InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const ContractViolation& e) {
    std::fprintf(stderr, "internal invariant broken: %s\n", e.what());
    return 3;
  }
  return 0;
}
