#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <sstream>

#include "bomtsp/christofides.hpp"
#include "bomtsp/decompose.hpp"
#include "bomtsp/errors.hpp"
#include "bomtsp/harness.hpp"
#include "bomtsp/instance.hpp"
#include "bomtsp/rng.hpp"
#include "bomtsp/sampling.hpp"
#include "bomtsp/subtour.hpp"

namespace py = pybind11;
using namespace bomtsp;

namespace {

std::string instance_repr(const Instance& inst) {
  std::ostringstream out;
  out << "Instance('" << inst.name << "', " << metric_kind_name(inst.kind)
      << ", n=" << inst.n << ")";
  return out.str();
}

ExperimentOptions make_options(const std::vector<std::string>& algorithms,
                               int samples, uint64_t seed, int workers,
                               bool colgen_to_optimality,
                               double maxent_epsilon) {
  ExperimentOptions opt;
  opt.algorithms = algorithms;
  opt.samples = samples;
  opt.seed = seed;
  opt.workers = workers;
  opt.colgen_to_optimality = colgen_to_optimality;
  opt.maxent_epsilon = maxent_epsilon;
  return opt;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spanning-tree combination heuristics for the symmetric TSP";
  m.attr("__version__") = "0.1.0";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_RuntimeError);
  py::register_exception<ContractViolation>(m, "ContractViolation",
                                            PyExc_RuntimeError);

  py::class_<Instance>(m, "Instance")
      .def_readonly("name", &Instance::name)
      .def_readonly("n", &Instance::n)
      .def_property_readonly(
          "kind", [](const Instance& i) { return metric_kind_name(i.kind); })
      .def_readonly("has_opt", &Instance::has_opt)
      .def_readonly("opt", &Instance::opt)
      .def_readonly("labels", &Instance::labels)
      .def("cost", &Instance::cost, py::arg("i"), py::arg("j"))
      .def("tour_cost", &Instance::tour_cost, py::arg("order"))
      .def("__repr__", &instance_repr);

  m.def("load_instance", &load_instance, py::arg("path"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<EdgeValues>(m, "EdgeValues")
      .def(py::init<>())
      .def_readwrite("n", &EdgeValues::n)
      .def_readonly("edges", &EdgeValues::edges)
      .def_readonly("values", &EdgeValues::values)
      .def("add", &EdgeValues::add, py::arg("u"), py::arg("v"),
           py::arg("value"))
      .def("sum", &EdgeValues::sum);

  py::class_<SubtourSolution>(m, "SubtourSolution")
      .def_readonly("x", &SubtourSolution::x)
      .def_readonly("objective", &SubtourSolution::objective)
      .def_readonly("cut_count", &SubtourSolution::cut_count)
      .def_readonly("price_rounds", &SubtourSolution::price_rounds)
      .def_readonly("lp_pivots", &SubtourSolution::lp_pivots);

  m.def(
      "solve_subtour",
      [](const Instance& inst) { return solve_subtour(inst); },
      py::arg("instance"), py::call_guard<py::gil_scoped_release>());
  m.def("scale_to_tree_polytope", &scale_to_tree_polytope, py::arg("x"));
  m.def("validate_subtour_vector", &validate_subtour_vector,
        py::arg("instance"), py::arg("x"), py::arg("tol") = 1e-6,
        py::arg("check_cuts") = true,
        py::call_guard<py::gil_scoped_release>());

  py::class_<ChristofidesResult>(m, "ChristofidesResult")
      .def_readonly("tree", &ChristofidesResult::tree)
      .def_readonly("tree_cost", &ChristofidesResult::tree_cost)
      .def_readonly("odd", &ChristofidesResult::odd)
      .def_readonly("matching", &ChristofidesResult::matching)
      .def_readonly("matching_cost", &ChristofidesResult::matching_cost)
      .def_readonly("tour", &ChristofidesResult::tour)
      .def_readonly("tour_cost", &ChristofidesResult::tour_cost)
      .def_readonly("walk_cost", &ChristofidesResult::walk_cost);

  m.def("run_standard", &run_standard, py::arg("instance"),
        py::arg("seed") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("christofides_from_tree", &christofides_from_tree,
        py::arg("instance"), py::arg("tree"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<TreeCombination>(m, "TreeCombination")
      .def_readonly("n", &TreeCombination::n)
      .def_readonly("trees", &TreeCombination::trees)
      .def_readonly("weights", &TreeCombination::weights)
      .def_readonly("from_split", &TreeCombination::from_split)
      .def_readonly("K", &TreeCombination::K)
      .def_readonly("leftover", &TreeCombination::leftover)
      .def_readonly("leftover_mult", &TreeCombination::leftover_mult)
      .def("coverage", &TreeCombination::coverage)
      .def("normalized_weights", &TreeCombination::normalized_weights);

  py::class_<ColgenResult>(m, "ColgenResult")
      .def_readonly("combo", &ColgenResult::combo)
      .def_readonly("objective", &ColgenResult::objective)
      .def_readonly("iterations", &ColgenResult::iterations)
      .def_readonly("reached_optimal", &ColgenResult::reached_optimal);

  m.def(
      "colgen_decompose",
      [](const EdgeValues& z, bool to_optimality, uint64_t seed) {
        ColgenOptions opt;
        opt.to_optimality = to_optimality;
        opt.seed = seed;
        return colgen_decompose(z, opt);
      },
      py::arg("z"), py::arg("to_optimality") = false, py::arg("seed") = 1,
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "split_decompose",
      [](const EdgeValues& x) { return split_decompose(x); }, py::arg("x"),
      py::call_guard<py::gil_scoped_release>());
  m.def("verify_combination", &verify_combination, py::arg("combo"),
        py::arg("target"), py::arg("tol") = 1e-6);

  py::class_<MaxEntResult>(m, "MaxEntResult")
      .def_readonly("gamma", &MaxEntResult::gamma)
      .def_readonly("lam", &MaxEntResult::lambda)
      .def_readonly("marginals", &MaxEntResult::marginals)
      .def_readonly("sweeps", &MaxEntResult::sweeps)
      .def_readonly("max_ratio", &MaxEntResult::max_ratio)
      .def_readonly("converged", &MaxEntResult::converged);

  m.def(
      "fit_max_entropy",
      [](const EdgeValues& z, double epsilon, int max_sweeps) {
        MaxEntOptions opt;
        opt.epsilon = epsilon;
        opt.max_sweeps = max_sweeps;
        return fit_max_entropy(z, opt);
      },
      py::arg("z"), py::arg("epsilon") = 0.01, py::arg("max_sweeps") = 10000,
      py::call_guard<py::gil_scoped_release>());
  m.def("tree_marginals", &tree_marginals, py::arg("n"), py::arg("edges"),
        py::arg("lam"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "sample_tree",
      [](int n, const EdgeList& edges, const std::vector<double>& lam,
         uint64_t seed) {
        auto gen = make_stream(seed, 0);
        return sample_tree_walk(n, edges, lam, gen);
      },
      py::arg("n"), py::arg("edges"), py::arg("lam"), py::arg("seed") = 1,
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "swap_round",
      [](const TreeCombination& combo, uint64_t seed) {
        auto gen = make_stream(seed, 0);
        return swap_round(combo, gen);
      },
      py::arg("combo"), py::arg("seed") = 1,
      py::call_guard<py::gil_scoped_release>());

  m.def("exact_optimum", &exact_optimum, py::arg("instance"),
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "branch_bound_optimum",
      [](const Instance& inst, double time_limit_s, long node_limit) {
        BranchBoundOptions opt;
        opt.time_limit_s = time_limit_s;
        opt.node_limit = node_limit;
        return branch_bound_optimum(inst, opt);
      },
      py::arg("instance"), py::arg("time_limit_s") = 900.0,
      py::arg("node_limit") = 5'000'000,
      py::call_guard<py::gil_scoped_release>());
  m.def("local_search_tour", &local_search_tour, py::arg("instance"),
        py::arg("tour"), py::call_guard<py::gil_scoped_release>());
  m.def("degree_histogram", &degree_histogram, py::arg("n"), py::arg("tree"),
        py::arg("cap") = 8);
  m.def("min_walk_over_matchings", &min_walk_over_matchings,
        py::arg("instance"), py::arg("edges"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<WorstCaseFixture>(m, "WorstCaseFixture")
      .def_readonly("inst", &WorstCaseFixture::inst)
      .def_readonly("lp", &WorstCaseFixture::lp)
      .def_readonly("one_trees", &WorstCaseFixture::one_trees);
  m.def("worst_case_fixture", &worst_case_fixture);

  py::class_<AlgoReport>(m, "AlgoReport")
      .def_readonly("algorithm", &AlgoReport::algorithm)
      .def_readonly("samples", &AlgoReport::samples)
      .def_readonly("best_cost", &AlgoReport::best_cost)
      .def_readonly("avg_cost", &AlgoReport::avg_cost)
      .def_readonly("avg_tree", &AlgoReport::avg_tree)
      .def_readonly("avg_match", &AlgoReport::avg_match)
      .def_readonly("avg_odd_frac", &AlgoReport::avg_odd_frac)
      .def_readonly("avg_match_edge", &AlgoReport::avg_match_edge)
      .def_readonly("wall_s", &AlgoReport::wall_s);

  py::class_<InstanceReport>(m, "InstanceReport")
      .def_readonly("name", &InstanceReport::name)
      .def_readonly("n", &InstanceReport::n)
      .def_readonly("optimum", &InstanceReport::optimum)
      .def_readonly("lp_value", &InstanceReport::lp_value)
      .def_readonly("algos", &InstanceReport::algos);

  m.def(
      "run_instance",
      [](const Instance& inst, const std::vector<std::string>& algorithms,
         int samples, uint64_t seed, int workers, bool colgen_to_optimality,
         double maxent_epsilon) {
        return run_instance(inst, make_options(algorithms, samples, seed,
                                               workers, colgen_to_optimality,
                                               maxent_epsilon));
      },
      py::arg("instance"), py::arg("algorithms") = std::vector<std::string>{},
      py::arg("samples") = 200, py::arg("seed") = 1, py::arg("workers") = 1,
      py::arg("colgen_to_optimality") = false,
      py::arg("maxent_epsilon") = 0.01,
      py::call_guard<py::gil_scoped_release>());
  m.def("algorithms", [] { return kAllAlgorithms; });
}
