#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bomtsp/decompose.hpp"
#include "bomtsp/instance.hpp"
#include "bomtsp/sampling.hpp"
#include "bomtsp/subtour.hpp"

namespace bomtsp {

// Exact optimal tour cost by bitmask dynamic programming.  Limited to 18
// cities; larger instances need a precomputed optimum.
double exact_optimum(const Instance& inst);

// 2-opt reversals plus relocation of segments of length 1..3, first
// improvement, repeated until a full pass finds nothing.
std::vector<int> local_search_tour(const Instance& inst, std::vector<int> tour);

struct BranchBoundOptions {
  double time_limit_s = 900.0;
  long node_limit = 5'000'000;
};

// Exact optimum by branch and bound under the 1-tree bound with subgradient
// ascent, binary edge branching, and degree/path fixing inference.  Throws
// NumericalError when a limit is hit before the search space is exhausted.
double branch_bound_optimum(const Instance& inst, BranchBoundOptions opt = {});

// counts[d] = number of vertices of degree d in the tree, for d <= cap;
// degrees above cap land in counts[cap].
std::vector<int> degree_histogram(int n, const EdgeList& tree, int cap = 8);

// A 6-city metric whose subtour LP optimum costs 4 and admits a convex
// combination of two 1-trees (weight 1/2 each) where the odd-degree sets
// force a matching of cost 2, so every tree+matching walk costs at least
// 3/2 times the LP value even though a cost-4 tour exists.
struct WorstCaseFixture {
  Instance inst;
  EdgeValues lp;                    // the half-integral LP optimum
  std::vector<EdgeList> one_trees;  // two 1-trees, weight 1/2 each
};
WorstCaseFixture worst_case_fixture();

// Minimum tree+matching walk cost over every perfect matching of the
// edge set's odd-degree vertices, by exhaustive enumeration.
double min_walk_over_matchings(const Instance& inst, const EdgeList& edges);

struct AlgoReport {
  std::string algorithm;
  int samples = 0;
  double best_cost = 0.0;
  double avg_cost = 0.0;
  double avg_tree = 0.0;
  double avg_match = 0.0;
  double avg_odd_frac = 0.0;        // odd vertices / n
  double avg_match_edge = 0.0;      // matching cost per matching edge
  double wall_s = 0.0;
};

struct InstanceReport {
  std::string name;
  int n = 0;
  double optimum = 0.0;
  double lp_value = 0.0;
  double lp_wall_s = 0.0;
  std::vector<AlgoReport> algos;
};

extern const std::vector<std::string> kAllAlgorithms;

struct ExperimentOptions {
  std::vector<std::string> algorithms;  // empty = all
  int samples = 200;
  uint64_t seed = 1;
  int workers = 1;
  bool colgen_to_optimality = false;
  double maxent_epsilon = 0.01;
  int maxent_sweeps = 10000;
};

// Solves the subtour LP once, then runs the requested algorithms.  The
// explicit-combination rows (ColGen, Split) sweep the decomposition's trees
// deterministically with weight-proportional averaging; the sampling rows
// draw `samples` trees on substreams derived from (seed, sample index).
InstanceReport run_instance(const Instance& inst, const ExperimentOptions& opt);

void write_csv_header(std::ostream& out);
void write_csv_rows(std::ostream& out, const InstanceReport& rep);

struct ExperimentConfig {
  std::vector<std::string> instance_paths;
  std::string csv_path;
  ExperimentOptions options;
};

// Flat key=value lines; '#' starts a comment.  Keys: instance (repeatable),
// csv, algorithms (comma-separated), samples, seed, workers,
// colgen_to_optimality, maxent_epsilon, maxent_sweeps.
ExperimentConfig parse_experiment_config(std::istream& in);

}  // namespace bomtsp
