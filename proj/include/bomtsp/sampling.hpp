#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "bomtsp/christofides.hpp"
#include "bomtsp/decompose.hpp"
#include "bomtsp/edge_values.hpp"

namespace bomtsp {

// P[e in T] for a lambda-weighted random spanning tree, one value per input
// edge, computed as lambda_e times the effective resistance of e in the
// lambda-weighted graph.  The values sum to n - 1.
std::vector<double> tree_marginals(int n, const EdgeList& edges,
                                   const std::vector<double>& lambda);

struct MaxEntOptions {
  double epsilon = 0.01;  // accept once every marginal <= (1 + eps) * z_e
  int max_sweeps = 10000;
};

struct MaxEntResult {
  EdgeValues gamma;  // log edge weights over the support of z
  std::vector<double> lambda;
  std::vector<double> marginals;
  int sweeps = 0;
  double max_ratio = 0.0;  // max_e marginal_e / z_e at exit
  bool converged = false;
};

// Fits log-weights gamma so the lambda-random tree marginals approach z
// edge-wise from above, by repeatedly damping edges whose marginal
// overshoots the target (1 + eps/2) * z_e.
MaxEntResult fit_max_entropy(const EdgeValues& z, MaxEntOptions opt = {});

// Exact lambda-weighted random spanning tree via loop-erased random walk.
EdgeList sample_tree_walk(int n, const EdgeList& edges,
                          const std::vector<double>& lambda,
                          std::mt19937_64& gen);

// Same distribution, by sequential conditioning: accept each edge with
// probability lambda_e * R_eff, then contract or delete.  Quadratic-ish in
// the graph size per marginal refresh; meant for cross-checking the walk
// sampler on small graphs.
EdgeList sample_tree_exact(int n, const EdgeList& edges,
                           const std::vector<double>& lambda,
                           std::mt19937_64& gen);

// One random basis exchange chain: repeatedly moves a private edge of one
// tree into the other (picking the receiving side with probability
// proportional to its weight) until the trees coincide.
EdgeList merge_basis(int n, EdgeList t1, double w1, EdgeList t2, double w2,
                     std::mt19937_64& gen);

// Rounds a convex combination of spanning trees to a single random tree
// whose edge marginals equal the combination's and whose indicator
// variables are negatively correlated.
EdgeList swap_round(const TreeCombination& combo, std::mt19937_64& gen);

// Weight-proportional draw of one of the combination's trees.
EdgeList draw_combination_tree(const TreeCombination& combo,
                               std::mt19937_64& gen);

using TreeDrawer = std::function<EdgeList(std::mt19937_64&)>;

struct SampleStats {
  double tour_cost = 0.0;
  double tree_cost = 0.0;
  double match_cost = 0.0;
  int odd_count = 0;
};

struct BomResult {
  std::vector<SampleStats> samples;
  std::vector<int> best_tour;
  double best_cost = 0.0;
  int best_index = -1;
};

// Runs Christofides on `num_samples` drawn trees.  Sample s always uses the
// RNG substream (seed, s), so results do not depend on the worker count.
BomResult best_of_many(const Instance& inst, const TreeDrawer& draw,
                       int num_samples, uint64_t seed, int workers = 1);

}  // namespace bomtsp
