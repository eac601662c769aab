#pragma once

#include <cstdint>
#include <vector>

#include "bomtsp/graph_util.hpp"
#include "bomtsp/instance.hpp"

namespace bomtsp {

struct ChristofidesResult {
  EdgeList tree;
  double tree_cost = 0.0;
  std::vector<int> odd;  // odd-degree vertices of the tree
  std::vector<std::pair<int, int>> matching;
  double matching_cost = 0.0;
  std::vector<int> tour;  // closed implicitly (tour.back() -> tour.front())
  double tour_cost = 0.0;
  double walk_cost = 0.0;  // tree + matching
};

// MST under the instance metric.  For graph instances a seeded perturbation
// below the integrality gap breaks ties among the many hop-metric MSTs, so
// different seeds explore different minimum spanning trees while the tree
// stays a true MST of the unperturbed metric.
EdgeList standard_mst(const Instance& inst, uint64_t seed = 0);

double tree_cost(const Instance& inst, const EdgeList& tree);

// Hierholzer's algorithm on a connected multigraph with all degrees even.
// Returns a closed vertex walk starting and ending at `start`.
std::vector<int> eulerian_circuit(int n, const EdgeList& edges, int start);

// Turns a closed walk into a tour over first occurrences, with a greedy
// improvement: when a vertex reappears, move it to the current tail if the
// append cost beats the cost of removing it from where it sits (ties keep
// the first occurrence; the walk's start vertex never moves).  The plainly
// shortcut tour is kept instead whenever it ends up cheaper.
std::vector<int> shortcut_walk(const Instance& inst, const std::vector<int>& walk);

// Tree + min-weight perfect matching on odd-degree vertices + Euler tour +
// shortcut.  The tree must span all vertices of the instance.
ChristofidesResult christofides_from_tree(const Instance& inst, const EdgeList& tree);

ChristofidesResult run_standard(const Instance& inst, uint64_t seed = 0);

}  // namespace bomtsp
