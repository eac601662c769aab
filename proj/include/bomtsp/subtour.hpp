#pragma once

#include "bomtsp/edge_values.hpp"
#include "bomtsp/instance.hpp"

namespace bomtsp {

struct SubtourOptions {
  double cut_tol = 1e-6;      // minimum cut violation worth a new row
  double price_tol = 1e-7;    // reduced-cost threshold for new edge columns
  double support_tol = 1e-9;  // x_e above this belongs to the support
  int knn = 10;               // initial sparse candidate neighborhood
  int max_rounds = 10000;
};

struct SubtourSolution {
  EdgeValues x;           // support of the optimal LP solution
  double objective = 0.0;
  int cut_count = 0;      // subtour rows generated
  int price_rounds = 0;   // full pricing passes that added columns
  long lp_pivots = 0;
};

// Optimal solution of the cycle relaxation: degree 2 at every vertex,
// x(cut(S)) >= 2 for proper subsets, 0 <= x <= 1.  Cutting planes come from
// exact global min-cut separation; optimality over the complete edge set is
// certified by a final pricing pass over all pairs.
SubtourSolution solve_subtour(const Instance& inst, SubtourOptions opt = {});

// (n-1)/n scaling that carries the cycle relaxation into the spanning tree
// polytope.
EdgeValues scale_to_tree_polytope(const EdgeValues& x);

// Degree-2 and bound checks for an externally supplied vector (cut
// feasibility is checked exactly via min cut when `check_cuts`).
void validate_subtour_vector(const Instance& inst, const EdgeValues& x,
                             double tol = 1e-6, bool check_cuts = true);

}  // namespace bomtsp
