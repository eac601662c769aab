#pragma once

#include <cstdint>
#include <iosfwd>

#include "bomtsp/edge_values.hpp"

namespace bomtsp {

// A weighted collection of spanning trees.  Column generation produces
// weights y_T with sum <= 1 dominated by its target z edge-wise; splitting
// off produces exactly K trees of weight 1/K (stored deduplicated) plus a
// leftover edge multiset with (sum_T chi_T + leftover) / K equal to the
// target x edge-wise.
struct TreeCombination {
  int n = 0;
  std::vector<EdgeList> trees;
  std::vector<double> weights;
  bool from_split = false;
  long long K = 0;
  EdgeList leftover;
  std::vector<long long> leftover_mult;

  double coverage() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
  std::vector<double> normalized_weights() const;
};

void write_combination(std::ostream& out, const Instance& inst,
                       const TreeCombination& combo);
TreeCombination parse_combination(std::istream& in, const Instance& inst);

// Checks tree validity, weight sanity, and the covering identity:
// dominance (colgen) or exact equality including leftover (split).
void verify_combination(const TreeCombination& combo, const EdgeValues& target,
                        double tol = 1e-6);

struct ColgenOptions {
  int initial_columns = 30;
  double drop = 0.1;   // stop when the objective fell less than this ...
  int window = 100;    // ... over this many recent iterations
  int max_iters = 20000;
  double tol = 1e-7;
  bool to_optimality = false;  // ignore the drop rule
  uint64_t seed = 1;
};

struct ColgenResult {
  TreeCombination combo;
  double objective = 0.0;  // final uncovered mass, sum of slacks
  int iterations = 0;
  bool reached_optimal = false;
};

// Master LP  min sum_e s_e  s.t.  sum_T y_T chi_T(e) + s_e = z_e, y,s >= 0,
// priced by maximum-weight spanning trees under the row duals.
ColgenResult colgen_decompose(const EdgeValues& z, ColgenOptions opt = {});

struct SplitOptions {
  long long max_denominator = 10000;
  double rational_tol = 1e-7;
  int64_t flow_guard = 64;  // split attempts per pendant before giving up
};

// Rationalizes x to multiplicities over a common denominator K, performs a
// complete splitting-off at all but two vertices (preserving pairwise
// connectivity 2K), and lifts the trivial tree packing of the final
// two-vertex multigraph back through the splits in reverse.
TreeCombination split_decompose(const EdgeValues& x, SplitOptions opt = {});

}  // namespace bomtsp
