#pragma once

#include <limits>
#include <utility>
#include <vector>

namespace bomtsp {

constexpr double kLpInf = std::numeric_limits<double>::infinity();

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterLimit };

enum class RowSense { kLe, kGe, kEq };

// min (or max) obj.x  s.t.  per-row sense constraints, lo <= x <= up.
struct LpProblem {
  bool maximize = false;
  std::vector<double> obj, lo, up;
  std::vector<std::vector<std::pair<int, double>>> rows;  // (var, coef)
  std::vector<RowSense> sense;
  std::vector<double> rhs;

  int num_vars() const { return int(obj.size()); }
  int num_rows() const { return int(rhs.size()); }
  int add_var(double cost, double lower, double upper);
  int add_row(RowSense s, double rhs_value,
              std::vector<std::pair<int, double>> entries);
};

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;        // structural variables
  std::vector<double> duals;    // per row: d(objective)/d(rhs), problem sense
  std::vector<double> reduced;  // obj_j - sum_i duals_i a_ij
  int iterations = 0;
};

struct LpOptions {
  double opt_tol = 1e-9;
  double feas_tol = 1e-9;
  int refactor_every = 100;
  int stall_limit = 100;  // degenerate pivots before Bland's rule kicks in
  long iter_limit = 200000;
};

// Revised simplex over bounded variables with an explicit basis inverse.
// solve() runs two phases from scratch; add_column/add_row mutate the
// problem and keep the factorization so resolve() can continue warm
// (primal pivots after new columns, dual pivots after new rows).
class LpSolver {
 public:
  explicit LpSolver(LpProblem problem, LpOptions options = {});

  LpResult solve();
  LpResult resolve();

  int add_column(double cost, double lower, double upper,
                 const std::vector<std::pair<int, double>>& entries);
  int add_row(RowSense s, double rhs_value,
              const std::vector<std::pair<int, double>>& entries);

  const LpProblem& problem() const { return problem_; }
  long total_pivots() const { return total_pivots_; }
  int fallback_count() const { return fallbacks_; }

 private:
  struct Col {
    double cost = 0.0;  // minimization cost
    double lo = 0.0, up = 0.0;
    std::vector<std::pair<int, double>> a;
    bool artificial = false;
    bool frozen = false;  // artificial that left the basis for good
  };
  enum Place : unsigned char { kAtLo, kAtUp, kFree, kBasic };

  void build_columns();
  int struct_col(int v) const;
  void install_artificials();
  void factorize();
  void compute_basic_values();
  std::vector<double> multipliers(bool phase1) const;
  double reduced_cost(int j, const std::vector<double>& y, bool phase1) const;
  int price(const std::vector<double>& y, bool phase1, bool bland,
            int* direction) const;
  bool pivot(int entering, int direction, bool phase1, bool* progress);
  LpStatus primal_loop(bool phase1);
  LpStatus dual_loop();
  bool primal_feasible() const;
  bool dual_feasible() const;
  bool verify_optimal() const;
  LpResult extract(LpStatus status);
  double col_value(int j) const;

  LpProblem problem_;
  LpOptions opt_;
  std::vector<Col> cols_;       // structurals, then slacks, then artificials
  std::vector<int> struct_col_map_;  // problem var -> col (identity at start)
  std::vector<int> slack_of_;   // row -> slack col
  std::vector<int> art_of_;     // row -> artificial col
  std::vector<int> basis_;      // row position -> col
  std::vector<int> pos_in_basis_;  // col -> row position or -1
  std::vector<Place> place_;
  std::vector<double> value_;   // per col
  std::vector<double> binv_;    // m*m row-major
  int m_ = 0;
  bool factored_ = false;
  bool solved_once_ = false;
  long total_pivots_ = 0;
  long iters_this_solve_ = 0;
  int fallbacks_ = 0;
  int pivots_since_refactor_ = 0;
};

LpResult solve_lp(const LpProblem& problem, LpOptions options = {});

}  // namespace bomtsp
