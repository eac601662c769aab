#include "bomtsp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "bomtsp/errors.hpp"

namespace bomtsp {

int LpProblem::add_var(double cost, double lower, double upper) {
  obj.push_back(cost);
  lo.push_back(lower);
  up.push_back(upper);
  return int(obj.size()) - 1;
}

int LpProblem::add_row(RowSense s, double rhs_value,
                       std::vector<std::pair<int, double>> entries) {
  rows.push_back(std::move(entries));
  sense.push_back(s);
  rhs.push_back(rhs_value);
  return int(rhs.size()) - 1;
}

LpSolver::LpSolver(LpProblem problem, LpOptions options)
    : problem_(std::move(problem)), opt_(options) {
  build_columns();
}

void LpSolver::build_columns() {
  const int nv = problem_.num_vars();
  m_ = problem_.num_rows();
  cols_.resize(nv);
  for (int j = 0; j < nv; ++j) {
    cols_[j].cost = problem_.maximize ? -problem_.obj[j] : problem_.obj[j];
    cols_[j].lo = problem_.lo[j];
    cols_[j].up = problem_.up[j];
  }
  for (int r = 0; r < m_; ++r)
    for (auto [v, coef] : problem_.rows[r]) cols_[v].a.emplace_back(r, coef);
  struct_col_map_.resize(nv);
  for (int j = 0; j < nv; ++j) struct_col_map_[j] = j;

  slack_of_.resize(m_);
  art_of_.assign(m_, -1);
  for (int r = 0; r < m_; ++r) {
    Col slack;
    slack.a = {{r, 1.0}};
    switch (problem_.sense[r]) {
      case RowSense::kLe: slack.lo = 0.0; slack.up = kLpInf; break;
      case RowSense::kGe: slack.lo = -kLpInf; slack.up = 0.0; break;
      case RowSense::kEq: slack.lo = 0.0; slack.up = 0.0; break;
    }
    slack_of_[r] = int(cols_.size());
    cols_.push_back(std::move(slack));
  }
  place_.assign(cols_.size(), kAtLo);
  value_.assign(cols_.size(), 0.0);
  pos_in_basis_.assign(cols_.size(), -1);
}

int LpSolver::add_column(double cost, double lower, double upper,
                         const std::vector<std::pair<int, double>>& entries) {
  const int v = problem_.add_var(cost, lower, upper);
  for (auto [r, coef] : entries) problem_.rows[r].emplace_back(v, coef);
  Col col;
  col.cost = problem_.maximize ? -cost : cost;
  col.lo = lower;
  col.up = upper;
  col.a = entries;
  std::sort(col.a.begin(), col.a.end());
  const int j = int(cols_.size());
  cols_.push_back(std::move(col));
  pos_in_basis_.push_back(-1);
  // Nonbasic at the finite bound closest to zero so the basis stays feasible.
  double val;
  Place pl;
  if (lower > -kLpInf && upper < kLpInf)
    pl = std::abs(lower) <= std::abs(upper) ? kAtLo : kAtUp, val = pl == kAtLo ? lower : upper;
  else if (lower > -kLpInf)
    pl = kAtLo, val = lower;
  else if (upper < kLpInf)
    pl = kAtUp, val = upper;
  else
    pl = kFree, val = 0.0;
  place_.push_back(pl);
  value_.push_back(val);
  struct_col_map_.push_back(j);
  return v;
}

int LpSolver::add_row(RowSense s, double rhs_value,
                      const std::vector<std::pair<int, double>>& entries) {
  const int r = problem_.add_row(s, rhs_value, entries);
  for (auto [v, coef] : entries) {
    const int cj = struct_col(v);
    cols_[cj].a.emplace_back(r, coef);
  }
  Col slack;
  slack.a = {{r, 1.0}};
  switch (s) {
    case RowSense::kLe: slack.lo = 0.0; slack.up = kLpInf; break;
    case RowSense::kGe: slack.lo = -kLpInf; slack.up = 0.0; break;
    case RowSense::kEq: slack.lo = 0.0; slack.up = 0.0; break;
  }
  const int sj = int(cols_.size());
  cols_.push_back(std::move(slack));
  slack_of_.push_back(sj);
  art_of_.push_back(-1);
  place_.push_back(kAtLo);
  value_.push_back(0.0);
  pos_in_basis_.push_back(-1);
  m_ = problem_.num_rows();

  if (!factored_) return r;

  // Extend the factorization: the new slack joins the basis, so
  //   Bnew = [B 0; aB 1]  and  Bnew^-1 = [Binv 0; -aB.Binv 1].
  const int old_m = m_ - 1;
  std::vector<double> nb(size_t(m_) * m_, 0.0);
  for (int i = 0; i < old_m; ++i)
    std::memcpy(&nb[size_t(i) * m_], &binv_[size_t(i) * old_m], sizeof(double) * old_m);
  std::vector<double> arow(old_m, 0.0);  // new-row coefs on current basics
  for (auto [v, coef] : entries) {
    const int cj = struct_col(v);
    if (pos_in_basis_[cj] >= 0) arow[pos_in_basis_[cj]] += coef;
  }
  for (int i = 0; i < old_m; ++i) {
    double acc = 0.0;
    for (int k = 0; k < old_m; ++k) acc += arow[k] * nb[size_t(k) * m_ + i];
    nb[size_t(old_m) * m_ + i] = -acc;
  }
  nb[size_t(old_m) * m_ + old_m] = 1.0;
  binv_ = std::move(nb);
  basis_.push_back(sj);
  pos_in_basis_[sj] = old_m;
  place_[sj] = kBasic;
  double act = 0.0;
  for (auto [v, coef] : entries) act += coef * value_[struct_col(v)];
  value_[sj] = rhs_value - act;
  return r;
}

int LpSolver::struct_col(int v) const { return struct_col_map_[v]; }

void LpSolver::install_artificials() {
  std::vector<double> r(problem_.rhs);
  for (int j = 0; j < int(cols_.size()); ++j) {
    Col& c = cols_[j];
    if (c.artificial) continue;
    pos_in_basis_[j] = -1;
    if (c.lo > -kLpInf && c.up < kLpInf)
      place_[j] = std::abs(c.lo) <= std::abs(c.up) ? kAtLo : kAtUp;
    else if (c.lo > -kLpInf)
      place_[j] = kAtLo;
    else if (c.up < kLpInf)
      place_[j] = kAtUp;
    else
      place_[j] = kFree;
    value_[j] = place_[j] == kAtLo ? c.lo : place_[j] == kAtUp ? c.up : 0.0;
    if (value_[j] != 0.0)
      for (auto [row, coef] : c.a) r[row] -= coef * value_[j];
  }
  basis_.assign(m_, -1);
  binv_.assign(size_t(m_) * m_, 0.0);
  for (int i = 0; i < m_; ++i) {
    const double sign = r[i] >= 0.0 ? 1.0 : -1.0;
    int aj = art_of_[i];
    if (aj < 0) {
      aj = int(cols_.size());
      cols_.push_back(Col{});
      place_.push_back(kBasic);
      value_.push_back(0.0);
      pos_in_basis_.push_back(-1);
      art_of_[i] = aj;
    }
    Col& art = cols_[aj];
    art.artificial = true;
    art.frozen = false;
    art.cost = 0.0;
    art.lo = 0.0;
    art.up = kLpInf;
    art.a = {{i, sign}};
    basis_[i] = aj;
    pos_in_basis_[aj] = i;
    place_[aj] = kBasic;
    value_[aj] = std::abs(r[i]);
    binv_[size_t(i) * m_ + i] = sign;
  }
  factored_ = true;
  pivots_since_refactor_ = 0;
}

void LpSolver::factorize() {
  // Dense Gauss-Jordan on [B | I] with partial pivoting.
  std::vector<double> mat(size_t(m_) * m_, 0.0);
  for (int k = 0; k < m_; ++k)
    for (auto [row, coef] : cols_[basis_[k]].a) mat[size_t(row) * m_ + k] = coef;
  std::vector<double> inv(size_t(m_) * m_, 0.0);
  for (int i = 0; i < m_; ++i) inv[size_t(i) * m_ + i] = 1.0;
  for (int c = 0; c < m_; ++c) {
    int piv = c;
    double best = std::abs(mat[size_t(c) * m_ + c]);
    for (int i = c + 1; i < m_; ++i) {
      const double v = std::abs(mat[size_t(i) * m_ + c]);
      if (v > best) best = v, piv = i;
    }
    if (best < 1e-11) throw NumericalError("singular basis");
    if (piv != c) {
      for (int j = 0; j < m_; ++j) {
        std::swap(mat[size_t(piv) * m_ + j], mat[size_t(c) * m_ + j]);
        std::swap(inv[size_t(piv) * m_ + j], inv[size_t(c) * m_ + j]);
      }
    }
    const double d = 1.0 / mat[size_t(c) * m_ + c];
    for (int j = 0; j < m_; ++j) {
      mat[size_t(c) * m_ + j] *= d;
      inv[size_t(c) * m_ + j] *= d;
    }
    for (int i = 0; i < m_; ++i) {
      if (i == c) continue;
      const double f = mat[size_t(i) * m_ + c];
      if (f == 0.0) continue;
      for (int j = 0; j < m_; ++j) {
        mat[size_t(i) * m_ + j] -= f * mat[size_t(c) * m_ + j];
        inv[size_t(i) * m_ + j] -= f * inv[size_t(c) * m_ + j];
      }
    }
  }
  // Row i of inv now holds row i of B^-1 in the *reordered* frame; the
  // Gauss-Jordan above eliminates columns of B in place, so inv is B^-1
  // directly (B.inv = I column-wise).
  binv_ = std::move(inv);
  pivots_since_refactor_ = 0;
}

void LpSolver::compute_basic_values() {
  std::vector<double> r(problem_.rhs);
  for (int j = 0; j < int(cols_.size()); ++j) {
    if (pos_in_basis_[j] >= 0 || value_[j] == 0.0) continue;
    for (auto [row, coef] : cols_[j].a) r[row] -= coef * value_[j];
  }
  for (int k = 0; k < m_; ++k) {
    double acc = 0.0;
    const double* bi = &binv_[size_t(k) * m_];
    for (int i = 0; i < m_; ++i) acc += bi[i] * r[i];
    value_[basis_[k]] = acc;
  }
}

std::vector<double> LpSolver::multipliers(bool phase1) const {
  std::vector<double> y(m_, 0.0);
  for (int k = 0; k < m_; ++k) {
    const Col& c = cols_[basis_[k]];
    const double cost = phase1 ? (c.artificial ? 1.0 : 0.0) : c.cost;
    if (cost == 0.0) continue;
    const double* bi = &binv_[size_t(k) * m_];
    for (int i = 0; i < m_; ++i) y[i] += cost * bi[i];
  }
  return y;
}

double LpSolver::reduced_cost(int j, const std::vector<double>& y,
                              bool phase1) const {
  const Col& c = cols_[j];
  double d = phase1 ? (c.artificial ? 1.0 : 0.0) : c.cost;
  for (auto [row, coef] : c.a) d -= y[row] * coef;
  return d;
}

int LpSolver::price(const std::vector<double>& y, bool phase1, bool bland,
                    int* direction) const {
  int best = -1, best_dir = 0;
  double best_score = 0.0;
  for (int j = 0; j < int(cols_.size()); ++j) {
    const Col& c = cols_[j];
    if (pos_in_basis_[j] >= 0 || c.frozen) continue;
    if (c.lo == c.up) continue;
    if (!phase1 && c.artificial) continue;
    const double d = reduced_cost(j, y, phase1);
    const double tol = opt_.opt_tol * (1.0 + std::abs(phase1 ? 1.0 : c.cost));
    int dir = 0;
    if (place_[j] == kAtLo && d < -tol) dir = +1;
    else if (place_[j] == kAtUp && d > tol) dir = -1;
    else if (place_[j] == kFree && std::abs(d) > tol) dir = d > 0 ? -1 : +1;
    if (dir == 0) continue;
    if (bland) {
      *direction = dir;
      return j;
    }
    if (std::abs(d) > best_score) {
      best_score = std::abs(d);
      best = j;
      best_dir = dir;
    }
  }
  *direction = best_dir;
  return best;
}

bool LpSolver::pivot(int entering, int direction, bool phase1, bool* progress) {
  (void)phase1;
  const Col& ec = cols_[entering];
  std::vector<double> w(m_, 0.0);
  for (auto [row, coef] : ec.a)
    for (int k = 0; k < m_; ++k) w[k] += binv_[size_t(k) * m_ + row] * coef;

  const double span = ec.up - ec.lo;  // may be inf
  double t_best = span;
  int block = -1;
  double block_w = 0.0;
  for (int k = 0; k < m_; ++k) {
    const double wk = direction * w[k];
    if (std::abs(wk) <= 1e-10) continue;
    const int i = basis_[k];
    double t;
    if (wk > 0.0) {
      if (cols_[i].lo <= -kLpInf) continue;
      t = (value_[i] - cols_[i].lo) / wk;
    } else {
      if (cols_[i].up >= kLpInf) continue;
      t = (value_[i] - cols_[i].up) / wk;
    }
    if (t < 0.0) t = 0.0;
    if (t < t_best - 1e-12 ||
        (t < t_best + 1e-12 && (block < 0 || std::abs(w[k]) > std::abs(block_w)))) {
      t_best = t;
      block = k;
      block_w = w[k];
    }
  }

  if (t_best >= kLpInf) return false;  // unbounded ray

  *progress = t_best > 1e-12;
  if (block < 0) {
    // Bound flip: the entering variable crosses to its other bound.
    for (int k = 0; k < m_; ++k)
      value_[basis_[k]] -= direction * t_best * w[k];
    value_[entering] = direction > 0 ? ec.up : ec.lo;
    place_[entering] = direction > 0 ? kAtUp : kAtLo;
    return true;
  }

  const int leaving = basis_[block];
  for (int k = 0; k < m_; ++k)
    value_[basis_[k]] -= direction * t_best * w[k];
  value_[entering] =
      (place_[entering] == kAtLo ? ec.lo : place_[entering] == kAtUp ? ec.up : 0.0) +
      direction * t_best;
  // Snap the leaving variable to the bound it hit.
  const double lw = direction * block_w;
  if (lw > 0.0) {
    value_[leaving] = cols_[leaving].lo;
    place_[leaving] = kAtLo;
  } else {
    value_[leaving] = cols_[leaving].up;
    place_[leaving] = kAtUp;
  }
  pos_in_basis_[leaving] = -1;
  if (cols_[leaving].artificial) {
    cols_[leaving].frozen = true;
    cols_[leaving].lo = cols_[leaving].up = 0.0;
    value_[leaving] = 0.0;
    place_[leaving] = kAtLo;
  }
  basis_[block] = entering;
  pos_in_basis_[entering] = block;
  place_[entering] = kBasic;

  // Product-form update of B^-1.
  const double piv = w[block];
  double* rb = &binv_[size_t(block) * m_];
  const double inv_piv = 1.0 / piv;
  for (int i = 0; i < m_; ++i) rb[i] *= inv_piv;
  for (int k = 0; k < m_; ++k) {
    if (k == block) continue;
    const double f = w[k];
    if (f == 0.0) continue;
    double* rk = &binv_[size_t(k) * m_];
    for (int i = 0; i < m_; ++i) rk[i] -= f * rb[i];
  }
  ++total_pivots_;
  ++iters_this_solve_;
  if (++pivots_since_refactor_ >= opt_.refactor_every) {
    factorize();
    compute_basic_values();
  }
  return true;
}

LpStatus LpSolver::primal_loop(bool phase1) {
  int stall = 0;
  bool bland = false;
  while (iters_this_solve_ < opt_.iter_limit) {
    const auto y = multipliers(phase1);
    int dir = 0;
    const int j = price(y, phase1, bland, &dir);
    if (j < 0) return LpStatus::kOptimal;
    bool progress = false;
    if (!pivot(j, dir, phase1, &progress)) return LpStatus::kUnbounded;
    if (progress) {
      stall = 0;
      bland = false;
    } else if (++stall > opt_.stall_limit) {
      bland = true;
    }
  }
  return LpStatus::kIterLimit;
}

LpStatus LpSolver::dual_loop() {
  int stall = 0;
  bool bland = false;
  const auto feas_eps = [&](int j) {
    return opt_.feas_tol * (1.0 + std::abs(value_[j]));
  };
  while (iters_this_solve_ < opt_.iter_limit) {
    int worst = -1;
    double worst_viol = 0.0;
    for (int k = 0; k < m_; ++k) {
      const int i = basis_[k];
      const double v = value_[i];
      double viol = 0.0;
      if (v < cols_[i].lo - feas_eps(i)) viol = cols_[i].lo - v;
      else if (v > cols_[i].up + feas_eps(i)) viol = v - cols_[i].up;
      if (viol > worst_viol) {
        worst_viol = viol;
        worst = k;
      }
    }
    if (worst < 0) return LpStatus::kOptimal;

    const int li = basis_[worst];
    const bool need_increase = value_[li] < cols_[li].lo;
    const double* beta = &binv_[size_t(worst) * m_];
    const auto y = multipliers(false);

    int enter = -1, enter_dir = 0;
    double best_ratio = kLpInf, best_alpha = 0.0;
    for (int j = 0; j < int(cols_.size()); ++j) {
      const Col& c = cols_[j];
      if (pos_in_basis_[j] >= 0 || c.frozen || c.artificial) continue;
      if (c.lo == c.up) continue;
      double alpha = 0.0;
      for (auto [row, coef] : c.a) alpha += beta[row] * coef;
      if (std::abs(alpha) <= 1e-10) continue;
      int dir;
      if (place_[j] == kAtLo) dir = +1;
      else if (place_[j] == kAtUp) dir = -1;
      else dir = need_increase ? (alpha > 0 ? -1 : +1) : (alpha > 0 ? +1 : -1);
      const double da = dir * alpha;
      if (need_increase ? da >= -1e-10 : da <= 1e-10) continue;
      const double d = reduced_cost(j, y, false);
      const double ratio = std::abs(d) / std::abs(alpha);
      const bool better = bland ? (enter < 0) : (ratio < best_ratio - 1e-12 ||
                          (ratio < best_ratio + 1e-12 && std::abs(alpha) > std::abs(best_alpha)));
      if (better) {
        enter = j;
        enter_dir = dir;
        best_ratio = ratio;
        best_alpha = alpha;
        if (bland) break;
      }
    }
    if (enter < 0) return LpStatus::kInfeasible;

    std::vector<double> w(m_, 0.0);
    for (auto [row, coef] : cols_[enter].a)
      for (int k = 0; k < m_; ++k) w[k] += binv_[size_t(k) * m_ + row] * coef;
    const double bound = need_increase ? cols_[li].lo : cols_[li].up;
    const double t = (value_[li] - bound) / (enter_dir * w[worst]);
    if (!(t >= 0.0) || t >= kLpInf) return LpStatus::kIterLimit;

    for (int k = 0; k < m_; ++k)
      value_[basis_[k]] -= enter_dir * t * w[k];
    const Col& ec = cols_[enter];
    value_[enter] =
        (place_[enter] == kAtLo ? ec.lo : place_[enter] == kAtUp ? ec.up : 0.0) +
        enter_dir * t;
    value_[li] = bound;
    place_[li] = need_increase ? kAtLo : kAtUp;
    pos_in_basis_[li] = -1;
    basis_[worst] = enter;
    pos_in_basis_[enter] = worst;
    place_[enter] = kBasic;

    const double piv = w[worst];
    double* rb = &binv_[size_t(worst) * m_];
    const double inv_piv = 1.0 / piv;
    for (int i = 0; i < m_; ++i) rb[i] *= inv_piv;
    for (int k = 0; k < m_; ++k) {
      if (k == worst) continue;
      const double f = w[k];
      if (f == 0.0) continue;
      double* rk = &binv_[size_t(k) * m_];
      for (int i = 0; i < m_; ++i) rk[i] -= f * rb[i];
    }
    ++total_pivots_;
    ++iters_this_solve_;
    if (t <= 1e-12) {
      if (++stall > opt_.stall_limit) bland = true;
    } else {
      stall = 0;
      bland = false;
    }
    if (++pivots_since_refactor_ >= opt_.refactor_every) {
      factorize();
      compute_basic_values();
    }
  }
  return LpStatus::kIterLimit;
}

bool LpSolver::primal_feasible() const {
  for (int k = 0; k < m_; ++k) {
    const int i = basis_[k];
    const double eps = opt_.feas_tol * (1.0 + std::abs(value_[i]));
    if (value_[i] < cols_[i].lo - eps || value_[i] > cols_[i].up + eps)
      return false;
  }
  return true;
}

bool LpSolver::dual_feasible() const {
  const auto y = multipliers(false);
  for (int j = 0; j < int(cols_.size()); ++j) {
    const Col& c = cols_[j];
    if (pos_in_basis_[j] >= 0 || c.frozen || c.artificial) continue;
    if (c.lo == c.up) continue;
    const double d = reduced_cost(j, y, false);
    const double tol = 100.0 * opt_.opt_tol * (1.0 + std::abs(c.cost));
    if (place_[j] == kAtLo && d < -tol) return false;
    if (place_[j] == kAtUp && d > tol) return false;
    if (place_[j] == kFree && std::abs(d) > tol) return false;
  }
  return true;
}

bool LpSolver::verify_optimal() const {
  return primal_feasible() && dual_feasible();
}

LpResult LpSolver::extract(LpStatus status) {
  LpResult res;
  res.status = status;
  res.iterations = int(iters_this_solve_);
  res.x.resize(problem_.num_vars());
  for (int v = 0; v < problem_.num_vars(); ++v) res.x[v] = value_[struct_col(v)];
  double obj = 0.0;
  for (int v = 0; v < problem_.num_vars(); ++v) obj += problem_.obj[v] * res.x[v];
  res.objective = obj;
  auto y = multipliers(false);
  res.duals.resize(m_);
  for (int i = 0; i < m_; ++i) res.duals[i] = problem_.maximize ? -y[i] : y[i];
  res.reduced.resize(problem_.num_vars());
  for (int v = 0; v < problem_.num_vars(); ++v) {
    double d = problem_.obj[v];
    for (auto [row, coef] : cols_[struct_col(v)].a) d -= res.duals[row] * coef;
    res.reduced[v] = d;
  }
  return res;
}

LpResult LpSolver::solve() {
  iters_this_solve_ = 0;
  install_artificials();
  LpStatus st = primal_loop(true);
  if (st == LpStatus::kIterLimit) return extract(st);
  if (st == LpStatus::kUnbounded) throw NumericalError("phase-1 ray");
  double art_sum = 0.0;
  for (int i = 0; i < m_; ++i) {
    const int aj = art_of_[i];
    if (pos_in_basis_[aj] >= 0) art_sum += std::abs(value_[aj]);
  }
  double bscale = 1.0;
  for (double b : problem_.rhs) bscale += std::abs(b);
  if (art_sum > opt_.feas_tol * bscale) {
    solved_once_ = true;
    return extract(LpStatus::kInfeasible);
  }
  for (int i = 0; i < m_; ++i) {
    Col& art = cols_[art_of_[i]];
    art.frozen = true;
    art.lo = art.up = 0.0;
  }
  st = primal_loop(false);
  solved_once_ = true;
  if (st == LpStatus::kOptimal && !verify_optimal()) {
    factorize();
    compute_basic_values();
    st = primal_loop(false);
  }
  return extract(st);
}

LpResult LpSolver::resolve() {
  if (!solved_once_ || !factored_) return solve();
  try {
    const bool pf = primal_feasible();
    const bool df = dual_feasible();
    LpStatus st;
    if (pf && df) {
      st = LpStatus::kOptimal;
    } else if (pf) {
      iters_this_solve_ = 0;
      st = primal_loop(false);
    } else if (df) {
      iters_this_solve_ = 0;
      st = dual_loop();
      if (st == LpStatus::kOptimal && !dual_feasible()) st = primal_loop(false);
    } else {
      ++fallbacks_;
      return solve();
    }
    if (st == LpStatus::kOptimal && verify_optimal()) return extract(st);
    if (st == LpStatus::kInfeasible) return extract(st);
    ++fallbacks_;
    return solve();
  } catch (const NumericalError&) {
    ++fallbacks_;
    return solve();
  }
}

LpResult solve_lp(const LpProblem& problem, LpOptions options) {
  LpSolver solver(problem, options);
  return solver.solve();
}

}  // namespace bomtsp
