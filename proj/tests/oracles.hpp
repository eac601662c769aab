#pragma once

// Brute-force reference implementations the tests compare the real solvers
// against.  Everything here is exponential and meant for tiny inputs only.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "bomtsp/edge_values.hpp"
#include "bomtsp/graph_util.hpp"
#include "bomtsp/instance.hpp"
#include "bomtsp/lp.hpp"

namespace bomtsp::oracle {

inline double perm_optimum(const Instance& inst) {
  std::vector<int> perm(inst.n - 1);
  std::iota(perm.begin(), perm.end(), 1);
  double best = std::numeric_limits<double>::infinity();
  do {
    double cost = inst.cost(0, perm.front()) + inst.cost(perm.back(), 0);
    for (size_t i = 0; i + 1 < perm.size(); ++i)
      cost += inst.cost(perm[i], perm[i + 1]);
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

template <typename Weight>
double matching_rec(const std::vector<int>& verts, std::vector<char>& used,
                    const Weight& w) {
  size_t i = 0;
  while (i < verts.size() && used[i]) ++i;
  if (i == verts.size()) return 0.0;
  used[i] = 1;
  double best = std::numeric_limits<double>::infinity();
  for (size_t j = i + 1; j < verts.size(); ++j) {
    if (used[j]) continue;
    used[j] = 1;
    best = std::min(best, w(verts[i], verts[j]) + matching_rec(verts, used, w));
    used[j] = 0;
  }
  used[i] = 0;
  return best;
}

// Minimum-weight perfect matching on an even vertex set by pairing the first
// unmatched vertex with every partner.
template <typename Weight>
double brute_matching(const std::vector<int>& verts, const Weight& w) {
  std::vector<char> used(verts.size(), 0);
  return matching_rec(verts, used, w);
}

// Every spanning tree of the given edge set, as sorted edge lists.
inline std::vector<EdgeList> spanning_trees(int n, const EdgeList& edges) {
  std::vector<EdgeList> out;
  const int m = int(edges.size());
  std::vector<int> pick;
  const auto rec = [&](auto&& self, int from) -> void {
    if (int(pick.size()) == n - 1) {
      Dsu dsu(n);
      for (int i : pick)
        if (!dsu.unite(edges[i].first, edges[i].second)) return;
      EdgeList t;
      for (int i : pick) t.push_back(edges[i]);
      std::sort(t.begin(), t.end());
      out.push_back(std::move(t));
      return;
    }
    for (int i = from; m - i >= n - 1 - int(pick.size()); ++i) {
      pick.push_back(i);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

// Minimum of x(delta(S)) over all nonempty proper vertex subsets.
inline double min_cut_enumeration(const EdgeValues& x) {
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask + 1 < (1u << x.n); ++mask) {
    if (!(mask & 1)) continue;  // complements give the same cut
    double cut = 0.0;
    for (size_t i = 0; i < x.edges.size(); ++i) {
      const auto [u, v] = x.edges[i];
      if (((mask >> u) ^ (mask >> v)) & 1) cut += x.values[i];
    }
    best = std::min(best, cut);
  }
  return best;
}

inline bool gauss_solve(std::vector<double> a, std::vector<double> b,
                        int n, std::vector<double>* x) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (std::abs(a[piv * n + col]) < 1e-9) return false;
    for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
    std::swap(b[col], b[piv]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r * n + col] / a[col * n + col];
      for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  x->resize(n);
  for (int i = 0; i < n; ++i) (*x)[i] = b[i] / a[i * n + i];
  return true;
}

// Optimal objective of a small bounded-feasible LP by enumerating all basic
// solutions: every n-subset of constraints (rows plus finite bounds) taken
// as equalities.  Returns false when no feasible basic solution exists.
inline bool lp_enumerate(const LpProblem& p, double* objective,
                         std::vector<double>* arg = nullptr) {
  const int n = p.num_vars();
  struct Con {
    std::vector<double> a;
    double b;
  };
  std::vector<Con> cons;
  for (int r = 0; r < p.num_rows(); ++r) {
    Con c{std::vector<double>(n, 0.0), p.rhs[r]};
    for (auto [v, coef] : p.rows[r]) c.a[v] += coef;
    cons.push_back(std::move(c));
  }
  for (int v = 0; v < n; ++v) {
    if (p.lo[v] > -kLpInf) {
      Con c{std::vector<double>(n, 0.0), p.lo[v]};
      c.a[v] = 1.0;
      cons.push_back(std::move(c));
    }
    if (p.up[v] < kLpInf) {
      Con c{std::vector<double>(n, 0.0), p.up[v]};
      c.a[v] = 1.0;
      cons.push_back(std::move(c));
    }
  }

  const auto feasible = [&](const std::vector<double>& x) {
    for (int v = 0; v < n; ++v) {
      if (x[v] < p.lo[v] - 1e-7) return false;
      if (x[v] > p.up[v] + 1e-7) return false;
    }
    for (int r = 0; r < p.num_rows(); ++r) {
      double lhs = 0.0;
      for (auto [v, coef] : p.rows[r]) lhs += coef * x[v];
      if (p.sense[r] == RowSense::kLe && lhs > p.rhs[r] + 1e-7) return false;
      if (p.sense[r] == RowSense::kGe && lhs < p.rhs[r] - 1e-7) return false;
      if (p.sense[r] == RowSense::kEq && std::abs(lhs - p.rhs[r]) > 1e-7)
        return false;
    }
    return true;
  };

  bool found = false;
  double best = 0.0;
  std::vector<double> best_x;
  std::vector<int> pick;
  const int total = int(cons.size());
  const auto rec = [&](auto&& self, int from) -> void {
    if (int(pick.size()) == n) {
      std::vector<double> a(size_t(n) * n), b(n), x;
      for (int i = 0; i < n; ++i) {
        for (int c = 0; c < n; ++c) a[i * n + c] = cons[pick[i]].a[c];
        b[i] = cons[pick[i]].b;
      }
      if (!gauss_solve(std::move(a), std::move(b), n, &x)) return;
      if (!feasible(x)) return;
      double obj = 0.0;
      for (int v = 0; v < n; ++v) obj += p.obj[v] * x[v];
      const bool better = p.maximize ? obj > best : obj < best;
      if (!found || better) {
        found = true;
        best = obj;
        best_x = x;
      }
      return;
    }
    for (int i = from; total - i >= n - int(pick.size()); ++i) {
      pick.push_back(i);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  if (found) {
    *objective = best;
    if (arg) *arg = best_x;
  }
  return found;
}

}  // namespace bomtsp::oracle
