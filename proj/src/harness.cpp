#include "bomtsp/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "bomtsp/errors.hpp"
#include "bomtsp/matching.hpp"
#include "bomtsp/rng.hpp"

namespace bomtsp {

double exact_optimum(const Instance& inst) {
  const int n = inst.n;
  if (n > 18) throw InputError("exact optimum is limited to 18 cities");
  if (n <= 1) return 0.0;
  if (n == 2) return 2.0 * inst.cost(0, 1);

  const double inf = std::numeric_limits<double>::infinity();
  const size_t full = size_t(1) << n;
  std::vector<double> dp(full * n, inf);
  dp[size_t(1) * n + 0] = 0.0;  // path sits at city 0, nothing else visited
  for (size_t mask = 1; mask < full; ++mask) {
    if (!(mask & 1)) continue;
    for (int j = 0; j < n; ++j) {
      const double base = dp[mask * n + j];
      if (base == inf || !(mask >> j & 1)) continue;
      for (int k = 1; k < n; ++k) {
        if (mask >> k & 1) continue;
        const size_t next = mask | (size_t(1) << k);
        double& slot = dp[next * n + k];
        const double cand = base + inst.cost(j, k);
        if (cand < slot) slot = cand;
      }
    }
  }
  double best = inf;
  for (int j = 1; j < n; ++j)
    best = std::min(best, dp[(full - 1) * n + j] + inst.cost(j, 0));
  return best;
}

std::vector<int> degree_histogram(int n, const EdgeList& tree, int cap) {
  std::vector<int> deg(n, 0);
  for (auto [u, v] : tree) {
    ++deg[u];
    ++deg[v];
  }
  std::vector<int> counts(cap + 1, 0);
  for (int v = 0; v < n; ++v) ++counts[std::min(deg[v], cap)];
  return counts;
}

WorstCaseFixture worst_case_fixture() {
  // Vertices 0..5; 0,2,4,5 form a zero-distance cluster, vertices 1 and 3
  // sit at distance 1 from the cluster and 2 from each other.
  const int n = 6;
  WorstCaseFixture fx;
  fx.inst.name = "walk_gap_6";
  fx.inst.kind = MetricKind::kExplicit;
  fx.inst.n = n;
  fx.inst.matrix.assign(size_t(n) * n, 0.0);
  const auto set = [&](int i, int j, double c) {
    fx.inst.matrix[size_t(i) * n + j] = c;
    fx.inst.matrix[size_t(j) * n + i] = c;
  };
  for (int far : {1, 3})
    for (int v : {0, 2, 4, 5}) set(far, v, 1.0);
  set(1, 3, 2.0);
  fx.inst.labels.resize(n);
  for (int v = 0; v < n; ++v) fx.inst.labels[v] = v + 1;
  fx.inst.has_opt = true;
  fx.inst.opt = 4.0;
  fx.inst.triangle_ok = true;

  fx.lp.n = n;
  fx.lp.add(0, 1, 0.5);
  fx.lp.add(0, 2, 0.5);
  fx.lp.add(0, 4, 1.0);
  fx.lp.add(1, 2, 0.5);
  fx.lp.add(1, 3, 1.0);
  fx.lp.add(2, 5, 1.0);
  fx.lp.add(3, 4, 0.5);
  fx.lp.add(3, 5, 0.5);
  fx.lp.add(4, 5, 0.5);

  fx.one_trees = {
      {{0, 1}, {0, 4}, {1, 2}, {1, 3}, {2, 5}, {4, 5}},
      {{0, 2}, {0, 4}, {1, 3}, {2, 5}, {3, 4}, {3, 5}},
  };
  return fx;
}

namespace {

void enumerate_matchings(const Instance& inst, std::vector<int>& odd,
                         std::vector<char>& used, size_t head, double acc,
                         double& best) {
  while (head < odd.size() && used[head]) ++head;
  if (head >= odd.size()) {
    best = std::min(best, acc);
    return;
  }
  used[head] = 1;
  for (size_t j = head + 1; j < odd.size(); ++j) {
    if (used[j]) continue;
    used[j] = 1;
    enumerate_matchings(inst, odd, used, head + 1,
                        acc + inst.cost(odd[head], odd[j]), best);
    used[j] = 0;
  }
  used[head] = 0;
}

}  // namespace

double min_walk_over_matchings(const Instance& inst, const EdgeList& edges) {
  std::vector<int> deg(inst.n, 0);
  double base = 0.0;
  for (auto [u, v] : edges) {
    ++deg[u];
    ++deg[v];
    base += inst.cost(u, v);
  }
  std::vector<int> odd;
  for (int v = 0; v < inst.n; ++v)
    if (deg[v] % 2) odd.push_back(v);
  if (odd.empty()) return base;
  if (odd.size() % 2) throw ContractViolation("odd set has odd size");
  if (odd.size() > 12) throw InputError("matching enumeration limited to 12");
  double best = std::numeric_limits<double>::infinity();
  std::vector<char> used(odd.size(), 0);
  enumerate_matchings(inst, odd, used, 0, 0.0, best);
  return base + best;
}

std::vector<int> local_search_tour(const Instance& inst, std::vector<int> tour) {
  const int n = inst.n;
  if (int(tour.size()) != n)
    throw ContractViolation("tour length does not match the instance");
  if (n < 4) return tour;
  const auto c = [&](int a, int b) { return inst.cost(a, b); };
  bool improved = true;
  while (improved) {
    improved = false;
    for (int i = 0; i < n - 1; ++i)
      for (int k = i + 1; k < n; ++k) {
        if (i == 0 && k == n - 1) continue;
        const int a = tour[i], b = tour[i + 1];
        const int d = tour[k], e = tour[(k + 1) % n];
        if (c(a, b) + c(d, e) - c(a, d) - c(b, e) > 1e-9) {
          std::reverse(tour.begin() + i + 1, tour.begin() + k + 1);
          improved = true;
        }
      }
    for (int len = 1; len <= 3 && len + 2 <= n; ++len)
      for (int i = 0; i + len <= n; ++i) {
        const int prev = tour[(i + n - 1) % n];
        const int next = tour[(i + len) % n];
        const int s0 = tour[i], s1 = tour[i + len - 1];
        const double open = c(prev, s0) + c(s1, next) - c(prev, next);
        for (int g = 0; g < n; ++g) {
          // Insert the segment into the gap after position g.
          if (g >= i - 1 && g <= i + len - 1) continue;
          if (i == 0 && g == n - 1) continue;
          const int p = tour[g], q = tour[(g + 1) % n];
          const double fwd = c(p, s0) + c(s1, q) - c(p, q);
          const double rev = c(p, s1) + c(s0, q) - c(p, q);
          if (open - std::min(fwd, rev) <= 1e-9) continue;
          std::vector<int> seg(tour.begin() + i, tour.begin() + i + len);
          if (rev < fwd) std::reverse(seg.begin(), seg.end());
          std::vector<int> rest;
          rest.reserve(n);
          for (int t = 0; t < n; ++t)
            if (t < i || t >= i + len) rest.push_back(tour[t]);
          // Position of p within rest: g shifts left by the removed block.
          const int gp = g > i ? g - len : g;
          std::vector<int> out(rest.begin(), rest.begin() + gp + 1);
          out.insert(out.end(), seg.begin(), seg.end());
          out.insert(out.end(), rest.begin() + gp + 1, rest.end());
          tour = std::move(out);
          improved = true;
          break;
        }
        if (improved) break;
      }
  }
  return tour;
}

namespace {

constexpr double kBig = 1e15;

struct FixGrid {
  int n;
  std::vector<int8_t> s;  // 0 free, 1 required, -1 forbidden
  explicit FixGrid(int n_) : n(n_), s(size_t(n_) * n_, 0) {}
  int8_t get(int u, int v) const { return s[size_t(u) * n + v]; }
  void set(int u, int v, int8_t val) {
    s[size_t(u) * n + v] = val;
    s[size_t(v) * n + u] = val;
  }
};

struct TreeBound {
  bool feasible = false;
  double lb = -kBig;
  double true_cost = 0.0;
  bool is_tour = false;
  EdgeList edges;
  std::vector<int> deg;
};

// Minimum 1-tree under costs c + pi_u + pi_v honoring the fixings: required
// edges always enter, forbidden edges never do.
TreeBound build_one_tree(int n, const std::vector<double>& c,
                         const FixGrid& fix, const std::vector<double>& pi) {
  TreeBound tb;
  const auto mod = [&](int u, int v) {
    const int8_t f = fix.get(u, v);
    if (f < 0) return kBig;
    double w = c[size_t(u) * n + v] + pi[u] + pi[v];
    if (f > 0) w -= 1e9;
    return w;
  };
  const auto true_mod = [&](int u, int v) {
    return c[size_t(u) * n + v] + pi[u] + pi[v];
  };

  std::vector<double> key(n, kBig);
  std::vector<int> parent(n, -1);
  std::vector<char> used(n, 1);  // vertex 0 attaches separately
  for (int v = 1; v < n; ++v) used[v] = 0;
  key[1] = 0.0;
  tb.deg.assign(n, 0);
  double lb = 0.0;
  for (int pick = 0; pick < n - 1; ++pick) {
    int u = -1;
    for (int v = 1; v < n; ++v)
      if (!used[v] && (u < 0 || key[v] < key[u])) u = v;
    if (u < 0 || key[u] >= kBig / 2) return tb;  // disconnected
    used[u] = 1;
    if (parent[u] >= 0) {
      tb.edges.emplace_back(std::min(u, parent[u]), std::max(u, parent[u]));
      lb += true_mod(u, parent[u]);
      tb.true_cost += c[size_t(u) * n + parent[u]];
    }
    for (int v = 1; v < n; ++v)
      if (!used[v]) {
        const double w = mod(u, v);
        if (w < key[v]) {
          key[v] = w;
          parent[v] = u;
        }
      }
  }
  // Two edges at vertex 0: required ones first, then the cheapest free.
  std::vector<int> at0;
  for (int v = 1; v < n; ++v)
    if (fix.get(0, v) > 0) at0.push_back(v);
  if (at0.size() > 2) return tb;
  while (at0.size() < 2) {
    int best = -1;
    for (int v = 1; v < n; ++v) {
      if (fix.get(0, v) != 0) continue;
      if (std::find(at0.begin(), at0.end(), v) != at0.end()) continue;
      if (best < 0 || true_mod(0, v) < true_mod(0, best)) best = v;
    }
    if (best < 0) return tb;
    at0.push_back(best);
  }
  for (int v : at0) {
    tb.edges.emplace_back(0, v);
    lb += true_mod(0, v);
    tb.true_cost += c[size_t(v)];
  }
  for (auto [u, v] : tb.edges) {
    ++tb.deg[u];
    ++tb.deg[v];
  }
  double pisum = 0.0;
  for (double p : pi) pisum += p;
  tb.lb = lb - 2.0 * pisum;
  tb.is_tour = true;
  for (int v = 0; v < n; ++v)
    if (tb.deg[v] != 2) tb.is_tour = false;
  tb.feasible = true;
  return tb;
}

struct AscentResult {
  bool feasible = false;
  double best_lb = -kBig;
  TreeBound best_tree;
};

// Subgradient ascent with a decaying Polyak step toward the incumbent.  A
// 1-tree that is a tour certifies the subproblem (its bound equals its
// cost), so the ascent stops there.
AscentResult ascend(int n, const std::vector<double>& c, const FixGrid& fix,
                    std::vector<double>& pi, int iters, double ub) {
  AscentResult res;
  double alpha = 2.0;
  for (int k = 0; k < iters; ++k) {
    TreeBound tb = build_one_tree(n, c, fix, pi);
    if (!tb.feasible) return res;  // structural, independent of pi
    res.feasible = true;
    if (tb.lb > res.best_lb) {
      res.best_lb = tb.lb;
      res.best_tree = tb;
    }
    if (tb.is_tour) {
      res.best_lb = std::max(res.best_lb, tb.lb);
      res.best_tree = std::move(tb);
      return res;
    }
    if (tb.lb >= ub) return res;  // parent will prune
    double g2 = 0.0;
    for (int v = 0; v < n; ++v) {
      const double g = tb.deg[v] - 2;
      g2 += g * g;
    }
    const double step = alpha * (ub - tb.lb) / g2;
    for (int v = 0; v < n; ++v) pi[v] += step * (tb.deg[v] - 2);
    alpha *= 0.96;
  }
  return res;
}

struct BBContext {
  int n;
  std::vector<double> c;
  bool integral = false;
  double ub = kBig;
  std::vector<int> best_tour;
  long nodes = 0;
  long node_limit = 0;
  std::chrono::steady_clock::time_point deadline;
};

std::vector<int> tour_from_edges(int n, const EdgeList& edges) {
  std::vector<std::vector<int>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<int> tour{0};
  int prev = -1, cur = 0;
  for (int i = 1; i < n; ++i) {
    const int next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
    tour.push_back(next);
    prev = cur;
    cur = next;
  }
  return tour;
}

void record_tour(BBContext& ctx, const EdgeList& edges, double cost) {
  if (cost < ctx.ub) {
    ctx.ub = cost;
    ctx.best_tour = tour_from_edges(ctx.n, edges);
  }
}

// Degree counting, forced-edge completion, and subpath chord exclusion.
// Returns false when the fixings admit no tour; a fixing set that itself
// completes a tour is recorded as an incumbent and also returns false.
bool propagate(BBContext& ctx, FixGrid& fix) {
  const int n = ctx.n;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < n; ++v) {
      int req = 0, free_cnt = 0;
      for (int u = 0; u < n; ++u) {
        if (u == v) continue;
        const int8_t f = fix.get(v, u);
        req += f > 0;
        free_cnt += f == 0;
      }
      if (req > 2 || req + free_cnt < 2) return false;
      if (req == 2 && free_cnt > 0) {
        for (int u = 0; u < n; ++u)
          if (u != v && fix.get(v, u) == 0) fix.set(v, u, -1);
        changed = true;
      } else if (req < 2 && req + free_cnt == 2) {
        for (int u = 0; u < n; ++u)
          if (u != v && fix.get(v, u) == 0) fix.set(v, u, 1);
        changed = true;
      }
    }
    // Required edges must form vertex-disjoint paths until the final cycle.
    Dsu dsu(n);
    EdgeList required;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (fix.get(u, v) > 0) required.emplace_back(u, v);
    bool cycle = false;
    for (auto [u, v] : required)
      if (!dsu.unite(u, v)) cycle = true;
    if (cycle) {
      if (int(required.size()) != n) return false;
      const int root = dsu.find(0);
      for (int v = 1; v < n; ++v)
        if (dsu.find(v) != root) return false;  // disjoint subcycles
      double cost = 0.0;
      for (auto [u, v] : required) cost += ctx.c[size_t(u) * n + v];
      record_tour(ctx, required, cost);
      return false;  // node fully decided
    }
    // Forbid the chord joining the two ends of each required path.
    std::vector<int> req_deg(n, 0);
    for (auto [u, v] : required) {
      ++req_deg[u];
      ++req_deg[v];
    }
    if (int(required.size()) < n - 1) {
      std::vector<std::vector<int>> ends(n);
      for (int v = 0; v < n; ++v)
        if (req_deg[v] == 1) ends[dsu.find(v)].push_back(v);
      for (int r = 0; r < n; ++r)
        if (ends[r].size() == 2) {
          const int a = ends[r][0], b = ends[r][1];
          if (fix.get(a, b) == 0) {
            fix.set(a, b, -1);
            changed = true;
          }
        }
    }
  }
  return true;
}

void bb_node(BBContext& ctx, FixGrid fix, std::vector<double> pi, int depth) {
  if (++ctx.nodes > ctx.node_limit)
    throw NumericalError("branch and bound hit its node limit");
  if ((ctx.nodes & 63) == 0 &&
      std::chrono::steady_clock::now() > ctx.deadline)
    throw NumericalError("branch and bound hit its time limit");
  if (!propagate(ctx, fix)) return;

  const int n = ctx.n;
  const int iters = depth == 0 ? 400 + 12 * n : 60 + n / 2;
  const AscentResult asc = ascend(n, ctx.c, fix, pi, iters, ctx.ub);
  if (!asc.feasible) return;
  const double lb =
      ctx.integral ? std::ceil(asc.best_lb - 1e-6) : asc.best_lb;
  if (lb >= ctx.ub - (ctx.integral ? 1e-9 : 1e-7 * std::abs(ctx.ub)))
    return;
  const TreeBound& tree = asc.best_tree;
  if (tree.is_tour) {
    record_tour(ctx, tree.edges, tree.true_cost);
    return;
  }

  int bv = -1;
  for (int v = 0; v < n; ++v)
    if (tree.deg[v] > 2 && (bv < 0 || tree.deg[v] > tree.deg[bv])) bv = v;
  Edge be{-1, -1};
  double be_cost = -1.0;
  for (auto [u, v] : tree.edges) {
    if (u != bv && v != bv) continue;
    if (fix.get(u, v) != 0) continue;
    const double w = ctx.c[size_t(u) * n + v];
    if (w > be_cost) {
      be_cost = w;
      be = Edge{u, v};
    }
  }
  if (be.first < 0)
    throw ContractViolation("no branchable edge at an overloaded vertex");

  FixGrid with = fix;
  with.set(be.first, be.second, 1);
  bb_node(ctx, std::move(with), pi, depth + 1);
  fix.set(be.first, be.second, -1);
  bb_node(ctx, std::move(fix), std::move(pi), depth + 1);
}

std::vector<int> nearest_neighbor_tour(int n, const std::vector<double>& c,
                                       int start) {
  std::vector<char> used(n, 0);
  std::vector<int> tour{start};
  used[start] = 1;
  for (int i = 1; i < n; ++i) {
    const int cur = tour.back();
    int best = -1;
    for (int v = 0; v < n; ++v)
      if (!used[v] &&
          (best < 0 || c[size_t(cur) * n + v] < c[size_t(cur) * n + best]))
        best = v;
    tour.push_back(best);
    used[best] = 1;
  }
  return tour;
}

}  // namespace

double branch_bound_optimum(const Instance& inst, BranchBoundOptions opt) {
  const int n = inst.n;
  if (n <= 1) return 0.0;
  if (n == 2) return 2.0 * inst.cost(0, 1);
  if (n == 3) return inst.cost(0, 1) + inst.cost(1, 2) + inst.cost(0, 2);

  BBContext ctx;
  ctx.n = n;
  ctx.c = all_pairs_costs(inst);
  ctx.integral = true;
  for (double v : ctx.c)
    if (std::abs(v - std::llround(v)) > 1e-9) {
      ctx.integral = false;
      break;
    }
  ctx.node_limit = opt.node_limit;
  ctx.deadline = std::chrono::steady_clock::now() +
                 std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                     std::chrono::duration<double>(opt.time_limit_s));

  std::vector<std::vector<int>> starts;
  starts.push_back(run_standard(inst).tour);
  for (int s : {0, n / 3, (2 * n) / 3})
    starts.push_back(nearest_neighbor_tour(n, ctx.c, s));
  for (auto& t : starts) {
    t = local_search_tour(inst, std::move(t));
    const double cost = inst.tour_cost(t);
    if (cost < ctx.ub) {
      ctx.ub = cost;
      ctx.best_tour = t;
    }
  }

  FixGrid fix(n);
  std::vector<double> pi(n, 0.0);
  bb_node(ctx, std::move(fix), std::move(pi), 0);

  if (ctx.best_tour.empty() ||
      std::abs(inst.tour_cost(ctx.best_tour) - ctx.ub) >
          1e-6 * std::max(1.0, std::abs(ctx.ub)))
    throw ContractViolation("branch and bound lost its incumbent tour");
  return ctx.ub;
}

const std::vector<std::string> kAllAlgorithms = {
    "Std", "ColGen", "ColGen+SR", "MaxEnt", "Split", "Split+SR"};

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double secs() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

struct Accumulator {
  int n;
  double best = std::numeric_limits<double>::infinity();
  double cost = 0, tree = 0, match = 0, odd = 0, edge = 0, wsum = 0;
  int count = 0;

  void add(const SampleStats& s, double w) {
    best = std::min(best, s.tour_cost);
    cost += w * s.tour_cost;
    tree += w * s.tree_cost;
    match += w * s.match_cost;
    odd += w * double(s.odd_count) / double(n);
    if (s.odd_count > 0)
      edge += w * s.match_cost / double(s.odd_count / 2);
    wsum += w;
    ++count;
  }
  void fill(AlgoReport& rep) const {
    if (wsum <= 0) throw ContractViolation("empty sample set");
    rep.samples = count;
    rep.best_cost = best;
    rep.avg_cost = cost / wsum;
    rep.avg_tree = tree / wsum;
    rep.avg_match = match / wsum;
    rep.avg_odd_frac = odd / wsum;
    rep.avg_match_edge = edge / wsum;
  }
};

SampleStats stats_of(const ChristofidesResult& cr) {
  return {cr.tour_cost, cr.tree_cost, cr.matching_cost, int(cr.odd.size())};
}

AlgoReport sweep_combination(const Instance& inst,
                             const TreeCombination& combo) {
  Accumulator acc{inst.n};
  const auto w = combo.normalized_weights();
  for (size_t t = 0; t < combo.trees.size(); ++t)
    acc.add(stats_of(christofides_from_tree(inst, combo.trees[t])), w[t]);
  AlgoReport rep;
  acc.fill(rep);
  return rep;
}

AlgoReport from_bom(const Instance& inst, const BomResult& res) {
  Accumulator acc{inst.n};
  for (const auto& s : res.samples) acc.add(s, 1.0);
  AlgoReport rep;
  acc.fill(rep);
  return rep;
}

}  // namespace

InstanceReport run_instance(const Instance& inst, const ExperimentOptions& opt) {
  InstanceReport rep;
  rep.name = inst.name;
  rep.n = inst.n;
  if (inst.has_opt)
    rep.optimum = inst.opt;
  else if (inst.n <= 18)
    rep.optimum = exact_optimum(inst);
  else
    throw InputError(inst.name + ": no reference optimum available");

  Timer lp_timer;
  const SubtourSolution lp = solve_subtour(inst);
  rep.lp_value = lp.objective;
  rep.lp_wall_s = lp_timer.secs();
  const EdgeValues z = scale_to_tree_polytope(lp.x);

  // Shared artifacts, computed once; their wall time charges every
  // algorithm row that depends on them.
  std::optional<ColgenResult> colgen;
  double colgen_wall = 0.0;
  const auto need_colgen = [&]() -> const ColgenResult& {
    if (!colgen) {
      Timer t;
      ColgenOptions co;
      co.to_optimality = opt.colgen_to_optimality;
      co.seed = mix_seed(opt.seed, 101);
      colgen = colgen_decompose(z, co);
      colgen_wall = t.secs();
    }
    return *colgen;
  };
  std::optional<TreeCombination> split;
  double split_wall = 0.0;
  const auto need_split = [&]() -> const TreeCombination& {
    if (!split) {
      Timer t;
      split = split_decompose(lp.x);
      split_wall = t.secs();
    }
    return *split;
  };
  std::optional<MaxEntResult> maxent;
  double maxent_wall = 0.0;
  const auto need_maxent = [&]() -> const MaxEntResult& {
    if (!maxent) {
      Timer t;
      MaxEntOptions mo;
      mo.epsilon = opt.maxent_epsilon;
      mo.max_sweeps = opt.maxent_sweeps;
      maxent = fit_max_entropy(z, mo);
      maxent_wall = t.secs();
    }
    return *maxent;
  };

  const auto& algos = opt.algorithms.empty() ? kAllAlgorithms : opt.algorithms;
  for (const auto& name : algos) {
    AlgoReport row;
    double dep_wall = 0.0;
    if (name == "Std") {
      Timer own;
      Accumulator acc{inst.n};
      acc.add(stats_of(run_standard(inst, opt.seed)), 1.0);
      acc.fill(row);
      row.wall_s = own.secs();
    } else if (name == "ColGen") {
      const auto& cg = need_colgen();
      dep_wall = colgen_wall;
      Timer own;
      row = sweep_combination(inst, cg.combo);
      row.wall_s = own.secs();
    } else if (name == "ColGen+SR") {
      const auto& cg = need_colgen();
      dep_wall = colgen_wall;
      Timer own;
      const TreeDrawer draw = [&cg](std::mt19937_64& gen) {
        return swap_round(cg.combo, gen);
      };
      row = from_bom(inst, best_of_many(inst, draw, opt.samples,
                                        mix_seed(opt.seed, 2), opt.workers));
      row.wall_s = own.secs();
    } else if (name == "MaxEnt") {
      const auto& fit = need_maxent();
      dep_wall = maxent_wall;
      Timer own;
      const TreeDrawer draw = [&fit, &z](std::mt19937_64& gen) {
        return sample_tree_walk(z.n, z.edges, fit.lambda, gen);
      };
      row = from_bom(inst, best_of_many(inst, draw, opt.samples,
                                        mix_seed(opt.seed, 3), opt.workers));
      row.wall_s = own.secs();
    } else if (name == "Split") {
      const auto& sp = need_split();
      dep_wall = split_wall;
      Timer own;
      row = sweep_combination(inst, sp);
      row.wall_s = own.secs();
    } else if (name == "Split+SR") {
      const auto& sp = need_split();
      dep_wall = split_wall;
      Timer own;
      const TreeDrawer draw = [&sp](std::mt19937_64& gen) {
        return swap_round(sp, gen);
      };
      row = from_bom(inst, best_of_many(inst, draw, opt.samples,
                                        mix_seed(opt.seed, 5), opt.workers));
      row.wall_s = own.secs();
    } else {
      throw InputError("unknown algorithm: " + name);
    }
    row.algorithm = name;
    row.wall_s += dep_wall;
    rep.algos.push_back(std::move(row));
  }
  return rep;
}

void write_csv_header(std::ostream& out) {
  out << "instance,n,algorithm,best_err_pct,avg_err_pct,tree_cost_pct,"
         "match_cost_pct,odd_frac,match_edge_cost_pct,wall_s\n";
}

void write_csv_rows(std::ostream& out, const InstanceReport& rep) {
  if (rep.optimum <= 0.0) throw ContractViolation("nonpositive optimum");
  char buf[256];
  for (const auto& a : rep.algos) {
    const double pct = 100.0 / rep.optimum;
    std::snprintf(buf, sizeof buf, "%s,%d,%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.3f\n",
                  rep.name.c_str(), rep.n, a.algorithm.c_str(),
                  (a.best_cost - rep.optimum) * pct,
                  (a.avg_cost - rep.optimum) * pct, a.avg_tree * pct,
                  a.avg_match * pct, a.avg_odd_frac, a.avg_match_edge * pct,
                  a.wall_s);
    out << buf;
  }
}

ExperimentConfig parse_experiment_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto strip = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw InputError("config line " + std::to_string(lineno) +
                       " is not key=value");
    const std::string key = strip(line.substr(0, eq));
    const std::string val = strip(line.substr(eq + 1));
    try {
      if (key == "instance") {
        cfg.instance_paths.push_back(val);
      } else if (key == "csv") {
        cfg.csv_path = val;
      } else if (key == "algorithms") {
        cfg.options.algorithms.clear();
        std::istringstream as(val);
        std::string item;
        while (std::getline(as, item, ',')) {
          item = strip(item);
          if (item.empty()) continue;
          if (std::find(kAllAlgorithms.begin(), kAllAlgorithms.end(), item) ==
              kAllAlgorithms.end())
            throw InputError("unknown algorithm: " + item);
          cfg.options.algorithms.push_back(item);
        }
      } else if (key == "samples") {
        cfg.options.samples = std::stoi(val);
      } else if (key == "seed") {
        cfg.options.seed = std::stoull(val);
      } else if (key == "workers") {
        cfg.options.workers = std::stoi(val);
      } else if (key == "colgen_to_optimality") {
        cfg.options.colgen_to_optimality = val == "1" || val == "true";
      } else if (key == "maxent_epsilon") {
        cfg.options.maxent_epsilon = std::stod(val);
      } else if (key == "maxent_sweeps") {
        cfg.options.maxent_sweeps = std::stoi(val);
      } else {
        throw InputError("unknown config key: " + key);
      }
    } catch (const std::invalid_argument&) {
      throw InputError("config line " + std::to_string(lineno) +
                       ": bad value for " + key);
    } catch (const std::out_of_range&) {
      throw InputError("config line " + std::to_string(lineno) +
                       ": bad value for " + key);
    }
  }
  if (cfg.instance_paths.empty())
    throw InputError("config lists no instances");
  return cfg;
}

}  // namespace bomtsp
