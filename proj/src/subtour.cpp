#include "bomtsp/subtour.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "bomtsp/errors.hpp"
#include "bomtsp/lp.hpp"

namespace bomtsp {

void write_edge_values(std::ostream& out, const Instance& inst,
                       const EdgeValues& ev) {
  char buf[128];
  for (size_t i = 0; i < ev.edges.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%d %d %.17g\n", inst.labels[ev.edges[i].first],
                  inst.labels[ev.edges[i].second], ev.values[i]);
    out << buf;
  }
}

EdgeValues parse_edge_values(std::istream& in, const Instance& inst) {
  std::unordered_map<int, int> by_label;
  for (int v = 0; v < inst.n; ++v) by_label[inst.labels[v]] = v;
  EdgeValues ev;
  ev.n = inst.n;
  std::string line;
  while (std::getline(in, line)) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    int a, b;
    double val;
    if (!(ls >> a >> b)) continue;
    if (!(ls >> val)) throw InputError("edge line missing value: " + line);
    const auto ia = by_label.find(a), ib = by_label.find(b);
    if (ia == by_label.end() || ib == by_label.end())
      throw InputError("edge references unknown vertex: " + line);
    if (ia->second == ib->second) throw InputError("self-loop: " + line);
    ev.add(ia->second, ib->second, val);
  }
  return ev;
}

namespace {

struct EdgeKey {
  size_t operator()(const Edge& e) const {
    return size_t(e.first) * 1000003u + size_t(e.second);
  }
};

}  // namespace

SubtourSolution solve_subtour(const Instance& inst, SubtourOptions opt) {
  const int n = inst.n;
  if (n < 3) throw InputError("subtour relaxation needs n >= 3");

  // Candidate edges: k nearest neighbors per vertex plus a greedy tour, so a
  // feasible cycle always lives inside the candidate set.
  std::vector<Edge> edges;
  std::unordered_map<Edge, int, EdgeKey> var_of;
  const auto add_edge_key = [&](int u, int v) -> bool {
    if (u > v) std::swap(u, v);
    const Edge e{u, v};
    if (var_of.count(e)) return false;
    var_of.emplace(e, int(edges.size()));
    edges.push_back(e);
    return true;
  };

  {
    std::vector<std::pair<double, int>> near(n - 1);
    for (int u = 0; u < n; ++u) {
      int k = 0;
      for (int v = 0; v < n; ++v)
        if (v != u) near[k++] = {inst.cost(u, v), v};
      const int take = std::min(opt.knn, n - 1);
      std::partial_sort(near.begin(), near.begin() + take, near.end());
      for (int i = 0; i < take; ++i) add_edge_key(u, near[i].second);
    }
    std::vector<char> visited(n, 0);
    int cur = 0;
    visited[0] = 1;
    for (int step = 1; step < n; ++step) {
      int best = -1;
      for (int v = 0; v < n; ++v)
        if (!visited[v] &&
            (best < 0 || inst.cost(cur, v) < inst.cost(cur, best)))
          best = v;
      add_edge_key(cur, best);
      visited[best] = 1;
      cur = best;
    }
    add_edge_key(cur, 0);
  }

  LpProblem lp;
  for (const auto& [u, v] : edges) lp.add_var(inst.cost(u, v), 0.0, 1.0);
  for (int v = 0; v < n; ++v) {
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < int(edges.size()); ++j)
      if (edges[j].first == v || edges[j].second == v) row.emplace_back(j, 1.0);
    lp.add_row(RowSense::kEq, 2.0, std::move(row));
  }

  LpOptions lp_opt;
  LpSolver solver(std::move(lp), lp_opt);
  LpResult res = solver.solve();

  std::vector<std::vector<char>> cut_sides;  // per cut row, side bit per vertex
  SubtourSolution out;
  const auto require_optimal = [&](const LpResult& r) {
    if (r.status != LpStatus::kOptimal)
      throw NumericalError("subtour LP " +
                           std::string(r.status == LpStatus::kInfeasible
                                           ? "infeasible"
                                           : r.status == LpStatus::kUnbounded
                                                 ? "unbounded"
                                                 : "hit its iteration limit"));
  };
  require_optimal(res);

  const auto add_cut = [&](const std::vector<char>& side) {
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < int(edges.size()); ++j)
      if (side[edges[j].first] != side[edges[j].second]) row.emplace_back(j, 1.0);
    solver.add_row(RowSense::kGe, 2.0, row);
    cut_sides.push_back(side);
    ++out.cut_count;
  };

  for (int round = 0; round < opt.max_rounds; ++round) {
    // Support graph of the current solution.
    EdgeList support;
    std::vector<double> sx;
    for (int j = 0; j < int(edges.size()); ++j)
      if (res.x[j] > opt.support_tol) {
        support.push_back(edges[j]);
        sx.push_back(res.x[j]);
      }

    bool added_cut = false;
    std::vector<int> comp;
    const int ncomp = connected_components(n, support, &comp);
    if (ncomp > 1) {
      for (int c = 0; c < ncomp; ++c) {
        std::vector<char> side(n, 0);
        for (int v = 0; v < n; ++v) side[v] = comp[v] == c;
        add_cut(side);
      }
      added_cut = true;
    } else {
      std::vector<double> w(size_t(n) * n, 0.0);
      for (size_t i = 0; i < support.size(); ++i) {
        const auto [u, v] = support[i];
        w[size_t(u) * n + v] += sx[i];
        w[size_t(v) * n + u] += sx[i];
      }
      std::vector<char> side;
      const double cut = stoer_wagner_min_cut(n, w, &side);
      if (cut < 2.0 - opt.cut_tol) {
        add_cut(side);
        added_cut = true;
      }
    }

    if (!added_cut) {
      // Certify optimality over all pairs; bring in improving columns.
      std::vector<int> hot_cuts;
      for (int c = 0; c < int(cut_sides.size()); ++c)
        if (std::abs(res.duals[n + c]) > 1e-12) hot_cuts.push_back(c);
      std::vector<std::pair<double, Edge>> entering;
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
          if (var_of.count({u, v})) continue;
          double r = inst.cost(u, v) - res.duals[u] - res.duals[v];
          for (int c : hot_cuts)
            if (cut_sides[c][u] != cut_sides[c][v]) r -= res.duals[n + c];
          if (r < -opt.price_tol) entering.push_back({r, {u, v}});
        }
      if (entering.empty()) break;
      std::sort(entering.begin(), entering.end());
      const size_t cap = std::min(entering.size(), size_t(10) * n);
      for (size_t i = 0; i < cap; ++i) {
        const auto [u, v] = entering[i].second;
        if (!add_edge_key(u, v)) continue;
        std::vector<std::pair<int, double>> colrows{{u, 1.0}, {v, 1.0}};
        for (int c = 0; c < int(cut_sides.size()); ++c)
          if (cut_sides[c][u] != cut_sides[c][v]) colrows.emplace_back(n + c, 1.0);
        solver.add_column(inst.cost(u, v), 0.0, 1.0, colrows);
      }
      ++out.price_rounds;
    }

    res = solver.resolve();
    require_optimal(res);
    if (round + 1 == opt.max_rounds)
      throw NumericalError("subtour separation did not converge");
  }

  out.x.n = n;
  for (int j = 0; j < int(edges.size()); ++j)
    if (res.x[j] > opt.support_tol) {
      double v = std::min(res.x[j], 1.0);
      out.x.add(edges[j].first, edges[j].second, v);
    }
  out.objective = res.objective;
  out.lp_pivots = solver.total_pivots();

  validate_subtour_vector(inst, out.x, 1e-6, true);
  return out;
}

EdgeValues scale_to_tree_polytope(const EdgeValues& x) {
  EdgeValues z = x;
  const double f = double(x.n - 1) / double(x.n);
  for (double& v : z.values) v *= f;
  return z;
}

void validate_subtour_vector(const Instance& inst, const EdgeValues& x,
                             double tol, bool check_cuts) {
  const int n = inst.n;
  if (x.n != n) throw InputError("edge vector has wrong vertex count");
  std::vector<double> deg(n, 0.0);
  for (size_t i = 0; i < x.edges.size(); ++i) {
    const double v = x.values[i];
    if (v < -tol || v > 1.0 + tol)
      throw InputError("edge value out of [0, 1]");
    deg[x.edges[i].first] += v;
    deg[x.edges[i].second] += v;
  }
  for (int v = 0; v < n; ++v)
    if (std::abs(deg[v] - 2.0) > tol)
      throw InputError("vertex " + std::to_string(inst.labels[v]) +
                       " has degree " + std::to_string(deg[v]));
  if (check_cuts) {
    std::vector<int> comp;
    if (connected_components(n, x.edges, &comp) != 1)
      throw InputError("support is disconnected");
    std::vector<double> w(size_t(n) * n, 0.0);
    for (size_t i = 0; i < x.edges.size(); ++i) {
      const auto [u, v] = x.edges[i];
      w[size_t(u) * n + v] += x.values[i];
      w[size_t(v) * n + u] += x.values[i];
    }
    const double cut = stoer_wagner_min_cut(n, w, nullptr);
    if (cut < 2.0 - tol)
      throw InputError("a cut of weight " + std::to_string(cut) +
                       " violates the relaxation");
  }
}

}  // namespace bomtsp
