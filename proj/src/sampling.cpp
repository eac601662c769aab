#include "bomtsp/sampling.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <numeric>
#include <thread>

#include "bomtsp/errors.hpp"
#include "bomtsp/rng.hpp"

namespace bomtsp {

namespace {

// Inverse of the Laplacian with vertex `ground` removed.  Positive definite
// exactly when the weighted graph is connected.
Eigen::MatrixXd grounded_inverse(int n, const EdgeList& edges,
                                 const std::vector<double>& lambda,
                                 int ground) {
  const auto slot = [&](int v) { return v < ground ? v : v - 1; };
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n - 1, n - 1);
  for (size_t i = 0; i < edges.size(); ++i) {
    const double w = lambda[i];
    if (w <= 0.0) continue;
    const auto [u, v] = edges[i];
    if (u != ground && v != ground) {
      lap(slot(u), slot(u)) += w;
      lap(slot(v), slot(v)) += w;
      lap(slot(u), slot(v)) -= w;
      lap(slot(v), slot(u)) -= w;
    } else {
      const int t = u == ground ? v : u;
      lap(slot(t), slot(t)) += w;
    }
  }
  Eigen::LDLT<Eigen::MatrixXd> fact(lap);
  if (fact.info() != Eigen::Success)
    throw NumericalError("grounded Laplacian is not positive definite");
  return fact.solve(Eigen::MatrixXd::Identity(n - 1, n - 1));
}

double resistance(const Eigen::MatrixXd& minv, int u, int v, int ground) {
  const auto slot = [&](int w) { return w < ground ? w : w - 1; };
  if (u == ground) return minv(slot(v), slot(v));
  if (v == ground) return minv(slot(u), slot(u));
  return minv(slot(u), slot(u)) + minv(slot(v), slot(v)) -
         2.0 * minv(slot(u), slot(v));
}

}  // namespace

std::vector<double> tree_marginals(int n, const EdgeList& edges,
                                   const std::vector<double>& lambda) {
  if (edges.size() != lambda.size())
    throw ContractViolation("edge/weight size mismatch");
  std::vector<int> comp;
  if (connected_components(n, edges, &comp) != 1)
    throw InputError("tree marginals need a connected graph");
  const Eigen::MatrixXd minv = grounded_inverse(n, edges, lambda, 0);
  std::vector<double> q(edges.size());
  double total = 0.0;
  for (size_t i = 0; i < edges.size(); ++i) {
    q[i] = lambda[i] * resistance(minv, edges[i].first, edges[i].second, 0);
    total += q[i];
  }
  if (std::abs(total - double(n - 1)) > 1e-4 * double(n))
    throw NumericalError("tree marginals lost precision");
  return q;
}

MaxEntResult fit_max_entropy(const EdgeValues& z, MaxEntOptions opt) {
  const int n = z.n;
  const size_t m = z.edges.size();
  for (double v : z.values)
    if (v <= 0.0 || v >= 1.0)
      throw InputError("max entropy targets must lie strictly in (0, 1)");

  const double c = 1.0 + opt.epsilon / 2.0;
  std::vector<double> target(m);
  for (size_t i = 0; i < m; ++i)
    target[i] = std::min(c * z.values[i], 1.0 - 1e-9);

  MaxEntResult out;
  std::vector<double> gamma(m, 0.0);
  out.lambda.assign(m, 1.0);
  for (int sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
    out.sweeps = sweep;
    const double mean =
        std::accumulate(gamma.begin(), gamma.end(), 0.0) / double(m);
    for (size_t i = 0; i < m; ++i) {
      gamma[i] -= mean;
      out.lambda[i] = std::exp(gamma[i]);
    }
    out.marginals = tree_marginals(n, z.edges, out.lambda);
    out.max_ratio = 0.0;
    for (size_t i = 0; i < m; ++i)
      out.max_ratio = std::max(out.max_ratio, out.marginals[i] / z.values[i]);
    if (out.max_ratio <= 1.0 + opt.epsilon) {
      out.converged = true;
      break;
    }
    for (size_t i = 0; i < m; ++i) {
      const double q =
          std::clamp(out.marginals[i], 1e-12, 1.0 - 1e-12);
      if (q <= target[i]) continue;
      const double delta = std::log(q * (1.0 - target[i])) -
                           std::log((1.0 - q) * target[i]);
      gamma[i] -= std::min(delta, 30.0);
    }
  }
  out.gamma.n = n;
  out.gamma.edges = z.edges;
  out.gamma.values = gamma;
  return out;
}

EdgeList sample_tree_walk(int n, const EdgeList& edges,
                          const std::vector<double>& lambda,
                          std::mt19937_64& gen) {
  std::vector<std::vector<int>> nbr(n);
  std::vector<std::vector<double>> cum(n);
  for (size_t i = 0; i < edges.size(); ++i) {
    if (lambda[i] <= 0.0) continue;
    const auto [u, v] = edges[i];
    nbr[u].push_back(v);
    nbr[v].push_back(u);
    cum[u].push_back(lambda[i]);
    cum[v].push_back(lambda[i]);
  }
  for (int v = 0; v < n; ++v) {
    if (nbr[v].empty()) throw InputError("isolated vertex in tree sampler");
    std::partial_sum(cum[v].begin(), cum[v].end(), cum[v].begin());
  }

  std::vector<char> in_tree(n, 0);
  std::vector<int> next(n, -1);
  in_tree[0] = 1;
  EdgeList tree;
  tree.reserve(n - 1);
  long long guard = 0;
  for (int v = 0; v < n; ++v) {
    if (in_tree[v]) continue;
    // Loop-erased walk: later visits overwrite the successor pointers, so
    // following them afterwards traces the erased path.
    int u = v;
    while (!in_tree[u]) {
      if (++guard > 200'000'000)
        throw NumericalError("random walk failed to cover the graph");
      const auto& c = cum[u];
      const double r = uniform01(gen) * c.back();
      size_t k = std::lower_bound(c.begin(), c.end(), r) - c.begin();
      if (k >= c.size()) k = c.size() - 1;
      next[u] = nbr[u][k];
      u = next[u];
    }
    u = v;
    while (!in_tree[u]) {
      in_tree[u] = 1;
      tree.emplace_back(std::min(u, next[u]), std::max(u, next[u]));
      u = next[u];
    }
  }
  std::sort(tree.begin(), tree.end());
  if (!is_spanning_tree(n, tree))
    throw ContractViolation("walk sampler produced a non-tree");
  return tree;
}

EdgeList sample_tree_exact(int n, const EdgeList& edges,
                           const std::vector<double>& lambda,
                           std::mt19937_64& gen) {
  std::vector<int> comp;
  if (connected_components(n, edges, &comp) != 1)
    throw InputError("tree sampler needs a connected graph");
  Dsu dsu(n);
  std::vector<char> deleted(edges.size(), 0);
  EdgeList tree;
  for (size_t i = 0; i < edges.size(); ++i) {
    if (dsu.find(edges[i].first) == dsu.find(edges[i].second)) {
      deleted[i] = 1;  // closes a cycle with accepted edges
      continue;
    }
    // Contract accepted edges, keep every undecided edge, and measure the
    // marginal of edge i in that minor.
    std::map<int, int> id;
    for (int v = 0; v < n; ++v) id.emplace(dsu.find(v), 0);
    int k = 0;
    for (auto& [root, compact] : id) compact = k++;
    EdgeList live;
    std::vector<double> w;
    for (size_t j = i; j < edges.size(); ++j) {
      if (deleted[j]) continue;
      const int u = id[dsu.find(edges[j].first)];
      const int v = id[dsu.find(edges[j].second)];
      if (u == v) continue;
      live.emplace_back(std::min(u, v), std::max(u, v));
      w.push_back(lambda[j]);
    }
    const int ui = id[dsu.find(edges[i].first)];
    const int vi = id[dsu.find(edges[i].second)];
    const Eigen::MatrixXd minv = grounded_inverse(k, live, w, 0);
    const double q =
        std::clamp(lambda[i] * resistance(minv, ui, vi, 0), 0.0, 1.0);
    bool accept = q >= 1.0 - 1e-9;  // bridge: rejection is a rounding artifact
    if (!accept) accept = uniform01(gen) < q;
    if (accept) {
      tree.push_back(edges[i]);
      dsu.unite(edges[i].first, edges[i].second);
    } else {
      deleted[i] = 1;
    }
  }
  std::sort(tree.begin(), tree.end());
  if (!is_spanning_tree(n, tree))
    throw ContractViolation("exact sampler produced a non-tree");
  return tree;
}

EdgeList merge_basis(int n, EdgeList t1, double w1, EdgeList t2, double w2,
                     std::mt19937_64& gen) {
  std::sort(t1.begin(), t1.end());
  std::sort(t2.begin(), t2.end());
  const auto remove_edge = [](EdgeList& t, Edge e) {
    t.erase(std::lower_bound(t.begin(), t.end(), e));
  };
  const auto insert_edge = [](EdgeList& t, Edge e) {
    t.insert(std::upper_bound(t.begin(), t.end(), e), e);
  };

  while (true) {
    EdgeList diff;
    std::set_difference(t1.begin(), t1.end(), t2.begin(), t2.end(),
                        std::back_inserter(diff));
    if (diff.empty()) return t1;
    const Edge e1 = diff.front();

    // Side labels of t1 - e1: every t2-path edge crossing the split is a
    // valid double swap partner (and is never itself in t1).
    std::vector<char> side(n, 0);
    {
      std::vector<std::vector<int>> adj(n);
      for (auto [u, v] : t1) {
        if (Edge{u, v} == e1) continue;
        adj[u].push_back(v);
        adj[v].push_back(u);
      }
      std::vector<int> stack{e1.first};
      side[e1.first] = 1;
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : adj[u])
          if (!side[v]) {
            side[v] = 1;
            stack.push_back(v);
          }
      }
    }
    Edge e2{-1, -1};
    {
      std::vector<std::vector<int>> adj(n);
      for (auto [u, v] : t2) {
        adj[u].push_back(v);
        adj[v].push_back(u);
      }
      std::vector<int> parent(n, -2);
      parent[e1.first] = -1;
      std::vector<int> queue{e1.first};
      for (size_t h = 0; h < queue.size(); ++h) {
        const int u = queue[h];
        for (int v : adj[u])
          if (parent[v] == -2) {
            parent[v] = u;
            queue.push_back(v);
          }
      }
      for (int u = e1.second; parent[u] >= 0; u = parent[u])
        if (side[u] != side[parent[u]]) {
          e2 = Edge{std::min(u, parent[u]), std::max(u, parent[u])};
          break;
        }
    }
    if (e2.first < 0)
      throw ContractViolation("basis exchange found no partner edge");

    if (uniform01(gen) * (w1 + w2) < w1) {
      remove_edge(t2, e2);
      insert_edge(t2, e1);
    } else {
      remove_edge(t1, e1);
      insert_edge(t1, e2);
    }
  }
}

EdgeList swap_round(const TreeCombination& combo, std::mt19937_64& gen) {
  if (combo.trees.empty()) throw InputError("empty combination");
  const auto w = combo.normalized_weights();
  EdgeList cur = combo.trees.front();
  double acc = w.front();
  for (size_t i = 1; i < combo.trees.size(); ++i) {
    cur = merge_basis(combo.n, std::move(cur), acc, combo.trees[i], w[i], gen);
    acc += w[i];
  }
  if (!is_spanning_tree(combo.n, cur))
    throw ContractViolation("rounding produced a non-tree");
  return cur;
}

EdgeList draw_combination_tree(const TreeCombination& combo,
                               std::mt19937_64& gen) {
  if (combo.trees.empty()) throw InputError("empty combination");
  std::vector<double> cum(combo.weights);
  std::partial_sum(cum.begin(), cum.end(), cum.begin());
  const double r = uniform01(gen) * cum.back();
  size_t k = std::lower_bound(cum.begin(), cum.end(), r) - cum.begin();
  if (k >= cum.size()) k = cum.size() - 1;
  return combo.trees[k];
}

BomResult best_of_many(const Instance& inst, const TreeDrawer& draw,
                       int num_samples, uint64_t seed, int workers) {
  if (num_samples <= 0) throw InputError("sample count must be positive");
  workers = std::clamp(workers, 1, num_samples);

  BomResult out;
  out.samples.resize(num_samples);
  std::vector<std::vector<int>> tours(num_samples);
  std::vector<std::exception_ptr> errors(workers);

  const auto run_range = [&](int w) {
    try {
      for (int s = w; s < num_samples; s += workers) {
        auto gen = make_stream(seed, uint64_t(s));
        const EdgeList tree = draw(gen);
        const ChristofidesResult cr = christofides_from_tree(inst, tree);
        out.samples[s] = {cr.tour_cost, cr.tree_cost, cr.matching_cost,
                          int(cr.odd.size())};
        tours[s] = cr.tour;
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    run_range(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run_range, w);
    for (auto& t : pool) t.join();
  }
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);

  out.best_index = 0;
  for (int s = 1; s < num_samples; ++s)
    if (out.samples[s].tour_cost < out.samples[out.best_index].tour_cost)
      out.best_index = s;
  out.best_cost = out.samples[out.best_index].tour_cost;
  out.best_tour = std::move(tours[out.best_index]);
  return out;
}

}  // namespace bomtsp
