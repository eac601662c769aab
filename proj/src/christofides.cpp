#include "bomtsp/christofides.hpp"

#include <algorithm>
#include <cmath>

#include "bomtsp/errors.hpp"
#include "bomtsp/matching.hpp"
#include "bomtsp/rng.hpp"

namespace bomtsp {

EdgeList standard_mst(const Instance& inst, uint64_t seed) {
  if (inst.kind != MetricKind::kGraph) {
    return minimum_spanning_tree(
        inst.n, [&](int i, int j) { return inst.cost(i, j); });
  }
  // Perturbations stay below 1/(2n^2) each, so their sum over any tree is
  // less than the distance between distinct integer tree costs.
  const double eps = 0.5 / (double(inst.n) * inst.n);
  return minimum_spanning_tree(inst.n, [&](int i, int j) {
    const int a = std::min(i, j), b = std::max(i, j);
    const uint64_t h = mix_seed(seed, uint64_t(a) << 32 | uint64_t(b));
    return inst.cost(i, j) + eps * ((h >> 11) * 0x1.0p-53);
  });
}

double tree_cost(const Instance& inst, const EdgeList& tree) {
  double total = 0.0;
  for (auto [u, v] : tree) total += inst.cost(u, v);
  return total;
}

std::vector<int> eulerian_circuit(int n, const EdgeList& edges, int start) {
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (to, edge id)
  for (int e = 0; e < int(edges.size()); ++e) {
    adj[edges[e].first].emplace_back(edges[e].second, e);
    adj[edges[e].second].emplace_back(edges[e].first, e);
  }
  std::vector<char> used(edges.size(), 0);
  std::vector<size_t> it(n, 0);
  std::vector<int> stack{start}, walk;
  walk.reserve(edges.size() + 1);
  while (!stack.empty()) {
    const int u = stack.back();
    if (it[u] == adj[u].size()) {
      walk.push_back(u);
      stack.pop_back();
      continue;
    }
    const auto [v, e] = adj[u][it[u]++];
    if (used[e]) continue;
    used[e] = 1;
    stack.push_back(v);
  }
  if (walk.size() != edges.size() + 1)
    throw ContractViolation("multigraph is not Eulerian-connected");
  return walk;
}

namespace {

std::vector<int> plain_shortcut(int n, const std::vector<int>& walk) {
  std::vector<char> seen(n, 0);
  std::vector<int> tour;
  tour.reserve(n);
  for (int v : walk)
    if (!seen[v]) {
      seen[v] = 1;
      tour.push_back(v);
    }
  return tour;
}

}  // namespace

std::vector<int> shortcut_walk(const Instance& inst, const std::vector<int>& walk) {
  const int n = inst.n;
  // Doubly linked path over first occurrences, greedily revised.
  std::vector<int> prev(n, -1), next(n, -1);
  std::vector<char> seen(n, 0);
  const int anchor = walk.front();
  seen[anchor] = 1;
  int tail = anchor;
  for (size_t i = 1; i + 1 < walk.size(); ++i) {  // last element repeats start
    const int v = walk[i];
    if (!seen[v]) {
      seen[v] = 1;
      next[tail] = v;
      prev[v] = tail;
      tail = v;
      continue;
    }
    if (v == tail || v == anchor) continue;
    const int pv = prev[v], nv = next[v];
    const double gain = inst.cost(pv, v) + inst.cost(v, nv) - inst.cost(pv, nv);
    if (inst.cost(tail, v) < gain) {
      next[pv] = nv;
      prev[nv] = pv;
      next[tail] = v;
      prev[v] = tail;
      next[v] = -1;
      tail = v;
    }
  }
  std::vector<int> tour;
  tour.reserve(n);
  for (int v = anchor; v != -1; v = next[v]) tour.push_back(v);
  if (int(tour.size()) != n)
    throw ContractViolation("shortcut lost vertices");

  const std::vector<int> plain = plain_shortcut(n, walk);
  return inst.tour_cost(plain) < inst.tour_cost(tour) ? plain : tour;
}

ChristofidesResult christofides_from_tree(const Instance& inst, const EdgeList& tree) {
  if (!is_spanning_tree(inst.n, tree))
    throw ContractViolation("christofides needs a spanning tree");
  ChristofidesResult res;
  res.tree = tree;
  res.tree_cost = tree_cost(inst, tree);

  std::vector<int> degree(inst.n, 0);
  for (auto [u, v] : tree) {
    ++degree[u];
    ++degree[v];
  }
  for (int v = 0; v < inst.n; ++v)
    if (degree[v] % 2 == 1) res.odd.push_back(v);

  const auto& odd = res.odd;
  const auto odd_cost = [&](int a, int b) { return inst.cost(odd[a], odd[b]); };
  const auto mate = min_weight_perfect_matching(int(odd.size()), odd_cost);

  EdgeList multigraph = tree;
  for (int a = 0; a < int(odd.size()); ++a)
    if (mate[a] > a) {
      res.matching.emplace_back(odd[a], odd[mate[a]]);
      res.matching_cost += inst.cost(odd[a], odd[mate[a]]);
      multigraph.emplace_back(odd[a], odd[mate[a]]);
    }
  res.walk_cost = res.tree_cost + res.matching_cost;

  const auto walk = eulerian_circuit(inst.n, multigraph, 0);
  res.tour = shortcut_walk(inst, walk);
  res.tour_cost = inst.tour_cost(res.tour);
  return res;
}

ChristofidesResult run_standard(const Instance& inst, uint64_t seed) {
  return christofides_from_tree(inst, standard_mst(inst, seed));
}

}  // namespace bomtsp
