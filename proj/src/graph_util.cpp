#include "bomtsp/graph_util.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>

#include "bomtsp/errors.hpp"

namespace bomtsp {

bool is_spanning_tree(int n, const EdgeList& edges) {
  if (int(edges.size()) != n - 1) return false;
  Dsu dsu(n);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n || u == v) return false;
    if (!dsu.unite(u, v)) return false;
  }
  return true;
}

EdgeList minimum_spanning_tree(int n, const std::function<double(int, int)>& cost) {
  EdgeList tree;
  if (n <= 1) return tree;
  std::vector<char> in(n, 0);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<int> from(n, 0);
  in[0] = 1;
  for (int v = 1; v < n; ++v) best[v] = cost(0, v);
  tree.reserve(n - 1);
  for (int step = 1; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v)
      if (!in[v] && (pick < 0 || best[v] < best[pick])) pick = v;
    in[pick] = 1;
    const int a = std::min(from[pick], pick), b = std::max(from[pick], pick);
    tree.emplace_back(a, b);
    for (int v = 0; v < n; ++v)
      if (!in[v]) {
        const double c = cost(pick, v);
        if (c < best[v]) {
          best[v] = c;
          from[v] = pick;
        }
      }
  }
  return tree;
}

std::vector<int> mst_edge_indices(int n, const EdgeList& edges,
                                  const std::vector<double>& weight,
                                  bool maximize) {
  std::vector<int> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return maximize ? weight[a] > weight[b] : weight[a] < weight[b];
  });
  Dsu dsu(n);
  std::vector<int> picked;
  picked.reserve(n - 1);
  for (int idx : order) {
    auto [u, v] = edges[idx];
    if (dsu.unite(u, v)) {
      picked.push_back(idx);
      if (int(picked.size()) == n - 1) break;
    }
  }
  if (int(picked.size()) != n - 1)
    throw ContractViolation("edge list does not span all vertices");
  std::sort(picked.begin(), picked.end());
  return picked;
}

std::vector<int> tree_distances(int n, const EdgeList& edges, int root) {
  std::vector<std::vector<int>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<int> dist(n, -1);
  dist[root] = 0;
  std::deque<int> bfs{root};
  while (!bfs.empty()) {
    int u = bfs.front();
    bfs.pop_front();
    for (int v : adj[u])
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        bfs.push_back(v);
      }
  }
  return dist;
}

int connected_components(int n, const EdgeList& edges, std::vector<int>* comp) {
  Dsu dsu(n);
  for (auto [u, v] : edges) dsu.unite(u, v);
  comp->assign(n, -1);
  int count = 0;
  for (int v = 0; v < n; ++v) {
    const int r = dsu.find(v);
    if ((*comp)[r] < 0) (*comp)[r] = count++;
    (*comp)[v] = (*comp)[r];
  }
  return count;
}

double stoer_wagner_min_cut(int n, const std::vector<double>& weights,
                            std::vector<char>* side) {
  std::vector<std::vector<double>> w(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w[i][j] = weights[size_t(i) * n + j];
  std::vector<std::vector<int>> members(n);
  for (int i = 0; i < n; ++i) members[i] = {i};
  std::vector<int> active(n);
  std::iota(active.begin(), active.end(), 0);

  double best = std::numeric_limits<double>::infinity();
  std::vector<char> best_side(n, 0);

  while (active.size() > 1) {
    // Maximum adjacency order over the current supernodes.
    std::vector<double> conn(active.size(), 0.0);
    std::vector<char> added(active.size(), 0);
    int prev = -1, last = -1;
    for (size_t step = 0; step < active.size(); ++step) {
      int pick = -1;
      for (size_t i = 0; i < active.size(); ++i)
        if (!added[i] && (pick < 0 || conn[i] > conn[pick])) pick = int(i);
      added[pick] = 1;
      prev = last;
      last = pick;
      if (step + 1 == active.size()) {
        const double cut = conn[pick];
        if (cut < best) {
          best = cut;
          std::fill(best_side.begin(), best_side.end(), 0);
          for (int v : members[active[pick]]) best_side[v] = 1;
        }
      }
      for (size_t i = 0; i < active.size(); ++i)
        if (!added[i]) conn[i] += w[active[pick]][active[i]];
    }
    // Merge the last two of the order.
    const int a = active[prev], b = active[last];
    for (int i : active) {
      if (i == a || i == b) continue;
      w[a][i] += w[b][i];
      w[i][a] = w[a][i];
    }
    members[a].insert(members[a].end(), members[b].begin(), members[b].end());
    active.erase(std::find(active.begin(), active.end(), b));
  }
  if (side) *side = best_side;
  return best;
}

void MaxFlow::add_edge(int u, int v, int64_t cap) {
  arcs_.push_back({v, head_[u], cap});
  head_[u] = int(arcs_.size()) - 1;
  arcs_.push_back({u, head_[v], 0});
  head_[v] = int(arcs_.size()) - 1;
}

void MaxFlow::add_undirected(int u, int v, int64_t cap) {
  arcs_.push_back({v, head_[u], cap});
  head_[u] = int(arcs_.size()) - 1;
  arcs_.push_back({u, head_[v], cap});
  head_[v] = int(arcs_.size()) - 1;
}

bool MaxFlow::bfs(int s, int t) {
  std::fill(level_.begin(), level_.end(), -1);
  level_[s] = 0;
  std::deque<int> q{s};
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int e = head_[u]; e >= 0; e = arcs_[e].next)
      if (arcs_[e].cap > 0 && level_[arcs_[e].to] < 0) {
        level_[arcs_[e].to] = level_[u] + 1;
        q.push_back(arcs_[e].to);
      }
  }
  return level_[t] >= 0;
}

int64_t MaxFlow::dfs(int u, int t, int64_t pushed) {
  if (u == t || pushed == 0) return pushed;
  int64_t flow = 0;
  for (int& e = it_[u]; e >= 0; e = arcs_[e].next) {
    const int v = arcs_[e].to;
    if (arcs_[e].cap <= 0 || level_[v] != level_[u] + 1) continue;
    const int64_t got = dfs(v, t, std::min(pushed - flow, arcs_[e].cap));
    if (got > 0) {
      arcs_[e].cap -= got;
      arcs_[e ^ 1].cap += got;
      flow += got;
      if (flow == pushed) return flow;
    }
  }
  return flow;
}

int64_t MaxFlow::max_flow(int s, int t, int64_t limit) {
  int64_t flow = 0;
  while (flow < limit && bfs(s, t)) {
    it_ = head_;
    const int64_t got = dfs(s, t, limit - flow);
    if (got == 0) break;
    flow += got;
  }
  return flow;
}

}  // namespace bomtsp
