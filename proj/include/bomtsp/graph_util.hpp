#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace bomtsp {

struct Dsu {
  explicit Dsu(int n) : parent(n), size(n, 1) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
    return true;
  }
  std::vector<int> parent;
  std::vector<int> size;
};

using Edge = std::pair<int, int>;
using EdgeList = std::vector<Edge>;

bool is_spanning_tree(int n, const EdgeList& edges);

// Prim over the complete graph; cost(i, j) is called O(n^2) times.
EdgeList minimum_spanning_tree(int n, const std::function<double(int, int)>& cost);

// Kruskal over an explicit edge list; returns indices into `edges`.
// Throws if the edges do not connect all n vertices.
std::vector<int> mst_edge_indices(int n, const EdgeList& edges,
                                  const std::vector<double>& weight,
                                  bool maximize = false);

// Hop distance from root along tree edges; -1 when unreachable.
std::vector<int> tree_distances(int n, const EdgeList& edges, int root);

// Stoer-Wagner global minimum cut on a dense nonnegative weight matrix.
// Returns the cut weight; `side` is 1 on one shore, 0 on the other.
double stoer_wagner_min_cut(int n, const std::vector<double>& weights,
                            std::vector<char>* side);

// Connected components over an edge list; returns component id per vertex
// and the number of components.
int connected_components(int n, const EdgeList& edges, std::vector<int>* comp);

// Dinic max flow with integer capacities.  add_edge creates a directed arc;
// undirected edges are two arcs sharing capacity handled by the caller.
class MaxFlow {
 public:
  explicit MaxFlow(int n) : head_(n, -1), level_(n), it_(n) {}
  void add_edge(int u, int v, int64_t cap);      // directed
  void add_undirected(int u, int v, int64_t cap);
  // Max flow from s to t, stopping once `limit` is reached.
  int64_t max_flow(int s, int t, int64_t limit);

 private:
  struct Arc {
    int to, next;
    int64_t cap;
  };
  bool bfs(int s, int t);
  int64_t dfs(int u, int t, int64_t pushed);
  std::vector<Arc> arcs_;
  std::vector<int> head_, level_, it_;
};

}  // namespace bomtsp
