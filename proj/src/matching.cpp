#include "bomtsp/matching.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <vector>

#include "bomtsp/errors.hpp"

namespace bomtsp {
namespace {

// Primal-dual blossom algorithm for maximum-weight perfect matching with
// O(n^3) dual updates.  Vertices are 1..n, shrunk blossoms take ids above n.
// g[u][v] caches, per pair of alive nodes, the best underlying real edge.
struct Blossom {
  struct E {
    int u, v;
    long long w;
  };
  static constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

  int n, n_x;
  std::vector<std::vector<E>> g;
  std::vector<long long> lab;
  std::vector<int> match, slack, st, pa, S, vis;
  std::vector<std::vector<int>> flower;
  std::vector<std::vector<int>> flower_from;
  std::deque<int> q;
  int vis_t = 0;
  long long guard = 0;

  explicit Blossom(int n_real) : n(n_real), n_x(n_real) {
    const int N = 2 * n + 8;
    g.assign(N, std::vector<E>(N));
    for (int u = 0; u < N; ++u)
      for (int v = 0; v < N; ++v) g[u][v] = {u, v, 0};
    lab.assign(N, 0);
    match.assign(N, 0);
    slack.assign(N, 0);
    st.assign(N, 0);
    pa.assign(N, 0);
    S.assign(N, -1);
    vis.assign(N, 0);
    flower.assign(N, {});
    flower_from.assign(N, std::vector<int>(n + 1, 0));
  }

  long long e_delta(const E& e) const {
    return lab[e.u] + lab[e.v] - g[e.u][e.v].w * 2;
  }

  void update_slack(int u, int x) {
    if (!slack[x] || e_delta(g[u][x]) < e_delta(g[slack[x]][x])) slack[x] = u;
  }

  void set_slack(int x) {
    slack[x] = 0;
    for (int u = 1; u <= n; ++u)
      if (g[u][x].w > 0 && st[u] != x && S[st[u]] == 0) update_slack(u, x);
  }

  void q_push(int x) {
    if (x <= n) {
      q.push_back(x);
    } else {
      for (int t : flower[x]) q_push(t);
    }
  }

  void set_st(int x, int b) {
    st[x] = b;
    if (x > n)
      for (int t : flower[x]) set_st(t, b);
  }

  // Position of sub-flower xr inside b, made even by flipping cycle direction
  // (matched pairs sit at positions (2i-1, 2i), which the flip preserves).
  int get_pr(int b, int xr) {
    int pr = int(std::find(flower[b].begin(), flower[b].end(), xr) -
                 flower[b].begin());
    if (pr % 2 == 1) {
      std::reverse(flower[b].begin() + 1, flower[b].end());
      return int(flower[b].size()) - pr;
    }
    return pr;
  }

  void set_match(int u, int v) {
    match[u] = g[u][v].v;
    if (u <= n) return;
    const E e = g[u][v];
    const int xr = flower_from[u][e.u];
    const int pr = get_pr(u, xr);
    for (int i = 0; i < pr; ++i) set_match(flower[u][i], flower[u][i ^ 1]);
    set_match(xr, v);
    std::rotate(flower[u].begin(), flower[u].begin() + pr, flower[u].end());
  }

  void augment(int u, int v) {
    for (;;) {
      const int xnv = st[match[u]];
      set_match(u, v);
      if (!xnv) return;
      set_match(xnv, st[pa[xnv]]);
      u = st[pa[xnv]];
      v = xnv;
    }
  }

  int get_lca(int u, int v) {
    for (++vis_t; u || v; std::swap(u, v)) {
      if (u == 0) continue;
      if (vis[u] == vis_t) return u;
      vis[u] = vis_t;
      u = st[match[u]];
      if (u) u = st[pa[u]];
    }
    return 0;
  }

  void add_blossom(int u, int lca, int v) {
    int b = n + 1;
    while (b <= n_x && st[b]) ++b;
    if (b > n_x) ++n_x;
    lab[b] = 0;
    S[b] = 0;
    match[b] = match[lca];
    flower[b] = {lca};
    for (int x = u, y; x != lca; x = st[pa[y]]) {
      flower[b].push_back(x);
      flower[b].push_back(y = st[match[x]]);
      q_push(y);
    }
    std::reverse(flower[b].begin() + 1, flower[b].end());
    for (int x = v, y; x != lca; x = st[pa[y]]) {
      flower[b].push_back(x);
      flower[b].push_back(y = st[match[x]]);
      q_push(y);
    }
    set_st(b, b);
    for (int x = 1; x <= n_x; ++x) g[b][x].w = g[x][b].w = 0;
    for (int x = 1; x <= n; ++x) flower_from[b][x] = 0;
    for (int xs : flower[b]) {
      for (int x = 1; x <= n_x; ++x)
        if (g[b][x].w == 0 ||
            (g[xs][x].w > 0 && e_delta(g[xs][x]) < e_delta(g[b][x]))) {
          if (g[xs][x].w > 0) {
            g[b][x] = g[xs][x];
            g[x][b] = g[x][xs];
          }
        }
      for (int x = 1; x <= n; ++x)
        if (flower_from[xs][x]) flower_from[b][x] = xs;
    }
    set_slack(b);
  }

  void expand_blossom(int b) {
    for (int t : flower[b]) set_st(t, t);
    const int xr = flower_from[b][g[b][pa[b]].u];
    const int pr = get_pr(b, xr);
    // Tree side: base..xr alternates inner/outer; the rest goes free.
    for (int i = 0; i + 1 < pr; i += 2) {
      const int xs = flower[b][i];
      const int xns = flower[b][i + 1];
      pa[xs] = g[xns][xs].u;
      S[xs] = 1;
      S[xns] = 0;
      slack[xs] = 0;
      set_slack(xns);
      q_push(xns);
    }
    S[xr] = 1;
    pa[xr] = pa[b];
    slack[xr] = 0;
    for (int i = pr + 1; i < int(flower[b].size()); ++i) {
      S[flower[b][i]] = -1;
      set_slack(flower[b][i]);
    }
    st[b] = 0;
  }

  bool on_found_edge(const E e) {
    const int u = st[e.u], v = st[e.v];
    if (S[v] == -1) {
      pa[v] = e.u;
      S[v] = 1;
      const int nu = st[match[v]];
      slack[v] = slack[nu] = 0;
      S[nu] = 0;
      q_push(nu);
    } else if (S[v] == 0) {
      const int lca = get_lca(u, v);
      if (!lca) {
        augment(u, v);
        augment(v, u);
        return true;
      }
      add_blossom(u, lca, v);
    }
    return false;
  }

  bool matching() {
    std::fill(S.begin(), S.end(), -1);
    std::fill(slack.begin(), slack.end(), 0);
    q.clear();
    for (int x = 1; x <= n_x; ++x)
      if (st[x] == x && !match[x]) {
        pa[x] = 0;
        S[x] = 0;
        q_push(x);
      }
    if (q.empty()) return false;
    for (;;) {
      if (++guard > 64LL * n * n * n + 1000000)
        throw NumericalError("matching did not converge");
      while (!q.empty()) {
        const int u = q.front();
        q.pop_front();
        if (S[st[u]] == 1) continue;
        for (int v = 1; v <= n; ++v)
          if (g[u][v].w > 0 && st[u] != st[v]) {
            if (e_delta(g[u][v]) == 0) {
              if (on_found_edge(g[u][v])) return true;
            } else {
              update_slack(u, st[v]);
            }
          }
      }
      long long d = kInf;
      for (int b = n + 1; b <= n_x; ++b)
        if (st[b] == b && S[b] == 1) d = std::min(d, lab[b] / 2);
      for (int x = 1; x <= n_x; ++x)
        if (st[x] == x && slack[x]) {
          if (S[x] == -1)
            d = std::min(d, e_delta(g[slack[x]][x]));
          else if (S[x] == 0)
            d = std::min(d, e_delta(g[slack[x]][x]) / 2);
        }
      if (d >= kInf) return false;  // no augmenting structure left
      for (int u = 1; u <= n; ++u) {
        if (S[st[u]] == 0)
          lab[u] -= d;
        else if (S[st[u]] == 1)
          lab[u] += d;
      }
      for (int b = n + 1; b <= n_x; ++b)
        if (st[b] == b) {
          if (S[b] == 0)
            lab[b] += 2 * d;
          else if (S[b] == 1)
            lab[b] -= 2 * d;
        }
      for (int x = 1; x <= n_x; ++x)
        if (st[x] == x && slack[x] && st[slack[x]] != x &&
            e_delta(g[slack[x]][x]) == 0)
          if (on_found_edge(g[slack[x]][x])) return true;
      for (int b = n + 1; b <= n_x; ++b)
        if (st[b] == b && S[b] == 1 && lab[b] == 0) expand_blossom(b);
    }
  }

  // weights[u][v] must be positive for real edges, 0 for absent ones.
  int run() {
    for (int u = 1; u <= n; ++u) {
      st[u] = u;
      flower[u].clear();
    }
    long long w_max = 0;
    for (int u = 1; u <= n; ++u)
      for (int v = 1; v <= n; ++v) {
        flower_from[u][v] = (u == v ? u : 0);
        w_max = std::max(w_max, g[u][v].w);
      }
    for (int u = 1; u <= n; ++u) lab[u] = w_max;
    int n_matches = 0;
    while (matching()) ++n_matches;
    return n_matches;
  }
};

}  // namespace

std::vector<int> min_weight_perfect_matching(
    int n, const std::function<double(int, int)>& cost) {
  if (n % 2 != 0) throw ContractViolation("perfect matching needs even n");
  std::vector<int> mate(n, -1);
  if (n == 0) return mate;
  if (n == 2) {
    mate[0] = 1;
    mate[1] = 0;
    return mate;
  }

  // Decide the integer scale.
  std::vector<double> w(size_t(n) * n, 0.0);
  bool integral = true;
  double w_abs = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double c = cost(i, j);
      w[size_t(i) * n + j] = w[size_t(j) * n + i] = c;
      if (std::abs(c - std::round(c)) > 1e-9) integral = false;
      w_abs = std::max(w_abs, std::abs(c));
    }
  const double scale = integral ? 1.0 : double(1 << 20);

  Blossom bl(n);
  long long w_max = 0;
  std::vector<long long> iw(size_t(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      iw[size_t(i) * n + j] = (long long)std::llround(w[size_t(i) * n + j] * scale);
      w_max = std::max(w_max, iw[size_t(i) * n + j]);
    }
  // Maximize transformed weights (all >= 1) to minimize the original cost.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      bl.g[i + 1][j + 1].w = w_max + 1 - iw[size_t(i) * n + j];
    }
  const int n_matches = bl.run();
  if (2 * n_matches != n)
    throw NumericalError("no perfect matching on a complete graph");
  for (int v = 0; v < n; ++v) mate[v] = bl.match[v + 1] - 1;
  for (int v = 0; v < n; ++v)
    if (mate[v] < 0 || mate[v] >= n || mate[mate[v]] != v)
      throw NumericalError("matching is not an involution");
  return mate;
}

double matching_cost(const std::vector<int>& mate,
                     const std::function<double(int, int)>& cost) {
  double total = 0.0;
  for (int v = 0; v < int(mate.size()); ++v)
    if (mate[v] > v) total += cost(v, mate[v]);
  return total;
}

}  // namespace bomtsp
