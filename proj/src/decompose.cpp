#include "bomtsp/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "bomtsp/errors.hpp"
#include "bomtsp/lp.hpp"
#include "bomtsp/rng.hpp"

namespace bomtsp {

std::vector<double> TreeCombination::normalized_weights() const {
  std::vector<double> w = weights;
  const double total = coverage();
  if (total <= 0.0) throw ContractViolation("combination has no weight");
  for (double& v : w) v /= total;
  return w;
}

void write_combination(std::ostream& out, const Instance& inst,
                       const TreeCombination& combo) {
  out << "combination n=" << combo.n << " trees=" << combo.trees.size()
      << " kind=" << (combo.from_split ? "split" : "colgen")
      << " K=" << combo.K << "\n";
  char buf[64];
  out << "weights";
  for (double w : combo.weights) {
    std::snprintf(buf, sizeof buf, " %.17g", w);
    out << buf;
  }
  out << "\n";
  for (size_t t = 0; t < combo.trees.size(); ++t) {
    out << "tree " << t << "\n";
    for (auto [u, v] : combo.trees[t])
      out << inst.labels[u] << " " << inst.labels[v] << "\n";
  }
  out << "leftover\n";
  for (size_t i = 0; i < combo.leftover.size(); ++i)
    out << inst.labels[combo.leftover[i].first] << " "
        << inst.labels[combo.leftover[i].second] << " "
        << combo.leftover_mult[i] << "\n";
  out << "end\n";
}

TreeCombination parse_combination(std::istream& in, const Instance& inst) {
  std::unordered_map<int, int> by_label;
  for (int v = 0; v < inst.n; ++v) by_label[inst.labels[v]] = v;
  const auto to_id = [&](int label) {
    const auto it = by_label.find(label);
    if (it == by_label.end())
      throw InputError("combination references unknown vertex " +
                       std::to_string(label));
    return it->second;
  };

  TreeCombination combo;
  std::string line, word;
  if (!std::getline(in, line)) throw InputError("empty combination file");
  {
    std::istringstream hs(line);
    hs >> word;
    if (word != "combination") throw InputError("bad combination header");
    size_t ntrees = 0;
    while (hs >> word) {
      const size_t eq = word.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = word.substr(0, eq), val = word.substr(eq + 1);
      if (key == "n") combo.n = std::stoi(val);
      if (key == "trees") ntrees = std::stoul(val);
      if (key == "kind") combo.from_split = val == "split";
      if (key == "K") combo.K = std::stoll(val);
    }
    combo.trees.resize(ntrees);
  }
  if (!std::getline(in, line)) throw InputError("missing weights line");
  {
    std::istringstream ws(line);
    ws >> word;
    if (word != "weights") throw InputError("missing weights line");
    double w;
    while (ws >> w) combo.weights.push_back(w);
    if (combo.weights.size() != combo.trees.size())
      throw InputError("weight count does not match tree count");
  }
  int current = -2;  // -2 none, -1 leftover, >= 0 tree index
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    if (!(ls >> word)) continue;
    if (word == "tree") {
      int idx;
      if (!(ls >> idx) || idx < 0 || idx >= int(combo.trees.size()))
        throw InputError("bad tree header: " + line);
      current = idx;
    } else if (word == "leftover") {
      current = -1;
    } else if (word == "end") {
      current = -2;
      break;
    } else {
      int b;
      if (!(ls >> b)) throw InputError("bad edge line: " + line);
      int u = to_id(std::stoi(word)), v = to_id(b);
      if (u > v) std::swap(u, v);
      if (current >= 0) {
        combo.trees[current].emplace_back(u, v);
      } else if (current == -1) {
        long long mult = 1;
        ls >> mult;
        combo.leftover.emplace_back(u, v);
        combo.leftover_mult.push_back(mult);
      } else {
        throw InputError("edge line outside any block: " + line);
      }
    }
  }
  for (auto& tree : combo.trees) std::sort(tree.begin(), tree.end());
  return combo;
}

void verify_combination(const TreeCombination& combo, const EdgeValues& target,
                        double tol) {
  if (combo.n != target.n) throw ContractViolation("combination/target size");
  if (combo.trees.empty()) throw ContractViolation("combination has no trees");
  if (combo.trees.size() != combo.weights.size())
    throw ContractViolation("combination weights mismatch");

  std::map<Edge, double> cover;
  for (size_t t = 0; t < combo.trees.size(); ++t) {
    if (combo.weights[t] < -tol)
      throw ContractViolation("negative tree weight");
    if (!is_spanning_tree(combo.n, combo.trees[t]))
      throw ContractViolation("combination tree is not spanning");
    for (auto e : combo.trees[t]) cover[e] += combo.weights[t];
  }
  if (combo.from_split) {
    if (combo.K <= 0) throw ContractViolation("split combination without K");
    for (size_t i = 0; i < combo.leftover.size(); ++i)
      cover[combo.leftover[i]] += double(combo.leftover_mult[i]) / double(combo.K);
  }

  std::map<Edge, double> want;
  for (size_t i = 0; i < target.edges.size(); ++i)
    want[target.edges[i]] += target.values[i];
  for (const auto& [e, val] : cover) {
    const auto it = want.find(e);
    if (it == want.end())
      throw ContractViolation("combination uses an edge outside the target");
    if (val > it->second + tol)
      throw ContractViolation("combination overshoots an edge value");
    if (combo.from_split && std::abs(val - it->second) > tol)
      throw ContractViolation("split combination must match the target exactly");
  }
  if (combo.from_split) {
    for (const auto& [e, val] : want)
      if (val > tol && !cover.count(e))
        throw ContractViolation("split combination misses a target edge");
    if (std::abs(combo.coverage() - 1.0) > tol)
      throw ContractViolation("split weights must sum to one");
  } else if (combo.coverage() > 1.0 + tol) {
    throw ContractViolation("tree weights exceed unit mass");
  }
}

ColgenResult colgen_decompose(const EdgeValues& z, ColgenOptions opt) {
  const int n = z.n;
  const int m = int(z.edges.size());
  {
    std::vector<int> comp;
    if (connected_components(n, z.edges, &comp) != 1)
      throw InputError("tree decomposition needs a connected support");
  }

  LpProblem lp;
  for (int i = 0; i < m; ++i) lp.add_var(1.0, 0.0, kLpInf);
  for (int i = 0; i < m; ++i)
    lp.add_row(RowSense::kEq, z.values[i], {{i, 1.0}});
  LpSolver solver(std::move(lp));

  std::vector<EdgeList> col_trees;   // per tree column, aligned with var ids
  std::vector<int> col_vars;
  std::set<std::vector<int>> signatures;
  const auto add_tree = [&](const std::vector<int>& idx) -> bool {
    if (!signatures.insert(idx).second) return false;
    std::vector<std::pair<int, double>> entries;
    entries.reserve(idx.size());
    EdgeList tree;
    tree.reserve(idx.size());
    for (int i : idx) {
      entries.emplace_back(i, 1.0);
      tree.push_back(z.edges[i]);
    }
    col_vars.push_back(solver.add_column(0.0, 0.0, kLpInf, entries));
    col_trees.push_back(std::move(tree));
    return true;
  };

  add_tree(mst_edge_indices(n, z.edges, z.values, /*maximize=*/true));
  for (int j = 1; j < opt.initial_columns; ++j) {
    auto gen = make_stream(opt.seed, uint64_t(j));
    std::vector<double> w(z.values);
    for (double& v : w) v *= 1.0 + 0.25 * uniform01(gen);
    add_tree(mst_edge_indices(n, z.edges, w, /*maximize=*/true));
  }

  LpResult res = solver.solve();
  const auto require_optimal = [&](const LpResult& r) {
    if (r.status != LpStatus::kOptimal)
      throw NumericalError("decomposition master LP failed");
  };
  require_optimal(res);

  ColgenResult out;
  std::vector<double> history{res.objective};
  int stuck = 0;
  for (int iter = 1; iter <= opt.max_iters; ++iter) {
    out.iterations = iter;
    const auto best = mst_edge_indices(n, z.edges, res.duals, /*maximize=*/true);
    double price = 0.0;
    for (int i : best) price += res.duals[i];
    if (price <= opt.tol) {
      out.reached_optimal = true;
      break;
    }
    if (!add_tree(best)) {
      // Degenerate repeat of an existing column; the master cannot improve.
      if (++stuck >= 5) break;
    } else {
      stuck = 0;
    }
    res = solver.resolve();
    require_optimal(res);
    history.push_back(res.objective);
    const int lag = int(history.size()) - 1 - opt.window;
    if (!opt.to_optimality && lag >= 0 &&
        history[lag] - res.objective < opt.drop)
      break;
  }

  out.objective = res.objective;
  out.combo.n = n;
  for (size_t t = 0; t < col_trees.size(); ++t) {
    const double y = res.x[col_vars[t]];
    if (y > 1e-9) {
      out.combo.trees.push_back(col_trees[t]);
      std::sort(out.combo.trees.back().begin(), out.combo.trees.back().end());
      out.combo.weights.push_back(y);
    }
  }
  verify_combination(out.combo, z, 1e-6);
  return out;
}

namespace {

// Smallest continued-fraction denominator approximating v within tol.
long long best_denominator(double v, long long max_den, double tol) {
  long long p0 = 1, q0 = 0, p1 = (long long)std::floor(v), q1 = 1;
  double frac = v - std::floor(v);
  for (int it = 0; it < 64; ++it) {
    if (std::abs(v - double(p1) / double(q1)) <= tol) return q1;
    if (frac < 1e-15) break;
    const double inv = 1.0 / frac;
    const long long a = (long long)std::floor(inv);
    frac = inv - std::floor(inv);
    const long long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
  }
  return max_den + 1;
}

struct SplitRecord {
  int z, x, y;
  long long t;
};

Edge mk_edge(int u, int v) { return u < v ? Edge{u, v} : Edge{v, u}; }

// Sorted-vector tree helpers.
bool tree_has(const EdgeList& tree, Edge e) {
  return std::binary_search(tree.begin(), tree.end(), e);
}
void tree_insert(EdgeList& tree, Edge e) {
  tree.insert(std::upper_bound(tree.begin(), tree.end(), e), e);
}
void tree_remove(EdgeList& tree, Edge e) {
  const auto it = std::lower_bound(tree.begin(), tree.end(), e);
  if (it == tree.end() || *it != e)
    throw ContractViolation("lift-back lost a tree edge");
  tree.erase(it);
}

// Endpoint of `e` in the component of tree-minus-e not containing `z`.
int farther_endpoint(int n, const EdgeList& tree, Edge e, int z) {
  std::vector<std::vector<int>> adj(n);
  for (auto [u, v] : tree) {
    if (Edge{u, v} == e) continue;
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack{z};
  seen[z] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
  }
  if (seen[e.first] == seen[e.second])
    throw ContractViolation("phantom edge is not a tree bridge");
  return seen[e.first] ? e.second : e.first;
}

}  // namespace

TreeCombination split_decompose(const EdgeValues& x, SplitOptions opt) {
  const int n = x.n;
  if (n < 3) throw InputError("splitting off needs n >= 3");

  // Common denominator K and integer multiplicities.
  long long K = 1;
  for (double v : x.values) {
    const long long q = best_denominator(v, opt.max_denominator, opt.rational_tol);
    if (q > opt.max_denominator)
      throw NumericalError("edge value has no small rational form");
    K = std::lcm(K, q);
    if (K > opt.max_denominator)
      throw NumericalError("no common denominator up to " +
                           std::to_string(opt.max_denominator));
  }
  std::map<Edge, long long> mult;
  std::vector<long long> deg(n, 0);
  for (size_t i = 0; i < x.edges.size(); ++i) {
    const double scaled = double(K) * x.values[i];
    const long long m = std::llround(scaled);
    if (std::abs(scaled - double(m)) > 1e-6 * double(K))
      throw NumericalError("edge value is not a multiple of 1/K");
    if (m < 0 || m > K) throw NumericalError("edge multiplicity out of range");
    if (m == 0) continue;
    mult[x.edges[i]] += m;
    deg[x.edges[i].first] += m;
    deg[x.edges[i].second] += m;
  }
  for (int v = 0; v < n; ++v)
    if (deg[v] != 2 * K)
      throw NumericalError("vertex degree is not exactly 2K after scaling");

  const long long target = 2 * K;
  std::vector<char> alive(n, 1);

  // lambda(root, j) >= 2K for every alive j; `skip` is the vertex being
  // split, whose own connectivity is exempt.
  const auto connectivity_ok = [&](int skip) -> bool {
    int root = -1;
    for (int v = 0; v < n && root < 0; ++v)
      if (alive[v] && v != skip) root = v;
    for (int j = root + 1; j < n; ++j) {
      if (!alive[j] || j == skip || j == root) continue;
      MaxFlow mf(n);
      for (const auto& [e, m] : mult)
        if (m > 0) mf.add_undirected(e.first, e.second, std::min(m, target));
      if (mf.max_flow(root, j, target) < target) return false;
    }
    return true;
  };

  if (!connectivity_ok(-1))
    throw InputError("input vector is not 2-connected after scaling");

  // Split vertices by decreasing support degree; keep the final two.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> sup_deg(n, 0);
  for (const auto& [e, m] : mult)
    if (m > 0) {
      ++sup_deg[e.first];
      ++sup_deg[e.second];
    }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return sup_deg[a] > sup_deg[b]; });

  std::vector<SplitRecord> records;
  std::vector<int> stage_vertices;

  const auto mult_of = [&](int u, int v) -> long long {
    const auto it = mult.find(mk_edge(u, v));
    return it == mult.end() ? 0 : it->second;
  };
  const auto bump = [&](int u, int v, long long d) {
    const Edge e = mk_edge(u, v);
    mult[e] += d;
    deg[u] += d;
    deg[v] += d;
    if (mult[e] == 0) mult.erase(e);
  };

  for (int idx = 0; idx < n - 2; ++idx) {
    const int v = order[idx];
    long long attempts = 0;
    while (deg[v] > 0) {
      // Pendant: neighbor of maximum multiplicity.
      int a = -1;
      long long ma = 0;
      std::vector<std::pair<int, long long>> nbr;
      for (const auto& [e, m] : mult) {
        if (m <= 0) continue;
        int u = -1;
        if (e.first == v) u = e.second;
        if (e.second == v) u = e.first;
        if (u < 0) continue;
        nbr.emplace_back(u, m);
        if (m > ma) {
          ma = m;
          a = u;
        }
      }
      std::sort(nbr.begin(), nbr.end());
      if (a < 0) throw ContractViolation("positive degree without neighbors");

      bool committed = false;
      for (const auto& [b, mb] : nbr) {
        if (b == a) continue;
        long long third = 0;
        for (const auto& [u, m] : nbr)
          if (u != a && u != b) third = std::max(third, m);
        long long t = std::min({ma, mb, deg[v] / 2 - third});
        while (t >= 1) {
          if (++attempts > opt.flow_guard * ((long long)nbr.size() + 4))
            throw NumericalError("splitting off did not converge");
          bump(v, a, -t);
          bump(v, b, -t);
          bump(a, b, +t);
          if (connectivity_ok(v)) {
            records.push_back({v, std::min(a, b), std::max(a, b), t});
            committed = true;
            break;
          }
          bump(v, a, +t);
          bump(v, b, +t);
          bump(a, b, -t);
          t /= 2;
        }
        if (committed) break;
      }
      if (!committed && ma >= 2) {
        // Pair two parallel pendant copies; the split collapses to a plain
        // deletion of both, admissible only if connectivity survives it.
        long long t = ma / 2;
        while (t >= 1) {
          if (++attempts > opt.flow_guard * ((long long)nbr.size() + 4))
            throw NumericalError("splitting off did not converge");
          bump(v, a, -2 * t);
          if (connectivity_ok(v)) {
            records.push_back({v, a, a, t});
            committed = true;
            break;
          }
          bump(v, a, +2 * t);
          t /= 2;
        }
      }
      if (!committed)
        throw ContractViolation("no admissible splitting pair at vertex " +
                                std::to_string(v));
    }
    alive[v] = 0;
    stage_vertices.push_back(v);
  }

  // The remaining multigraph must be 2K parallel edges on two vertices.
  int p = -1, q = -1;
  for (int v = 0; v < n; ++v)
    if (alive[v]) (p < 0 ? p : q) = v;
  if (mult.size() != 1 || mult_of(p, q) != target)
    throw ContractViolation("splitting did not reduce to a two-vertex bundle");

  // Initial packing: K single-edge trees, K leftover copies.
  std::vector<EdgeList> trees(size_t(K), EdgeList{mk_edge(p, q)});
  std::map<Edge, long long> leftover;
  leftover[mk_edge(p, q)] = K;

  // Lift the splits back, most recent vertex first.
  for (int s = int(stage_vertices.size()) - 1; s >= 0; --s) {
    const int z = stage_vertices[s];
    std::map<Edge, long long> phantom;
    std::map<int, long long> pool;  // endpoint w -> count of (w, z) units
    for (const auto& r : records) {
      if (r.z != z) continue;
      if (r.x == r.y)
        pool[r.x] += 2 * r.t;  // deletion split: pure leaf supply
      else
        phantom[mk_edge(r.x, r.y)] += r.t;
    }
    if (phantom.empty() && pool.empty())
      throw ContractViolation("split vertex produced no phantom edges");

    // Dismantle leftover phantoms first.
    for (auto& [e, need] : phantom) {
      const long long take = std::min(need, leftover.count(e) ? leftover[e] : 0);
      if (take > 0) {
        leftover[e] -= take;
        if (leftover[e] == 0) leftover.erase(e);
        need -= take;
        pool[e.first] += take;
        pool[e.second] += take;
      }
    }
    // Assign remaining phantom units to trees that hold the edge.
    std::vector<std::vector<Edge>> surrendered(trees.size());
    for (auto& [e, need] : phantom) {
      for (size_t t = 0; t < trees.size() && need > 0; ++t)
        if (tree_has(trees[t], e)) {
          surrendered[t].push_back(e);
          --need;
        }
      if (need != 0)
        throw ContractViolation("phantom units exceed available edges");
    }
    for (size_t t = 0; t < trees.size(); ++t) {
      auto& tree = trees[t];
      if (surrendered[t].empty()) continue;
      // First phantom expands through z; the others reattach one endpoint.
      const Edge first = surrendered[t].front();
      tree_remove(tree, first);
      tree_insert(tree, mk_edge(first.first, z));
      tree_insert(tree, mk_edge(first.second, z));
      for (size_t i = 1; i < surrendered[t].size(); ++i) {
        const Edge e = surrendered[t][i];
        const int far = farther_endpoint(n, tree, e, z);
        const int near = e.first == far ? e.second : e.first;
        tree_remove(tree, e);
        tree_insert(tree, mk_edge(far, z));
        pool[near] += 1;
      }
    }
    // Trees that saw no phantom take a leaf edge into z from the pool.
    for (size_t t = 0; t < trees.size(); ++t) {
      if (!surrendered[t].empty()) continue;
      auto it = pool.begin();
      while (it != pool.end() && it->second == 0) ++it;
      if (it == pool.end())
        throw ContractViolation("leaf pool ran dry during lift-back");
      tree_insert(trees[t], mk_edge(it->first, z));
      --it->second;
    }
    for (const auto& [w, c] : pool)
      if (c > 0) leftover[mk_edge(w, z)] += c;
  }

  // Deduplicate identical trees into weighted entries.
  std::map<EdgeList, long long> dedup;
  for (auto& tree : trees) dedup[tree] += 1;
  TreeCombination combo;
  combo.n = n;
  combo.from_split = true;
  combo.K = K;
  for (const auto& [tree, count] : dedup) {
    combo.trees.push_back(tree);
    combo.weights.push_back(double(count) / double(K));
  }
  for (const auto& [e, c] : leftover)
    if (c > 0) {
      combo.leftover.push_back(e);
      combo.leftover_mult.push_back(c);
    }

  // Exact unit accounting against the scaled input.
  {
    std::map<Edge, long long> units;
    for (size_t t = 0; t < trees.size(); ++t)
      for (auto e : trees[t]) units[e] += 1;
    for (size_t i = 0; i < combo.leftover.size(); ++i)
      units[combo.leftover[i]] += combo.leftover_mult[i];
    std::map<Edge, long long> want;
    for (size_t i = 0; i < x.edges.size(); ++i) {
      const long long m = std::llround(double(K) * x.values[i]);
      if (m > 0) want[x.edges[i]] += m;
    }
    if (units != want)
      throw ContractViolation("lift-back units do not reproduce K times x");
  }
  verify_combination(combo, x, 1e-6);
  return combo;
}

}  // namespace bomtsp
