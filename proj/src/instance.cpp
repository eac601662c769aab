#include "bomtsp/instance.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "bomtsp/errors.hpp"

namespace bomtsp {

const char* metric_kind_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::kEuclid2D: return "EUC_2D";
    case MetricKind::kCeil2D: return "CEIL_2D";
    case MetricKind::kGeo: return "GEO";
    case MetricKind::kExplicit: return "EXPLICIT";
    case MetricKind::kGraph: return "GRAPH";
  }
  return "?";
}

int64_t euc2d_cost(double x1, double y1, double x2, double y2) {
  const double dx = x1 - x2, dy = y1 - y2;
  return int64_t(std::llround(std::sqrt(dx * dx + dy * dy)));
}

int64_t ceil2d_cost(double x1, double y1, double x2, double y2) {
  const double dx = x1 - x2, dy = y1 - y2;
  return int64_t(std::ceil(std::sqrt(dx * dx + dy * dy)));
}

namespace {
constexpr double kGeoPi = 3.141592;
constexpr double kGeoRadius = 6378.388;  // km
}  // namespace

// DDD.MM encoding: integer part is degrees, fraction is minutes.
double geo_to_radians(double coord) {
  const double deg = double(int64_t(coord));
  const double min = coord - deg;
  return kGeoPi * (deg + 5.0 * min / 3.0) / 180.0;
}

int64_t geo_cost(double lat1, double lng1, double lat2, double lng2) {
  const double q1 = std::cos(lng1 - lng2);
  const double q2 = std::cos(lat1 - lat2);
  const double q3 = std::cos(lat1 + lat2);
  return int64_t(kGeoRadius *
                     std::acos(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)) +
                 1.0);
}

int Instance::index_of_label(int label) const {
  for (int v = 0; v < n; ++v)
    if (labels[v] == label) return v;
  return -1;
}

double Instance::tour_cost(const std::vector<int>& order) const {
  double total = 0.0;
  for (size_t i = 0; i < order.size(); ++i)
    total += cost(order[i], order[(i + 1) % order.size()]);
  return total;
}

namespace {

std::string upper(std::string s) {
  for (char& c : s) c = char(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// "KEY : value" / "KEY: value" / bare section names.
bool split_keyword(const std::string& line, std::string* key, std::string* val) {
  size_t colon = line.find(':');
  if (colon == std::string::npos) {
    *key = upper(trim(line));
    val->clear();
    return !key->empty();
  }
  *key = upper(trim(line.substr(0, colon)));
  *val = trim(line.substr(colon + 1));
  return true;
}

void check_triangle(Instance* inst) {
  const int n = inst->n;
  const auto& m = inst->matrix;
  auto at = [&](int i, int j) { return m[size_t(i) * n + j]; };
  // Exhaustive for small instances, sampled beyond that.
  if (n <= 256) {
    for (int i = 0; i < n && inst->triangle_ok; ++i)
      for (int j = i + 1; j < n && inst->triangle_ok; ++j)
        for (int k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          if (at(i, j) > at(i, k) + at(k, j) + 1e-9) {
            inst->triangle_ok = false;
            break;
          }
        }
  } else {
    uint64_t state = 0x9e3779b97f4a7c15ULL;
    auto next = [&state]() {
      state ^= state << 13;
      state ^= state >> 7;
      state ^= state << 17;
      return state;
    };
    for (int t = 0; t < 200000 && inst->triangle_ok; ++t) {
      int i = int(next() % uint64_t(n));
      int j = int(next() % uint64_t(n));
      int k = int(next() % uint64_t(n));
      if (i == j || j == k || i == k) continue;
      if (at(i, j) > at(i, k) + at(k, j) + 1e-9) inst->triangle_ok = false;
    }
  }
}

}  // namespace

Instance parse_tsplib(std::istream& in, const std::string& name) {
  Instance inst;
  inst.name = name;
  std::string ewt, ewf, type;
  int dimension = -1;
  std::vector<double> weights;
  bool saw_coords = false, saw_weights = false;

  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    std::string key, val;
    if (!split_keyword(line, &key, &val)) continue;

    if (key == "NAME") {
      if (!val.empty()) inst.name = val;
    } else if (key == "TYPE") {
      type = upper(val);
    } else if (key == "COMMENT") {
      // ignored
    } else if (key == "DIMENSION") {
      dimension = std::stoi(val);
    } else if (key == "EDGE_WEIGHT_TYPE") {
      ewt = upper(val);
    } else if (key == "EDGE_WEIGHT_FORMAT") {
      ewf = upper(val);
    } else if (key == "NODE_COORD_TYPE" || key == "DISPLAY_DATA_TYPE") {
      // ignored
    } else if (key == "NODE_COORD_SECTION") {
      if (dimension <= 0) throw InputError(name + ": DIMENSION missing before coords");
      inst.xs.resize(dimension);
      inst.ys.resize(dimension);
      inst.labels.resize(dimension);
      for (int i = 0; i < dimension; ++i) {
        int label;
        double x, y;
        if (!(in >> label >> x >> y))
          throw InputError(name + ": truncated NODE_COORD_SECTION");
        inst.labels[i] = label;
        inst.xs[i] = x;
        inst.ys[i] = y;
      }
      saw_coords = true;
    } else if (key == "EDGE_WEIGHT_SECTION") {
      if (dimension <= 0) throw InputError(name + ": DIMENSION missing before weights");
      const size_t full = size_t(dimension) * dimension;
      weights.reserve(full);
      double w;
      while (weights.size() < full && in >> w) weights.push_back(w);
      saw_weights = true;
    } else if (key == "DISPLAY_DATA_SECTION") {
      if (dimension <= 0) throw InputError(name + ": DIMENSION missing");
      for (int i = 0; i < dimension; ++i) {
        int label;
        double x, y;
        if (!(in >> label >> x >> y))
          throw InputError(name + ": truncated DISPLAY_DATA_SECTION");
      }
    } else if (key == "EOF") {
      break;
    } else if (key == "FIXED_EDGES_SECTION" || key == "EDGE_DATA_SECTION") {
      throw InputError(name + ": unsupported section " + key);
    }
    // Unknown "KEY: value" lines are skipped.
  }

  if (!type.empty() && type != "TSP")
    throw InputError(name + ": unsupported TYPE " + type);
  if (dimension <= 0) throw InputError(name + ": missing DIMENSION");
  inst.n = dimension;

  if (ewt == "EUC_2D" || ewt == "CEIL_2D" || ewt == "GEO") {
    if (!saw_coords) throw InputError(name + ": missing NODE_COORD_SECTION");
    if (ewt == "EUC_2D") inst.kind = MetricKind::kEuclid2D;
    if (ewt == "CEIL_2D") inst.kind = MetricKind::kCeil2D;
    if (ewt == "GEO") {
      inst.kind = MetricKind::kGeo;
      inst.lat.resize(inst.n);
      inst.lng.resize(inst.n);
      for (int i = 0; i < inst.n; ++i) {
        inst.lat[i] = geo_to_radians(inst.xs[i]);
        inst.lng[i] = geo_to_radians(inst.ys[i]);
      }
    }
  } else if (ewt == "EXPLICIT") {
    if (!saw_weights) throw InputError(name + ": missing EDGE_WEIGHT_SECTION");
    inst.kind = MetricKind::kExplicit;
    const int n = inst.n;
    inst.matrix.assign(size_t(n) * n, 0.0);
    auto at = [&](int i, int j) -> double& { return inst.matrix[size_t(i) * n + j]; };
    size_t need = 0, pos = 0;
    if (ewf == "FULL_MATRIX") need = size_t(n) * n;
    else if (ewf == "UPPER_ROW" || ewf == "LOWER_ROW") need = size_t(n) * (n - 1) / 2;
    else if (ewf == "UPPER_DIAG_ROW" || ewf == "LOWER_DIAG_ROW") need = size_t(n) * (n + 1) / 2;
    else throw InputError(name + ": unsupported EDGE_WEIGHT_FORMAT " + ewf);
    if (weights.size() < need)
      throw InputError(name + ": EDGE_WEIGHT_SECTION too short");
    if (ewf == "FULL_MATRIX") {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) at(i, j) = weights[pos++];
    } else if (ewf == "UPPER_ROW") {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) at(i, j) = at(j, i) = weights[pos++];
    } else if (ewf == "LOWER_ROW") {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) at(i, j) = at(j, i) = weights[pos++];
    } else if (ewf == "UPPER_DIAG_ROW") {
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) at(i, j) = at(j, i) = weights[pos++];
    } else {  // LOWER_DIAG_ROW
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) at(i, j) = at(j, i) = weights[pos++];
    }
    for (int i = 0; i < n; ++i) at(i, i) = 0.0;
    if (inst.labels.empty()) {
      inst.labels.resize(n);
      for (int i = 0; i < n; ++i) inst.labels[i] = i + 1;
    }
    check_triangle(&inst);
    if (!inst.triangle_ok)
      std::cerr << "warning: " << inst.name
                << ": matrix violates the triangle inequality; shortcutting "
                   "may not reduce cost\n";
  } else if (ewt.empty()) {
    throw InputError(name + ": missing EDGE_WEIGHT_TYPE");
  } else {
    throw InputError(name + ": unsupported EDGE_WEIGHT_TYPE " + ewt);
  }

  if (inst.labels.empty()) {
    inst.labels.resize(inst.n);
    for (int i = 0; i < inst.n; ++i) inst.labels[i] = i + 1;
  }
  if (inst.n < 3) throw InputError(name + ": need at least 3 vertices");
  return inst;
}

Instance parse_graph_edges(std::istream& in, const std::string& name) {
  std::vector<std::pair<int, int>> raw;
  std::map<int, int> seen;  // label -> provisional id
  std::string line;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream ls(line);
    long long a, b;
    if (!(ls >> a >> b)) throw InputError(name + ": bad edge line: " + line);
    if (a == b) continue;
    raw.emplace_back(int(a), int(b));
    seen.emplace(int(a), 0);
    seen.emplace(int(b), 0);
  }
  if (raw.empty()) throw InputError(name + ": no edges");

  int m = 0;
  for (auto& kv : seen) kv.second = m++;
  std::vector<std::vector<int>> adj(m);
  std::set<std::pair<int, int>> dedup;
  for (auto [a, b] : raw) {
    int u = seen[a], v = seen[b];
    if (u > v) std::swap(u, v);
    if (!dedup.insert({u, v}).second) continue;
    adj[u].push_back(v);
    adj[v].push_back(u);
  }

  // Largest connected component, ties broken by smallest member label.
  std::vector<int> comp(m, -1);
  int best_comp = -1, best_size = 0, ncomp = 0;
  for (int s = 0; s < m; ++s) {
    if (comp[s] >= 0) continue;
    int size = 0;
    std::deque<int> bfs{s};
    comp[s] = ncomp;
    while (!bfs.empty()) {
      int u = bfs.front();
      bfs.pop_front();
      ++size;
      for (int v : adj[u])
        if (comp[v] < 0) {
          comp[v] = ncomp;
          bfs.push_back(v);
        }
    }
    if (size > best_size) {
      best_size = size;
      best_comp = ncomp;
    }
    ++ncomp;
  }

  Instance inst;
  inst.name = name;
  inst.kind = MetricKind::kGraph;
  inst.n = best_size;
  inst.labels.reserve(best_size);
  std::vector<int> to_new(m, -1);
  for (auto& kv : seen) {  // map iteration is label-sorted
    int old_id = kv.second;
    if (comp[old_id] == best_comp) {
      to_new[old_id] = int(inst.labels.size());
      inst.labels.push_back(kv.first);
    }
  }
  for (auto [u, v] : dedup)
    if (to_new[u] >= 0 && to_new[v] >= 0) {
      int a = to_new[u], b = to_new[v];
      if (a > b) std::swap(a, b);
      inst.graph_edges.emplace_back(a, b);
    }
  std::sort(inst.graph_edges.begin(), inst.graph_edges.end());

  const int n = inst.n;
  if (n < 3) throw InputError(name + ": largest component has fewer than 3 vertices");
  std::vector<std::vector<int>> nadj(n);
  for (auto [u, v] : inst.graph_edges) {
    nadj[u].push_back(v);
    nadj[v].push_back(u);
  }
  inst.matrix.assign(size_t(n) * n, 0.0);
  std::vector<int> dist(n);
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::deque<int> bfs{s};
    while (!bfs.empty()) {
      int u = bfs.front();
      bfs.pop_front();
      for (int v : nadj[u])
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          bfs.push_back(v);
        }
    }
    for (int t = 0; t < n; ++t) inst.matrix[size_t(s) * n + t] = double(dist[t]);
  }
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);

  std::string stem = path;
  size_t slash = stem.find_last_of('/');
  std::string base = slash == std::string::npos ? stem : stem.substr(slash + 1);
  size_t dot = base.find_last_of('.');
  std::string name = dot == std::string::npos ? base : base.substr(0, dot);

  // Sniff: TSPLIB files start with KEY[: value] header lines.
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string content = buf.str();
  bool tsplib = content.find("DIMENSION") != std::string::npos &&
                (content.find("NODE_COORD_SECTION") != std::string::npos ||
                 content.find("EDGE_WEIGHT_SECTION") != std::string::npos);
  std::istringstream stream(content);
  Instance inst = tsplib ? parse_tsplib(stream, name) : parse_graph_edges(stream, name);

  std::string opt_path = dot == std::string::npos
                             ? path + ".opt"
                             : path.substr(0, path.size() - (base.size() - dot)) + ".opt";
  std::ifstream optf(opt_path);
  if (optf) {
    double v;
    if (optf >> v) {
      inst.has_opt = true;
      inst.opt = v;
    }
  }
  return inst;
}

std::vector<double> all_pairs_costs(const Instance& inst) {
  std::vector<double> out(size_t(inst.n) * inst.n, 0.0);
  for (int i = 0; i < inst.n; ++i)
    for (int j = i + 1; j < inst.n; ++j)
      out[size_t(i) * inst.n + j] = out[size_t(j) * inst.n + i] = inst.cost(i, j);
  return out;
}

void write_tsplib(std::ostream& out, const Instance& inst) {
  out << "NAME : " << inst.name << "\n";
  out << "TYPE : TSP\n";
  out << "DIMENSION : " << inst.n << "\n";
  switch (inst.kind) {
    case MetricKind::kEuclid2D:
    case MetricKind::kCeil2D:
    case MetricKind::kGeo: {
      out << "EDGE_WEIGHT_TYPE : " << metric_kind_name(inst.kind) << "\n";
      out << "NODE_COORD_SECTION\n";
      char buf[96];
      for (int i = 0; i < inst.n; ++i) {
        std::snprintf(buf, sizeof buf, "%d %.6f %.6f\n", inst.labels[i],
                      inst.xs[i], inst.ys[i]);
        out << buf;
      }
      break;
    }
    case MetricKind::kExplicit: {
      out << "EDGE_WEIGHT_TYPE : EXPLICIT\n";
      out << "EDGE_WEIGHT_FORMAT : FULL_MATRIX\n";
      out << "EDGE_WEIGHT_SECTION\n";
      for (int i = 0; i < inst.n; ++i) {
        for (int j = 0; j < inst.n; ++j)
          out << (j ? " " : "") << inst.matrix[size_t(i) * inst.n + j];
        out << "\n";
      }
      break;
    }
    case MetricKind::kGraph:
      throw InputError("graph instances are written as edge lists");
  }
  out << "EOF\n";
}

void write_graph_edges(std::ostream& out, const Instance& inst) {
  out << "# " << inst.name << " : " << inst.n << " vertices, "
      << inst.graph_edges.size() << " edges\n";
  for (auto [u, v] : inst.graph_edges)
    out << inst.labels[u] << " " << inst.labels[v] << "\n";
}

std::vector<int> parse_tour(std::istream& in, const Instance& inst) {
  std::vector<int> order;
  std::vector<char> used(inst.n, 0);
  std::string line;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    int label = std::stoi(line);
    int v = inst.index_of_label(label);
    if (v < 0) throw InputError("tour references unknown vertex " + line);
    if (used[v]) throw InputError("tour repeats vertex " + line);
    used[v] = 1;
    order.push_back(v);
  }
  if (int(order.size()) != inst.n) throw InputError("tour does not cover all vertices");
  return order;
}

void write_tour(std::ostream& out, const Instance& inst,
                const std::vector<int>& order, double cost) {
  for (int v : order) out << inst.labels[v] << "\n";
  out << "# cost " << cost << "\n";
}

}  // namespace bomtsp
