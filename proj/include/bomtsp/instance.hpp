#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace bomtsp {

enum class MetricKind { kEuclid2D, kCeil2D, kGeo, kExplicit, kGraph };

const char* metric_kind_name(MetricKind kind);

// A TSP instance with vertices remapped to 0..n-1.  Original labels are kept
// for reporting and file output.  For kGraph the metric is the shortest-path
// hop count on the largest connected component of the input graph.
struct Instance {
  std::string name;
  MetricKind kind = MetricKind::kEuclid2D;
  int n = 0;
  std::vector<double> xs, ys;               // coordinate kinds
  std::vector<double> lat, lng;             // kGeo: radians, fixed at parse time
  std::vector<double> matrix;               // kExplicit / kGraph: n*n row-major
  std::vector<int> labels;                  // internal id -> original label
  std::vector<std::pair<int, int>> graph_edges;  // kGraph: internal ids, u < v
  bool has_opt = false;
  double opt = 0.0;
  bool triangle_ok = true;

  double cost(int i, int j) const;
  int label(int v) const { return labels[v]; }
  int index_of_label(int label) const;  // -1 if absent
  double tour_cost(const std::vector<int>& order) const;
};

// TSPLIB EUC_2D / CEIL_2D / GEO rounding, exposed for tests.
int64_t euc2d_cost(double x1, double y1, double x2, double y2);
int64_t ceil2d_cost(double x1, double y1, double x2, double y2);
double geo_to_radians(double coord);
int64_t geo_cost(double lat1, double lng1, double lat2, double lng2);

inline double Instance::cost(int i, int j) const {
  switch (kind) {
    case MetricKind::kEuclid2D:
      return double(euc2d_cost(xs[i], ys[i], xs[j], ys[j]));
    case MetricKind::kCeil2D:
      return double(ceil2d_cost(xs[i], ys[i], xs[j], ys[j]));
    case MetricKind::kGeo:
      return double(geo_cost(lat[i], lng[i], lat[j], lng[j]));
    default:
      return matrix[size_t(i) * n + j];
  }
}

Instance parse_tsplib(std::istream& in, const std::string& name);
Instance parse_graph_edges(std::istream& in, const std::string& name);

// Reads a .tsp file or a graph edge list (picked by content), plus an
// optional "<stem>.opt" sidecar holding the optimal tour value.
Instance load_instance(const std::string& path);

std::vector<double> all_pairs_costs(const Instance& inst);

void write_tsplib(std::ostream& out, const Instance& inst);
void write_graph_edges(std::ostream& out, const Instance& inst);

std::vector<int> parse_tour(std::istream& in, const Instance& inst);
void write_tour(std::ostream& out, const Instance& inst,
                const std::vector<int>& order, double cost);

}  // namespace bomtsp
