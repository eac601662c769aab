#pragma once

#include <iosfwd>

#include "bomtsp/graph_util.hpp"
#include "bomtsp/instance.hpp"

namespace bomtsp {

// A sparse vector indexed by edges (u < v internally).
struct EdgeValues {
  int n = 0;
  EdgeList edges;
  std::vector<double> values;

  void add(int u, int v, double value) {
    if (u > v) std::swap(u, v);
    edges.emplace_back(u, v);
    values.push_back(value);
  }
  double sum() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
};

// "label_u label_v value" lines; '#' starts a comment.
void write_edge_values(std::ostream& out, const Instance& inst,
                       const EdgeValues& ev);
EdgeValues parse_edge_values(std::istream& in, const Instance& inst);

}  // namespace bomtsp
