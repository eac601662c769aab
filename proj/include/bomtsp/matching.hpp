#pragma once

#include <functional>
#include <vector>

namespace bomtsp {

// Minimum-weight perfect matching on the complete graph over n vertices
// (n even).  Returns mate[v] for every v.  Costs are taken as integers when
// they already are integral, otherwise scaled by 2^20 and rounded, so exact
// optimality holds for integer metrics and to ~1e-6 relative otherwise.
std::vector<int> min_weight_perfect_matching(
    int n, const std::function<double(int, int)>& cost);

double matching_cost(const std::vector<int>& mate,
                     const std::function<double(int, int)>& cost);

}  // namespace bomtsp
