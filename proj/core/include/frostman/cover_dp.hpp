#pragma once

#include <cstdint>
#include <vector>

#include "frostman/occupancy_tree.hpp"

namespace frostman {

// Minimal Σ diam(U)^s over covers of E ∩ Q by occupied dyadic cubes with
// levels in [a, b], computed per unique level-a node by the recurrence
//   cost(Q at level j) = diam_j^s                      if j == b
//                        min(diam_j^s, Σ_child cost)   otherwise.
// Memoization is free: the DAG already identifies equal subtrees.
//
// The scalar is supplied by a policy so the same DP runs in double for the
// production estimator and in exact arithmetic for test oracles:
//   value_type            cost scalar
//   diam_cost(level)      (sqrt(d) * 2^-level)^s as value_type
//   add(x, y), less(x, y)
//   scale(x, mult)        x * mult for aggregating shared shapes
template <class Policy>
std::vector<typename Policy::value_type> cover_node_costs(const OccupancyTree& t, int a, int b,
                                                          const Policy& p) {
  using V = typename Policy::value_type;
  std::vector<V> cur(t.node_count(b), p.diam_cost(b));
  for (int j = b - 1; j >= a; --j) {
    std::vector<V> up;
    up.reserve(t.node_count(j));
    const V own = p.diam_cost(j);
    for (std::uint32_t i = 0; i < t.node_count(j); ++i) {
      bool first = true;
      V sum{};
      for (std::uint32_t c : t.children(j, i)) {
        sum = first ? cur[c] : p.add(sum, cur[c]);
        first = false;
      }
      up.push_back(p.less(own, sum) ? own : sum);
    }
    cur = std::move(up);
  }
  return cur;
}

// Total over all occupied level-a cubes (node costs weighted by shape counts).
template <class Policy>
typename Policy::value_type cover_cost_total(const OccupancyTree& t, int a, int b,
                                             const Policy& p) {
  const auto costs = cover_node_costs(t, a, b, p);
  typename Policy::value_type total{};
  bool first = true;
  for (std::uint32_t i = 0; i < costs.size(); ++i) {
    auto term = p.scale(costs[i], t.node(a, i).mult);
    total = first ? term : p.add(total, term);
    first = false;
  }
  return total;
}

}  // namespace frostman
