#pragma once

#include <cstdint>
#include <vector>

#include "frostman/occupancy_tree.hpp"

namespace frostman {

// Fine-to-coarse capping pass shared by the production measure (double) and
// the exact-arithmetic test oracles.  Base layer: every occupied level-m cube
// carries cap(m) = 2^{-mt}.  Coarsening from level m up to level 0:
//   aggregate A_j = sum of child masses
//   j >= level_top: f_j = min(A_j, cap(j)),  sat = A_j >= cap,  trig = A_j > cap
//   j <  level_top: f_j = A_j (no cap above the top layer; pure aggregation)
// Masses depend only on subtree shape, so the DP runs once per unique node.
//
// Policy supplies the scalar: value_type, cap(level) -> 2^{-level*t},
// add(x, y), less(x, y), scale(x, mult).
template <class Policy>
struct CascadeTable {
  using value_type = typename Policy::value_type;
  int level_top = 0;   // coarsest capped level (L = m - ell)
  int level_base = 0;  // m
  // Indexed [level][node id], levels 0..m.
  std::vector<std::vector<value_type>> f;
  std::vector<std::vector<char>> sat;   // aggregate >= cap; identically true at m
  std::vector<std::vector<char>> trig;  // aggregate strictly above cap; true at m
  value_type total{};                   // sum of f over occupied level-L cubes
};

template <class Policy>
CascadeTable<Policy> run_cascade_dp(const OccupancyTree& t, int level_top, int level_base,
                                    const Policy& p) {
  using V = typename Policy::value_type;
  CascadeTable<Policy> out;
  out.level_top = level_top;
  out.level_base = level_base;
  out.f.resize(level_base + 1);
  out.sat.resize(level_base + 1);
  out.trig.resize(level_base + 1);

  out.f[level_base].assign(t.node_count(level_base), p.cap(level_base));
  out.sat[level_base].assign(t.node_count(level_base), 1);
  out.trig[level_base].assign(t.node_count(level_base), 1);

  for (int j = level_base - 1; j >= 0; --j) {
    const std::size_t cnt = t.node_count(j);
    out.f[j].reserve(cnt);
    out.sat[j].assign(cnt, 0);
    out.trig[j].assign(cnt, 0);
    const V cap = p.cap(j);
    for (std::uint32_t i = 0; i < cnt; ++i) {
      bool first = true;
      V agg{};
      for (std::uint32_t c : t.children(j, i)) {
        agg = first ? out.f[j + 1][c] : p.add(agg, out.f[j + 1][c]);
        first = false;
      }
      if (j >= level_top) {
        out.sat[j][i] = !p.less(agg, cap);
        out.trig[j][i] = p.less(cap, agg);
        out.f[j].push_back(out.trig[j][i] ? cap : agg);
      } else {
        out.f[j].push_back(agg);
      }
    }
  }

  bool first = true;
  for (std::uint32_t i = 0; i < t.node_count(level_top); ++i) {
    V term = p.scale(out.f[level_top][i], t.node(level_top, i).mult);
    out.total = first ? term : p.add(out.total, term);
    first = false;
  }
  return out;
}

}  // namespace frostman
