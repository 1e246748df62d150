#include "frostman/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "frostman/cascade_dp.hpp"

namespace frostman {

namespace {

struct DoubleCascadePolicy {
  using value_type = double;
  double t = 1;
  double cap(int level) const { return std::exp2(-t * level); }
  static double add(double x, double y) { return x + y; }
  static bool less(double x, double y) { return x < y; }
  static double scale(double x, std::uint64_t mult) { return x * static_cast<double>(mult); }
};

// Snap-to-integer floor: values within 1e-9 of an integer round to it, so
// exact dyadic inputs are immune to log2 rounding.
int snapped_floor(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-9) return static_cast<int>(r);
  return static_cast<int>(std::floor(v));
}

}  // namespace

FrostmanParams derive_params(double theta, double delta, double s, double t, int dim,
                             int depth) {
  check_dim(dim);
  if (!(theta > 0 && theta <= 1)) throw input_error("theta must lie in (0,1]");
  if (!(delta > 0 && delta < 1)) throw input_error("delta must lie in (0,1)");
  if (!(t > 0)) throw input_error("t must be positive");
  if (!(s > 0)) throw input_error("s must be positive");
  if (s > t) throw input_error("s must not exceed t");

  FrostmanParams p;
  p.theta = theta;
  p.delta = delta;
  p.s = s;
  p.t = t;
  // 2^{-m-1} < delta^{1/theta} <= 2^{-m}  <=>  m <= -log2(delta)/theta < m+1
  p.m = snapped_floor(-std::log2(delta) / theta);
  if (p.m > depth)
    throw infeasible_error("fine scale delta^(1/theta) needs level " + std::to_string(p.m) +
                           "; tree depth is only " + std::to_string(depth));
  // largest ell with sqrt(d)*2^{-(m-ell)} <= delta
  p.ell = snapped_floor(p.m + std::log2(delta) - 0.5 * std::log2(static_cast<double>(dim)));
  if (p.ell < 0)
    throw infeasible_error("even level-" + std::to_string(p.m) +
                           " cubes are wider than delta; no cover layer exists (raise delta "
                           "or theta, or lower the dimension)");
  p.level_top = p.m - p.ell;
  return p;
}

CascadeMeasure run_cascade(const OccupancyTree& tree, const FrostmanParams& params) {
  if (params.m > tree.depth()) throw input_error("cascade base level exceeds tree depth");
  CascadeMeasure mes;
  mes.tree = &tree;
  mes.params = params;
  auto table = run_cascade_dp(tree, params.level_top, params.m, DoubleCascadePolicy{params.t});
  mes.f = std::move(table.f);
  mes.sat = std::move(table.sat);
  mes.trig = std::move(table.trig);
  mes.total = table.total;
  return mes;
}

double leaf_mass(const CascadeMeasure& measure, const DyadicCube& q) {
  const OccupancyTree& tree = *measure.tree;
  if (q.level < 0 || q.level > tree.depth())
    throw input_error("mass query level " + std::to_string(q.level) + " outside [0," +
                      std::to_string(tree.depth()) + "]");
  const auto ids = tree.walk(q);
  if (!ids) return 0.0;
  const int v = q.level;
  const int top = measure.params.level_top, base = measure.params.m;
  if (v < top) return measure.f[v][(*ids)[v]] * measure.norm;

  const int stop = std::min(v, base);
  int jstar = stop;
  for (int j = top; j < stop; ++j) {
    if (measure.trig[j][(*ids)[j]]) {
      jstar = j;
      break;
    }
  }
  double split = 1.0;
  for (int i = jstar; i < v; ++i)
    split *= OccupancyTree::branching(tree.node(i, (*ids)[i]).mask);
  return measure.f[jstar][(*ids)[jstar]] * measure.norm / split;
}

EqualityCover equality_cover(const CascadeMeasure& measure) {
  const OccupancyTree& tree = *measure.tree;
  const int top = measure.params.level_top, base = measure.params.m;
  EqualityCover cover;
  // Count the cubes reaching each node along saturation-free paths.
  std::vector<std::uint64_t> cnt(tree.node_count(top));
  for (std::uint32_t i = 0; i < cnt.size(); ++i) cnt[i] = tree.node(top, i).mult;
  for (int j = top; j <= base; ++j) {
    std::vector<std::uint64_t> next;
    if (j < base) next.assign(tree.node_count(j + 1), 0);
    for (std::uint32_t i = 0; i < cnt.size(); ++i) {
      if (cnt[i] == 0) continue;
      if (measure.sat[j][i]) {
        cover.groups.push_back({j, i, cnt[i], measure.f[j][i] * measure.norm,
                                diameter(tree.dim(), j)});
        cover.cube_count += cnt[i];
        cover.total_mass += static_cast<double>(cnt[i]) * measure.f[j][i] * measure.norm;
      } else {
        for (std::uint32_t c : tree.children(j, i)) next[c] += cnt[i];
      }
    }
    cnt = std::move(next);
  }
  return cover;
}

void for_each_cover_cube(const CascadeMeasure& measure,
                         const std::function<bool(const DyadicCube&, double mass)>& fn) {
  const OccupancyTree& tree = *measure.tree;
  const int top = measure.params.level_top;
  struct Rec {
    const CascadeMeasure& mes;
    const OccupancyTree& tree;
    int top;
    const std::function<bool(const DyadicCube&, double)>& fn;
    bool operator()(int level, std::uint32_t id, std::uint64_t code) const {
      if (level >= top && mes.sat[level][id])
        return fn(DyadicCube{level, code}, mes.f[level][id] * mes.norm);
      const auto& node = tree.node(level, id);
      auto kids = tree.children(level, id);
      std::size_t k = 0;
      for (unsigned slot = 0; slot < (1u << tree.dim()); ++slot) {
        if (!(node.mask >> slot & 1)) continue;
        if (!(*this)(level + 1, kids[k++], (code << tree.dim()) | slot)) return false;
      }
      return true;
    }
  } rec{measure, tree, top, fn};
  rec(0, 0, 0);
}

double normalize(CascadeMeasure& measure) {
  measure.norm = 1.0 / measure.total;
  measure.normalized = true;
  return measure.total;
}

BranchingCheck check_branching_bound(const OccupancyTree& tree, const FrostmanParams& params) {
  BranchingCheck r;
  const int base = params.m, depth = tree.depth();
  if (base >= depth) {
    r.premise = false;
    r.holds = true;
    r.worst_level = base;
    return r;
  }
  std::uint64_t min_b = std::numeric_limits<std::uint64_t>::max();
  for (int j = base; j < depth; ++j) min_b = std::min(min_b, tree.min_branching(j));
  r.premise = std::exp2(params.s) < static_cast<double>(min_b);

  // Min over cubes of log2(product of occupied-children counts below m).
  std::vector<double> g(tree.node_count(base), 0.0);
  r.worst_margin = std::numeric_limits<double>::infinity();
  for (int j = base; j < depth; ++j) {
    std::vector<double> next(tree.node_count(j + 1),
                             std::numeric_limits<double>::infinity());
    for (std::uint32_t i = 0; i < g.size(); ++i) {
      const double step = g[i] + std::log2(static_cast<double>(
                                     OccupancyTree::branching(tree.node(j, i).mask)));
      for (std::uint32_t c : tree.children(j, i)) next[c] = std::min(next[c], step);
    }
    g = std::move(next);
    const double level_min = *std::min_element(g.begin(), g.end());
    const double margin = level_min - params.s * (j + 1 - base);
    if (margin < r.worst_margin) {
      r.worst_margin = margin;
      r.worst_level = j + 1;
    }
  }
  r.holds = r.worst_margin >= -1e-9;
  return r;
}

ConstructResult construct(const OccupancyTree& tree, double theta, double delta, double s,
                          double t) {
  ConstructResult res;
  res.params = derive_params(theta, delta, s, t, tree);
  res.measure = run_cascade(tree, res.params);
  res.total_mass = normalize(res.measure);
  res.cover = equality_cover(res.measure);
  res.branching = check_branching_bound(tree, res.params);
  return res;
}

}  // namespace frostman
