#include "frostman/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "frostman/cover_dp.hpp"

namespace frostman {

namespace {

// Exact for powers of two, so structured counts regress without noise.
double log2_count(std::uint64_t v) {
  if (v != 0 && (v & (v - 1)) == 0) return static_cast<double>(63 - __builtin_clzll(v));
  return std::log2(static_cast<double>(v));
}

struct DoubleCoverPolicy {
  using value_type = double;
  double s = 0;
  double log2_sqrt_d = 0;
  double diam_cost(int level) const { return std::exp2(s * (log2_sqrt_d - level)); }
  static double add(double x, double y) { return x + y; }
  static bool less(double x, double y) { return x < y; }
  static double scale(double x, std::uint64_t mult) { return x * static_cast<double>(mult); }
};

}  // namespace

LevelCounts level_counts(const OccupancyTree& tree) {
  LevelCounts c;
  c.dim = tree.dim();
  c.depth = tree.depth();
  c.occupied = tree.cube_counts();
  c.min_branching.reserve(c.depth);
  for (int n = 0; n < c.depth; ++n) c.min_branching.push_back(tree.min_branching(n));
  return c;
}

DyadicDimension dyadic_dimension(const LevelCounts& counts, int burn_in) {
  if (burn_in < 0 || burn_in > counts.depth - 1)
    throw input_error("burn-in " + std::to_string(burn_in) + " leaves no levels below depth " +
                      std::to_string(counts.depth));
  DyadicDimension r;
  r.burn_in = burn_in;
  r.value = std::numeric_limits<double>::infinity();
  for (int n = burn_in; n < counts.depth; ++n) {
    const double v = log2_count(counts.min_branching[n]);
    r.trace.push_back(v);
    if (v < r.value) {
      r.value = v;
      r.argmin_level = n;
    }
  }
  return r;
}

BoxFit box_dimension(const LevelCounts& counts, int level_lo, int level_hi) {
  if (level_lo < 0 || level_hi > counts.depth || level_hi - level_lo < 2)
    throw input_error("box fit range [" + std::to_string(level_lo) + "," +
                      std::to_string(level_hi) + "] needs at least three levels inside [0," +
                      std::to_string(counts.depth) + "]");
  BoxFit f;
  f.level_lo = level_lo;
  f.level_hi = level_hi;
  const int cnt = level_hi - level_lo + 1;
  double nbar = 0, ybar = 0;
  for (int n = level_lo; n <= level_hi; ++n) {
    nbar += n;
    ybar += log2_count(counts.occupied[n]);
  }
  nbar /= cnt;
  ybar /= cnt;
  double num = 0, den = 0;
  for (int n = level_lo; n <= level_hi; ++n) {
    const double dn = n - nbar;
    num += dn * (log2_count(counts.occupied[n]) - ybar);
    den += dn * dn;
  }
  f.slope = num / den;
  f.intercept = ybar - f.slope * nbar;
  double ss = 0;
  for (int n = level_lo; n <= level_hi; ++n) {
    const double e = log2_count(counts.occupied[n]) - (f.slope * n + f.intercept);
    ss += e * e;
  }
  f.rms_residual = std::sqrt(ss / cnt);
  return f;
}

LowerDimension lower_dimension(const OccupancyTree& tree,
                               const std::vector<std::pair<int, int>>& windows) {
  if (windows.empty()) throw input_error("lower dimension needs at least one level window");
  LowerDimension r;
  r.value = std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> best_desc;
  for (const auto& [a, b] : windows) {
    if (a < 0 || a >= b || b > tree.depth())
      throw input_error("lower-dimension window (" + std::to_string(a) + "," +
                        std::to_string(b) + ") needs 0 <= a < b <= " +
                        std::to_string(tree.depth()));
    auto desc = tree.descendant_counts(a, b);
    const std::uint64_t m = *std::min_element(desc.begin(), desc.end());
    const double slope = log2_count(m) / (b - a);
    r.rows.push_back({a, b, m, slope});
    if (slope < r.value) {
      r.value = slope;
      r.level_a = a;
      r.level_b = b;
      r.min_descendants = m;
      best_desc = std::move(desc);
    }
  }
  std::vector<char> target(best_desc.size(), 0);
  for (std::size_t i = 0; i < best_desc.size(); ++i)
    target[i] = best_desc[i] == r.min_descendants;
  r.witness = tree.first_cube_where(r.level_a, target);
  return r;
}

double cover_cost(const OccupancyTree& tree, double s, int level_a, int level_b) {
  if (level_a < 0 || level_a > level_b || level_b > tree.depth())
    throw input_error("cover range [" + std::to_string(level_a) + "," +
                      std::to_string(level_b) + "] outside tree depth " +
                      std::to_string(tree.depth()));
  if (!(s >= 0)) throw input_error("cover exponent must be >= 0");
  DoubleCoverPolicy p{s, 0.5 * std::log2(static_cast<double>(tree.dim()))};
  return cover_cost_total(tree, level_a, level_b, p);
}

ScaleLevels scale_levels(int dim, double theta, double delta, int depth) {
  if (!(theta > 0 && theta <= 1)) throw input_error("theta must lie in (0,1]");
  if (!(delta > 0 && delta < 1)) throw input_error("delta must lie in (0,1)");
  const double l2d = 0.5 * std::log2(static_cast<double>(dim));
  const double la = l2d - std::log2(delta);
  const double lb = l2d - std::log2(delta) / theta;
  ScaleLevels s;
  s.coarse = static_cast<int>(std::llround(la));
  s.fine = static_cast<int>(std::llround(lb));
  if (s.coarse < 0) s.coarse = 0;
  if (s.fine < s.coarse) s.fine = s.coarse;
  if (s.fine > depth)
    throw infeasible_error("scales (theta=" + std::to_string(theta) + ", delta=" +
                      std::to_string(delta) + ") need levels up to " + std::to_string(s.fine) +
                      "; realize the set to depth >= " + std::to_string(s.fine));
  return s;
}

IntermediateAtScale intermediate_dim_at_scale(const OccupancyTree& tree, double theta,
                                              double delta) {
  const ScaleLevels lv = scale_levels(tree.dim(), theta, delta, tree.depth());
  IntermediateAtScale r;
  r.level_coarse = lv.coarse;
  r.level_fine = lv.fine;
  r.cost_at_zero = cover_cost(tree, 0.0, lv.coarse, lv.fine);
  if (r.cost_at_zero <= 1.0) {
    r.s_star = 0;
    return r;
  }
  // cost is continuous in s and > 1 at s = 0; grow the bracket until it
  // drops below 1, then bisect the sign change.
  double hi = 1.0;
  while (cover_cost(tree, hi, lv.coarse, lv.fine) >= 1.0) {
    hi *= 2;
    if (hi > 1024)
      throw infeasible_error("cover cost never crosses 1 on levels [" +
                             std::to_string(lv.coarse) + "," + std::to_string(lv.fine) + "]");
  }
  double lo = 0.0;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (cover_cost(tree, mid, lv.coarse, lv.fine) >= 1.0 ? lo : hi) = mid;
  }
  r.s_star = 0.5 * (lo + hi);
  return r;
}

DimensionProfile intermediate_profile(const OccupancyTree& tree, std::vector<double> thetas,
                                      std::vector<double> deltas) {
  if (thetas.empty() || deltas.empty())
    throw input_error("profile needs nonempty theta and delta grids");
  std::sort(deltas.begin(), deltas.end(), std::greater<>());
  deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());

  DimensionProfile p;
  p.thetas = std::move(thetas);
  p.deltas = std::move(deltas);
  const std::size_t fine_from = p.deltas.size() / 2;
  for (double theta : p.thetas) {
    DimensionProfile::Row row;
    row.theta = theta;
    for (double delta : p.deltas) row.at_scale.push_back(intermediate_dim_at_scale(tree, theta, delta));
    row.lower_proxy = std::numeric_limits<double>::infinity();
    row.upper_proxy = -std::numeric_limits<double>::infinity();
    for (std::size_t j = fine_from; j < p.deltas.size(); ++j) {
      row.lower_proxy = std::min(row.lower_proxy, row.at_scale[j].s_star);
      row.upper_proxy = std::max(row.upper_proxy, row.at_scale[j].s_star);
    }
    p.rows.push_back(std::move(row));
  }
  return p;
}

}  // namespace frostman
