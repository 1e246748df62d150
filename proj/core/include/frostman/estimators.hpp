#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "frostman/occupancy_tree.hpp"

namespace frostman {

inline constexpr int kDefaultBurnIn = 4;

// Per-level covering statistics: M_n occupied cubes at level n, and
// N_n = min over occupied level-n cubes of the occupied-children count.
struct LevelCounts {
  int dim = 1;
  int depth = 0;
  std::vector<std::uint64_t> occupied;       // M_n, n = 0..depth
  std::vector<std::uint64_t> min_branching;  // N_n, n = 0..depth-1
};

LevelCounts level_counts(const OccupancyTree& tree);

// min over n in [burn_in, depth-1] of log2 N_n, with the full trace so
// callers can inspect tail behavior (finite stand-in for a liminf).
struct DyadicDimension {
  double value = 0;
  int argmin_level = 0;
  int burn_in = kDefaultBurnIn;
  std::vector<double> trace;  // log2 N_n for n = burn_in..depth-1
};

DyadicDimension dyadic_dimension(const LevelCounts& counts, int burn_in = kDefaultBurnIn);

// Least-squares slope of log2 M_n against n over level_lo..level_hi
// (inclusive, at least three levels).  log2 of an exact power of two is the
// integer exponent, so structured sets regress without rounding noise.
struct BoxFit {
  double slope = 0;
  double intercept = 0;
  double rms_residual = 0;
  int level_lo = 0, level_hi = 0;
};

BoxFit box_dimension(const LevelCounts& counts, int level_lo, int level_hi);

// For each window (a, b): m(a,b) = min over occupied level-a cubes Q of the
// occupied level-b descendants of Q, and the slope log2 m / (b - a).  The
// estimate is the window minimum; the witness is the first (Z-order) level-a
// cube attaining it.  Cubes stand in for balls: R ~ 2^-a, r ~ 2^-b, and the
// constant-factor gap between cube and ball counts is absorbed by reporting
// slopes over a window rather than a single pair.
struct LowerDimension {
  struct Row {
    int level_a = 0, level_b = 0;
    std::uint64_t min_descendants = 0;
    double slope = 0;
  };
  double value = 0;
  int level_a = 0, level_b = 0;
  std::uint64_t min_descendants = 0;
  DyadicCube witness;
  std::vector<Row> rows;  // one per window, input order
};

LowerDimension lower_dimension(const OccupancyTree& tree,
                               const std::vector<std::pair<int, int>>& windows);

// Minimal Σ diam(U)^s over covers of E by occupied dyadic cubes with levels
// in [a, b] (a == b degenerates to the single-scale count).  Double-precision
// front end of the policy-templated DP in cover_dp.hpp.
double cover_cost(const OccupancyTree& tree, double s, int level_a, int level_b);

// Levels implied by a covering-scale pair: diameters match delta and
// delta^(1/theta), rounded to the nearest level.
struct ScaleLevels {
  int coarse = 0;  // a: diam ~ delta
  int fine = 0;    // b: diam ~ delta^(1/theta)
};

ScaleLevels scale_levels(int dim, double theta, double delta, int depth);

// s*(delta, theta): the exponent where the minimal cover cost over levels
// [a, b] crosses 1, by bisection to 1e-6; 0 if even counting at s=0 stays
// below 1.  Values can exceed the ambient dimension by the sqrt(d) diameter
// factor: s* <= d + d*log2(d) / (2b - log2(d)).
struct IntermediateAtScale {
  double s_star = 0;
  int level_coarse = 0, level_fine = 0;
  double cost_at_zero = 0;  // minimal cover cardinality proxy
};

IntermediateAtScale intermediate_dim_at_scale(const OccupancyTree& tree, double theta,
                                              double delta);

// s*(delta, theta) over a grid; per theta, summary min/max over the finest
// half of the delta grid ("for all delta" vs "exists delta" proxies).
struct DimensionProfile {
  struct Row {
    double theta = 0;
    std::vector<IntermediateAtScale> at_scale;  // aligned with deltas
    double lower_proxy = 0, upper_proxy = 0;
  };
  std::vector<double> thetas;
  std::vector<double> deltas;  // sorted coarse -> fine (descending)
  std::vector<Row> rows;
};

DimensionProfile intermediate_profile(const OccupancyTree& tree, std::vector<double> thetas,
                                      std::vector<double> deltas);

}  // namespace frostman
