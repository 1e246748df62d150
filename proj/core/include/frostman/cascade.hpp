#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "frostman/occupancy_tree.hpp"

namespace frostman {

// Scale parameters of a mass-cascade measure on a depth-n_max tree:
//   m         unique integer with 2^{-m-1} < delta^{1/theta} <= 2^{-m}
//   ell       largest integer with sqrt(d)*2^{-(m-ell)} <= delta
//   level_top m - ell; capping acts on levels [level_top, m]
// so level-m cubes sit just below the fine scale delta^{1/theta} and
// level_top cubes have diameter just below the coarse scale delta.
struct FrostmanParams {
  double theta = 1;
  double delta = 0.5;
  double s = 0.5;  // target Frostman exponent; bounds only, never the masses
  double t = 0.5;  // cap exponent: level-j cap is 2^{-jt}
  int m = 0;
  int ell = 0;
  int level_top = 0;
};

// Errors: parameters outside their ranges or s > t; m > depth (tree too
// shallow for this delta/theta); infeasible when even level-m cubes are
// wider than delta (ell < 0).
FrostmanParams derive_params(double theta, double delta, double s, double t, int dim, int depth);

inline FrostmanParams derive_params(double theta, double delta, double s, double t,
                                    const OccupancyTree& tree) {
  return derive_params(theta, delta, s, t, tree.dim(), tree.depth());
}

// Output of the capping cascade.  Mass tables are per unique tree node
// (masses depend only on subtree shape); levels above level_top hold plain
// aggregates so coarse queries stay O(1).  Finer-than-m masses are derived
// on demand by uniform splitting from the coarsest strictly-capped ancestor.
// Holds a non-owning pointer to the tree, which must outlive the measure.
struct CascadeMeasure {
  const OccupancyTree* tree = nullptr;
  FrostmanParams params;
  // Indexed [level][node id], levels 0..m.
  std::vector<std::vector<double>> f;
  std::vector<std::vector<char>> sat;   // aggregate >= cap (equality included)
  std::vector<std::vector<char>> trig;  // aggregate strictly above cap
  double total = 0;  // T: sum of f over occupied level_top cubes, pre-normalization
  double norm = 1;   // queries scale by this; 1/T after normalize()
  bool normalized = false;
};

CascadeMeasure run_cascade(const OccupancyTree& tree, const FrostmanParams& params);

// Mass of any dyadic cube (0 if unoccupied), scaled by the current
// normalization.  Levels above level_top aggregate; levels below it follow
// the coarsest strictly-capped ancestor (the base layer at m counts as
// capped) divided by the occupied-children products down to the query level.
double leaf_mass(const CascadeMeasure& measure, const DyadicCube& q);

// Maximal saturated cubes: walking down from level_top, emit a cube where
// sat holds and recurse otherwise (reaches level m at the latest).  Cubes
// sharing a subtree shape are reported as one group with a count.
struct EqualityCover {
  struct Group {
    int level = 0;
    std::uint32_t node_id = 0;
    std::uint64_t count = 0;    // cubes sharing this shape on saturated-free paths
    double mass_each = 0;       // normalized mass per cube
    double diameter = 0;
  };
  std::vector<Group> groups;
  std::uint64_t cube_count = 0;
  double total_mass = 0;  // equals normalized T by additivity below saturation
};

EqualityCover equality_cover(const CascadeMeasure& measure);

// Explicit enumeration of cover cubes in Z-order; fn returns false to stop.
void for_each_cover_cube(const CascadeMeasure& measure,
                         const std::function<bool(const DyadicCube&, double mass)>& fn);

// Scales all queries by 1/T; returns T.
double normalize(CascadeMeasure& measure);

// Uniform-splitting lower bound below the base level: every occupied cube at
// level v in (m, depth] must satisfy 2^{s(v-m)} <= product of occupied-children
// counts along its chain from level m.  Guaranteed when 2^s is strictly below
// the minimum branching at levels [m, depth) -- the `premise` field.
struct BranchingCheck {
  bool premise = false;
  bool holds = true;
  double worst_margin = 0;  // min over levels of (log2 min-product - s*(v-m))
  int worst_level = 0;
};

BranchingCheck check_branching_bound(const OccupancyTree& tree, const FrostmanParams& params);

// derive_params + run_cascade + normalize + equality_cover + branching check.
struct ConstructResult {
  FrostmanParams params;
  CascadeMeasure measure;  // normalized
  EqualityCover cover;     // normalized masses
  BranchingCheck branching;
  double total_mass = 0;  // T
};

ConstructResult construct(const OccupancyTree& tree, double theta, double delta, double s,
                          double t);

}  // namespace frostman
