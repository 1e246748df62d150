#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frostman/cascade.hpp"

namespace frostman {

// Mass of the open ball B(x, r) evaluated through its dyadic cover: sum of
// leaf_mass over the level-n' cubes meeting the ball, where n' is the unique
// level with 2^{-n'-1} < r <= 2^{-n'}.  At most 3^d candidate cubes around x
// are probed (closed-box distance < r).  This over-approximates the ball by
// the usual bounded-multiplicity cube surplus, matching how covering
// arguments bound ball masses.  Requires r in [2^{-n_max}, 1].
double ball_mass(const CascadeMeasure& measure, const std::vector<double>& x, double r);

struct SamplingSpec {
  int radii_per_regime = 16;    // log-uniform ladder per regime
  int random_leaf_centers = 64; // added to the cover-cube centers
  std::uint64_t seed = 0;
  std::uint64_t max_cover_centers = 4096;  // cover cubes probed (Z-order prefix)
};

// Worst observed ratio mass/bound over sampled (center, radius) pairs.
struct RegimeReport {
  std::string regime;  // "mid" (r in [delta^(1/theta), delta], bound r^t)
                       // or "fine" (r below delta^(1/theta), bound (delta^(1/theta))^(t-s) r^s)
  std::size_t samples = 0;
  double constant = 0;  // max ratio; 0 when the regime's radius range is empty
  double r_lo = 0, r_hi = 0;
  // Witness of the max ratio; re-evaluating ball_mass(x, r) reproduces it.
  std::vector<double> witness_x;
  double witness_r = 0;
  double witness_mass = 0;
  double witness_bound = 0;
};

struct DecayReport {
  FrostmanParams params;
  double total_mass = 0;  // T of the measure (pre-normalization)
  RegimeReport mid, fine;
};

// Samples centers from every equality-cover cube (via its first occupied
// leaf, so each center lies in an occupied leaf cube; capped at
// max_cover_centers) plus random occupied leaves, and radii log-uniformly
// per regime.  The measure should be normalized for the constants to be
// commensurate with the bound shapes.
DecayReport decay_report(const CascadeMeasure& measure, const SamplingSpec& sampling);

// Constructs the measure for each delta in the grid and tracks how the decay
// constants and the total mass T behave as delta shrinks.
struct StabilityRow {
  double delta = 0;
  double mid_constant = 0, fine_constant = 0;
  double total_mass = 0;
};

struct StabilityReport {
  double theta = 1, s = 0, t = 0;
  std::vector<StabilityRow> rows;  // sorted coarse -> fine (descending delta)
  double mid_ratio = 1, fine_ratio = 1;  // max/min over rows with samples
  double mid_trend = 0, fine_trend = 0;  // slope of log2(constant) vs log2(1/delta)
  double mass_ratio = 1;                 // max/min of T across the grid
  // False when T collapses (finest-scale T below a tenth of the coarsest):
  // the "total cover mass stays positive" premise failed, typically because
  // t exceeds the set's dimension at this theta.
  bool mass_premise_ok = true;
};

StabilityReport constant_stability(const OccupancyTree& tree, double theta, double s, double t,
                                   std::vector<double> delta_grid,
                                   const SamplingSpec& sampling);

}  // namespace frostman
