#include "frostman/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace frostman {

namespace {

int snapped_floor(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-9) return static_cast<int>(r);
  return static_cast<int>(std::floor(v));
}

// Geometric ladder of `count` radii from lo to hi inclusive.
std::vector<double> log_uniform_radii(double lo, double hi, int count) {
  std::vector<double> out;
  if (!(lo > 0) || !(hi >= lo) || count <= 0) return out;
  if (count == 1 || hi == lo) {
    out.push_back(lo);
    return out;
  }
  const double llo = std::log2(lo), lhi = std::log2(hi);
  for (int i = 0; i < count; ++i)
    out.push_back(std::exp2(llo + (lhi - llo) * i / (count - 1)));
  return out;
}

// Uniformly random occupied leaf via leaf-count-weighted descent.
DyadicCube random_leaf(const OccupancyTree& tree,
                       const std::vector<std::vector<std::uint64_t>>& leaf_cnt,
                       std::mt19937_64& rng) {
  const int d = tree.dim();
  std::uint32_t id = 0;
  std::uint64_t code = 0;
  for (int level = 0; level < tree.depth(); ++level) {
    std::uint64_t target =
        std::uniform_int_distribution<std::uint64_t>(0, leaf_cnt[level][id] - 1)(rng);
    const auto& node = tree.node(level, id);
    auto kids = tree.children(level, id);
    std::size_t k = 0;
    for (unsigned slot = 0; slot < (1u << d); ++slot) {
      if (!(node.mask >> slot & 1)) continue;
      const std::uint64_t under = leaf_cnt[level + 1][kids[k]];
      if (target < under) {
        id = kids[k];
        code = (code << d) | slot;
        break;
      }
      target -= under;
      ++k;
    }
  }
  return {tree.depth(), code};
}

struct RegimeAccum {
  RegimeReport rep;
  void offer(const std::vector<double>& x, double r, double mass, double bound) {
    ++rep.samples;
    const double ratio = mass / bound;
    if (ratio > rep.constant) {
      rep.constant = ratio;
      rep.witness_x = x;
      rep.witness_r = r;
      rep.witness_mass = mass;
      rep.witness_bound = bound;
    }
  }
};

double fit_trend(const std::vector<double>& lx, const std::vector<double>& ly) {
  if (lx.size() < 2) return 0;
  double xb = 0, yb = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    xb += lx[i];
    yb += ly[i];
  }
  xb /= lx.size();
  yb /= ly.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    num += (lx[i] - xb) * (ly[i] - yb);
    den += (lx[i] - xb) * (lx[i] - xb);
  }
  return den > 0 ? num / den : 0;
}

}  // namespace

double ball_mass(const CascadeMeasure& measure, const std::vector<double>& x, double r) {
  const OccupancyTree& tree = *measure.tree;
  const int d = tree.dim();
  if (static_cast<int>(x.size()) != d)
    throw input_error("ball center arity " + std::to_string(x.size()) +
                      " does not match dimension " + std::to_string(d));
  for (double xi : x)
    if (!(xi >= 0 && xi < 1)) throw input_error("ball center outside [0,1)^d");
  const double r_min = std::ldexp(1.0, -tree.depth());
  if (!(r >= r_min && r <= 1))
    throw input_error("radius " + std::to_string(r) + " outside [" + std::to_string(r_min) +
                      ", 1] (grid resolution 2^-" + std::to_string(tree.depth()) + ")");

  const int level = std::max(0, snapped_floor(-std::log2(r)));
  const double side = std::ldexp(1.0, -level);
  const std::uint64_t top = (std::uint64_t{1} << level) - 1;

  std::vector<std::int64_t> base(d);
  for (int i = 0; i < d; ++i)
    base[i] = std::min<std::int64_t>(static_cast<std::int64_t>(std::floor(x[i] / side)),
                                     static_cast<std::int64_t>(top));

  double total = 0;
  std::vector<std::uint64_t> ks(d);
  int ncand = 1;
  for (int i = 0; i < d; ++i) ncand *= 3;
  for (int c = 0; c < ncand; ++c) {
    int rem = c;
    bool valid = true;
    double dist2 = 0;
    for (int i = 0; i < d && valid; ++i) {
      const std::int64_t k = base[i] + (rem % 3) - 1;
      rem /= 3;
      if (k < 0 || k > static_cast<std::int64_t>(top)) {
        valid = false;
        break;
      }
      ks[i] = static_cast<std::uint64_t>(k);
      const double lo = k * side, hi = lo + side;
      const double gap = std::max({0.0, lo - x[i], x[i] - hi});
      dist2 += gap * gap;
    }
    if (!valid || !(dist2 < r * r)) continue;
    total += leaf_mass(measure, DyadicCube{level, interleave(ks, level)});
  }
  return total;
}

DecayReport decay_report(const CascadeMeasure& measure, const SamplingSpec& sampling) {
  if (sampling.radii_per_regime < 1) throw input_error("sampling needs at least one radius");
  if (sampling.random_leaf_centers < 0) throw input_error("negative center count");
  const OccupancyTree& tree = *measure.tree;
  const int d = tree.dim();
  const FrostmanParams& p = measure.params;

  DecayReport report;
  report.params = p;
  report.total_mass = measure.total;

  std::vector<std::vector<double>> centers;
  std::uint64_t taken = 0;
  for_each_cover_cube(measure, [&](const DyadicCube& q, double) {
    centers.push_back(center(tree.first_leaf_under(q), d));
    return ++taken < sampling.max_cover_centers;
  });
  if (sampling.random_leaf_centers > 0) {
    const auto leaf_cnt = tree.leaf_counts();
    std::mt19937_64 rng(sampling.seed * 0x9e3779b97f4a7c15ull + 1);
    for (int i = 0; i < sampling.random_leaf_centers; ++i)
      centers.push_back(center(random_leaf(tree, leaf_cnt, rng), d));
  }
  if (centers.empty()) throw input_error("no ball centers to sample");

  const double fine_scale = std::exp2(std::log2(p.delta) / p.theta);  // delta^(1/theta)
  const double r_min = std::ldexp(1.0, -tree.depth());

  RegimeAccum mid{{"mid", 0, 0, std::max(fine_scale, r_min), p.delta, {}, 0, 0, 0}};
  for (double r : log_uniform_radii(mid.rep.r_lo, mid.rep.r_hi, sampling.radii_per_regime))
    for (const auto& x : centers) mid.offer(x, r, ball_mass(measure, x, r), std::pow(r, p.t));

  RegimeAccum fine{{"fine", 0, 0, std::ldexp(1.0, -tree.depth() + 1),
                    fine_scale * (1 - 1e-9), {}, 0, 0, 0}};
  if (fine.rep.r_lo < fine.rep.r_hi) {
    const double scale_pow = std::pow(fine_scale, p.t - p.s);
    for (double r : log_uniform_radii(fine.rep.r_lo, fine.rep.r_hi, sampling.radii_per_regime))
      for (const auto& x : centers)
        fine.offer(x, r, ball_mass(measure, x, r), scale_pow * std::pow(r, p.s));
  } else {
    fine.rep.r_lo = fine.rep.r_hi = 0;  // regime empty at this depth
  }

  report.mid = std::move(mid.rep);
  report.fine = std::move(fine.rep);
  return report;
}

StabilityReport constant_stability(const OccupancyTree& tree, double theta, double s, double t,
                                   std::vector<double> delta_grid,
                                   const SamplingSpec& sampling) {
  if (delta_grid.size() < 4)
    throw input_error("stability needs a delta grid with at least 4 values");
  std::sort(delta_grid.begin(), delta_grid.end(), std::greater<>());
  delta_grid.erase(std::unique(delta_grid.begin(), delta_grid.end()), delta_grid.end());

  StabilityReport rep;
  rep.theta = theta;
  rep.s = s;
  rep.t = t;
  for (double delta : delta_grid) {
    ConstructResult c = construct(tree, theta, delta, s, t);
    DecayReport d = decay_report(c.measure, sampling);
    rep.rows.push_back({delta, d.mid.constant, d.fine.constant, c.total_mass});
  }

  auto minmax_ratio = [](auto&& values) {
    double lo = 0, hi = 0;
    bool any = false;
    for (double v : values) {
      if (v <= 0) continue;
      lo = any ? std::min(lo, v) : v;
      hi = any ? std::max(hi, v) : v;
      any = true;
    }
    return any ? hi / lo : 1.0;
  };
  std::vector<double> mids, fines, masses;
  for (const auto& r : rep.rows) {
    mids.push_back(r.mid_constant);
    fines.push_back(r.fine_constant);
    masses.push_back(r.total_mass);
  }
  rep.mid_ratio = minmax_ratio(mids);
  rep.fine_ratio = minmax_ratio(fines);
  rep.mass_ratio = minmax_ratio(masses);

  std::vector<double> lx, lmid, lfine, lxf;
  for (const auto& r : rep.rows) {
    if (r.mid_constant > 0) {
      lx.push_back(-std::log2(r.delta));
      lmid.push_back(std::log2(r.mid_constant));
    }
    if (r.fine_constant > 0) {
      lxf.push_back(-std::log2(r.delta));
      lfine.push_back(std::log2(r.fine_constant));
    }
  }
  rep.mid_trend = fit_trend(lx, lmid);
  rep.fine_trend = fit_trend(lxf, lfine);
  rep.mass_premise_ok = rep.rows.back().total_mass >= rep.rows.front().total_mass / 10.0;
  return rep;
}

}  // namespace frostman
