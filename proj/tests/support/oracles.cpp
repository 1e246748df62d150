#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace testsupport {

// ---------------------------------------------------------------------------
// DigitIntervalOracle

DigitIntervalOracle::DigitIntervalOracle(long long base,
                                         std::vector<std::vector<long long>> pattern)
    : base_(base), cylinder_mode_((base & (base - 1)) == 0), pat_(std::move(pattern)) {
  if (base_ < 2) throw std::logic_error("digit oracle: base must be >= 2");
  if (pat_.empty()) throw std::logic_error("digit oracle: empty pattern");
  for (const auto& pos : pat_) {
    if (pos.empty()) throw std::logic_error("digit oracle: empty digit position");
    for (long long d : pos)
      if (d < 0 || d >= base_) throw std::logic_error("digit oracle: digit out of range");
  }
  const std::size_t P = pat_.size();
  // Tails of the min/max digit strings from each phase:
  //   tail(phi) = sum_{i=1}^{P} digit_{(phi+i-1) mod P} B^{P-i} / (B^P - 1).
  BigInt bp = 1;
  for (std::size_t i = 0; i < P; ++i) bp *= base_;
  for (std::size_t phi = 0; phi < P; ++phi) {
    BigInt lo = 0, hi = 0;
    for (std::size_t i = 1; i <= P; ++i) {
      const auto& digits = pat_[(phi + i - 1) % P];
      const long long dmin = *std::min_element(digits.begin(), digits.end());
      const long long dmax = *std::max_element(digits.begin(), digits.end());
      BigInt weight = 1;
      for (std::size_t w = 0; w < P - i; ++w) weight *= base_;
      lo += dmin * weight;
      hi += dmax * weight;
    }
    min_tail_.push_back(BigRat(lo, bp - 1));
    max_tail_.push_back(BigRat(hi, bp - 1));
  }
  bpow_.push_back(1);
}

namespace {

// Point membership in [lo, hi), closing the right end when the cube is the
// last one of its level (the boundary point 1 belongs there by convention).
bool in_cube(const BigRat& p, const BigRat& lo, const BigRat& hi, bool closed_right) {
  if (p < lo) return false;
  if (p < hi) return true;
  return closed_right && p == hi;
}

}  // namespace

bool DigitIntervalOracle::hull_rec(const BigInt& prefix, int k, const BigRat& lo,
                                   const BigRat& hi) const {
  if (k > 200) throw std::logic_error("digit oracle: recursion failed to terminate");
  while (static_cast<int>(bpow_.size()) <= k) bpow_.push_back(bpow_.back() * base_);
  const std::size_t phi = static_cast<std::size_t>(k) % pat_.size();
  // Attainable extensions of this prefix span [pmin, pmax], both attained
  // (min-digit resp. max-digit tails).
  const BigRat pmin = (BigRat(prefix) + min_tail_[phi]) / BigRat(bpow_[k]);
  const BigRat pmax = (BigRat(prefix) + max_tail_[phi]) / BigRat(bpow_[k]);
  const bool closed_right = hi == 1;
  if (pmax < lo) return false;
  if (in_cube(pmin, lo, hi, closed_right)) return true;
  if (in_cube(pmax, lo, hi, closed_right)) return true;
  if (pmin >= hi) return false;
  // pmin < lo and pmax >= hi: the hull straddles the cube; split by the next
  // digit.  Hull widths shrink geometrically, so this branch is bounded.
  for (long long d : pat_[phi]) {
    if (hull_rec(prefix * base_ + d, k + 1, lo, hi)) return true;
  }
  return false;
}

bool DigitIntervalOracle::cylinder_rec(const BigInt& prefix, int k, const BigRat& lo,
                                       const BigRat& hi) const {
  if (k > 200) throw std::logic_error("digit oracle: recursion failed to terminate");
  while (static_cast<int>(bpow_.size()) <= k) bpow_.push_back(bpow_.back() * base_);
  const BigRat clo(BigInt(prefix), bpow_[k]);
  const BigRat chi(BigInt(prefix) + 1, bpow_[k]);
  if (chi <= lo || clo >= hi) return false;  // cylinder misses the cube
  if (clo >= lo && chi <= hi) return true;   // any admissible extension stays inside
  // The cylinder straddles a cube boundary; children tile it exactly, so at
  // most two children recurse and alignment of powers of two ends the chain.
  const std::size_t phi = static_cast<std::size_t>(k) % pat_.size();
  for (long long d : pat_[phi]) {
    if (cylinder_rec(prefix * base_ + d, k + 1, lo, hi)) return true;
  }
  return false;
}

bool DigitIntervalOracle::cube_occupied(std::uint64_t code, int level) const {
  if (level < 0 || level > 62) throw std::logic_error("digit oracle: level out of range");
  const BigInt den = BigInt(1) << static_cast<unsigned>(level);
  const BigRat lo(BigInt(code), den);
  const BigRat hi(BigInt(code) + 1, den);
  if (cylinder_mode_) return cylinder_rec(BigInt(0), 0, lo, hi);
  return hull_rec(BigInt(0), 0, lo, hi);
}

std::vector<std::uint64_t> DigitIntervalOracle::level_codes(int level) const {
  std::vector<std::uint64_t> out;
  struct Rec {
    const DigitIntervalOracle& o;
    int target;
    std::vector<std::uint64_t>& out;
    void operator()(std::uint64_t code, int lvl) const {
      if (!o.cube_occupied(code, lvl)) return;
      if (lvl == target) {
        out.push_back(code);
        return;
      }
      (*this)(code << 1, lvl + 1);
      (*this)((code << 1) | 1, lvl + 1);
    }
  } rec{*this, level, out};
  rec(0, 0);
  return out;  // DFS order is ascending
}

std::vector<std::uint64_t> DigitIntervalOracle::level_counts(int n_max) const {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(n_max) + 1, 0);
  struct Rec {
    const DigitIntervalOracle& o;
    int n_max;
    std::vector<std::uint64_t>& counts;
    void operator()(std::uint64_t code, int lvl) const {
      if (!o.cube_occupied(code, lvl)) return;
      ++counts[lvl];
      if (lvl == n_max) return;
      (*this)(code << 1, lvl + 1);
      (*this)((code << 1) | 1, lvl + 1);
    }
  } rec{*this, n_max, counts};
  rec(0, 0);
  return counts;
}

// ---------------------------------------------------------------------------
// sequence_level_codes

std::vector<std::uint64_t> sequence_level_codes(int level) {
  if (level < 0 || level > 40) throw std::logic_error("sequence oracle: level out of range");
  const std::uint64_t scale = std::uint64_t{1} << level;
  std::vector<std::uint64_t> codes;
  codes.push_back(0);  // the accumulation point 0
  for (std::uint64_t n = 1; n <= scale; ++n) {
    std::uint64_t c = scale / n;            // floor(2^level / n) = floor(2^level * (1/n))
    if (c >= scale) c = scale - 1;          // 1/1 = 1 lands in the last cube
    codes.push_back(c);
  }
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  return codes;
}

// ---------------------------------------------------------------------------
// random_tree

frostman::OccupancyTree random_tree(std::mt19937_64& rng, const RandomTreeConfig& cfg) {
  const int bits = cfg.d * cfg.depth;
  if (bits < 1 || bits > 63) throw std::logic_error("random_tree: d*depth out of range");
  const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
  std::vector<std::uint64_t> codes;
  if (cfg.clustered) {
    const int anchor_level = cfg.depth / 2;
    const int low_bits = cfg.d * (cfg.depth - anchor_level);
    const std::uint64_t anchor = rng() & ((std::uint64_t{1} << (cfg.d * anchor_level)) - 1);
    for (int i = 0; i < cfg.target_leaves; ++i)
      codes.push_back((anchor << low_bits) | (rng() & ((std::uint64_t{1} << low_bits) - 1)));
  } else {
    for (int i = 0; i < cfg.target_leaves; ++i) codes.push_back(rng() & mask);
  }
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  return frostman::OccupancyTree::from_codes(cfg.d, cfg.depth, std::move(codes));
}

// ---------------------------------------------------------------------------
// cover enumeration

namespace {

using Hist = std::vector<std::uint32_t>;

struct EnumContext {
  const frostman::OccupancyTree& tree;
  int a, b;
  std::uint64_t cap;
  bool aborted = false;
  std::map<std::pair<int, std::uint32_t>, std::vector<Hist>> memo;

  const std::vector<Hist>& covers(int level, std::uint32_t id) {
    const auto key = std::make_pair(level, id);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<Hist> result;
    const std::size_t len = static_cast<std::size_t>(b - a) + 1;
    Hist self(len, 0);
    self[static_cast<std::size_t>(level - a)] = 1;
    if (level == b) {
      result.push_back(std::move(self));
    } else {
      // Cartesian combination of the children's cover lists.
      std::vector<Hist> acc{Hist(len, 0)};
      for (std::uint32_t c : tree.children(level, id)) {
        if (aborted) break;
        const auto& child = covers(level + 1, c);
        if (acc.size() * child.size() > cap) {
          aborted = true;
          break;
        }
        std::vector<Hist> next;
        next.reserve(acc.size() * child.size());
        for (const Hist& x : acc)
          for (const Hist& y : child) {
            Hist z = x;
            for (std::size_t i = 0; i < len; ++i) z[i] += y[i];
            next.push_back(std::move(z));
          }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        acc = std::move(next);
      }
      result = std::move(acc);
      result.push_back(std::move(self));
      std::sort(result.begin(), result.end());
      result.erase(std::unique(result.begin(), result.end()), result.end());
    }
    return memo.emplace(key, std::move(result)).first->second;
  }
};

}  // namespace

CoverEnumeration enumerate_covers(const frostman::OccupancyTree& tree, int a,
                                  std::uint32_t node_id, int b, std::uint64_t cap) {
  EnumContext ctx{tree, a, b, cap, false, {}};
  CoverEnumeration out;
  const auto& hists = ctx.covers(a, node_id);
  out.aborted = ctx.aborted;
  out.histograms = hists;
  out.cover_count = count_covers(tree, a, node_id, b, cap);
  return out;
}

std::uint64_t count_covers(const frostman::OccupancyTree& tree, int a, std::uint32_t node_id,
                           int b, std::uint64_t cap) {
  std::map<std::pair<int, std::uint32_t>, std::uint64_t> memo;
  struct Rec {
    const frostman::OccupancyTree& tree;
    int b;
    std::uint64_t cap;
    std::map<std::pair<int, std::uint32_t>, std::uint64_t>& memo;
    std::uint64_t operator()(int level, std::uint32_t id) const {
      if (level == b) return 1;
      const auto key = std::make_pair(level, id);
      if (auto it = memo.find(key); it != memo.end()) return it->second;
      std::uint64_t prod = 1;
      for (std::uint32_t c : tree.children(level, id)) {
        const std::uint64_t childs = (*this)(level + 1, c);
        if (prod > cap / std::max<std::uint64_t>(childs, 1)) {
          prod = cap + 1;  // saturate
          break;
        }
        prod *= childs;
      }
      const std::uint64_t total = std::min(prod, cap) + 1;  // children products, plus taking this cube
      memo.emplace(key, total);
      return total;
    }
  } rec{tree, b, cap, memo};
  return rec(a, node_id);
}

BruteCoverMin brute_min_cover_cost(const frostman::OccupancyTree& tree, int a,
                                   std::uint32_t node_id, int b, const ExactCoverPolicy& policy,
                                   std::uint64_t cap) {
  BruteCoverMin out;
  auto en = enumerate_covers(tree, a, node_id, b, cap);
  out.aborted = en.aborted;
  out.cover_count = en.cover_count;
  if (en.aborted || en.histograms.empty()) return out;

  const double s = static_cast<double>(policy.p) / static_cast<double>(policy.q);
  const int d = policy.d;
  auto approx_cost = [&](const Hist& h) {
    double c = 0;
    for (std::size_t i = 0; i < h.size(); ++i)
      if (h[i])
        c += static_cast<double>(h[i]) *
             std::pow(std::sqrt(static_cast<double>(d)) * std::ldexp(1.0, -(a + static_cast<int>(i))), s);
    return c;
  };
  auto exact_cost = [&](const Hist& h) {
    DyadicPowerSum c(policy.lattice());
    for (std::size_t i = 0; i < h.size(); ++i)
      if (h[i]) c = c + policy.diam_cost(a + static_cast<int>(i)).scaled(BigRat(h[i]));
    return c;
  };

  double best_approx = approx_cost(en.histograms.front());
  for (const Hist& h : en.histograms) best_approx = std::min(best_approx, approx_cost(h));
  // Double costs are accurate to ~1e-15 relative, so every histogram whose
  // true cost could still be minimal lies within this slack of the leader.
  const double slack = 1e-9 * std::max(best_approx, 1e-300);
  bool first = true;
  DyadicPowerSum best;
  for (const Hist& h : en.histograms) {
    if (approx_cost(h) > best_approx + slack) continue;
    DyadicPowerSum c = exact_cost(h);
    if (first || c.less(best)) {
      best = c;
      first = false;
    }
  }
  out.min_cost = best;
  return out;
}

// ---------------------------------------------------------------------------
// literal_cascade

namespace {

// Per-level sorted codes with range lookups; the only view of the tree the
// simulation uses.
struct CodeLevels {
  int d, depth;
  std::vector<std::vector<std::uint64_t>> codes;  // [level] sorted

  std::pair<std::size_t, std::size_t> range(int at_level, std::uint64_t code,
                                            int of_level) const {
    // Descendants of (code, of_level) among the level `at_level` codes.
    const int shift = d * (at_level - of_level);
    const auto& v = codes[static_cast<std::size_t>(at_level)];
    const std::uint64_t lo = code << shift;
    const std::uint64_t hi = (code + 1) << shift;  // d*depth <= 63 keeps this in range
    const auto it_lo = std::lower_bound(v.begin(), v.end(), lo);
    const auto it_hi = std::lower_bound(v.begin(), v.end(), hi);
    return {static_cast<std::size_t>(it_lo - v.begin()),
            static_cast<std::size_t>(it_hi - v.begin())};
  }
};

}  // namespace

DyadicPowerSum LiteralCascade::cube_mass(std::uint64_t code, int level) const {
  const int g = leaf_mass.empty() ? 1 : leaf_mass.front().lattice();
  DyadicPowerSum sum{DyadicPowerSum(g)};
  const int shift = d * (depth - level);
  const std::uint64_t lo = code << shift;
  const std::uint64_t hi = (code + 1) << shift;
  const auto it_lo = std::lower_bound(leaf_codes.begin(), leaf_codes.end(), lo);
  const auto it_hi = std::lower_bound(leaf_codes.begin(), leaf_codes.end(), hi);
  for (auto it = it_lo; it != it_hi; ++it)
    sum = sum + leaf_mass[static_cast<std::size_t>(it - leaf_codes.begin())];
  return sum;
}

LiteralCascade literal_cascade(const frostman::OccupancyTree& tree, int m, int level_top,
                               long long tp, long long tq) {
  if (!(0 <= level_top && level_top <= m && m <= tree.depth()))
    throw std::logic_error("literal_cascade: bad levels");
  ExactCascadePolicy pol{tp, tq};
  const int g = pol.lattice();

  CodeLevels cl{tree.dim(), tree.depth(), {}};
  for (int j = 0; j <= tree.depth(); ++j) cl.codes.push_back(tree.level_codes(j));

  LiteralCascade sim;
  sim.d = tree.dim();
  sim.depth = tree.depth();
  sim.m = m;
  sim.level_top = level_top;
  sim.leaf_codes = cl.codes.back();
  sim.leaf_mass.assign(sim.leaf_codes.size(), DyadicPowerSum(g));

  // Uniform split of `mass` on (code, level) down to the leaves.
  struct Fill {
    const CodeLevels& cl;
    LiteralCascade& sim;
    void operator()(int level, std::uint64_t code, const DyadicPowerSum& mass) const {
      if (level == cl.depth) {
        const auto [lo, hi] = cl.range(level, code, level);
        if (hi != lo + 1) throw std::logic_error("literal_cascade: leaf lookup failed");
        sim.leaf_mass[lo] = mass;
        return;
      }
      const auto [lo, hi] = cl.range(level + 1, code, level);
      const long long b = static_cast<long long>(hi - lo);
      if (b < 1) throw std::logic_error("literal_cascade: occupied cube without children");
      const DyadicPowerSum share = mass.scaled(BigRat(1, b));
      for (std::size_t i = lo; i < hi; ++i)
        (*this)(level + 1, cl.codes[static_cast<std::size_t>(level + 1)][i], share);
    }
  } fill{cl, sim};

  // Base layer: every occupied level-m cube carries 2^{-mt}.
  for (std::uint64_t code : cl.codes[static_cast<std::size_t>(m)]) fill(m, code, pol.cap(m));

  // Capping steps, fine to coarse.
  for (int j = m - 1; j >= level_top; --j) {
    for (std::uint64_t code : cl.codes[static_cast<std::size_t>(j)]) {
      const DyadicPowerSum mass = sim.cube_mass(code, j);
      const DyadicPowerSum cap = pol.cap(j);
      if ((mass - cap).sign() <= 0) continue;  // strict excess only
      // Record cube masses below the trigger before overwriting.
      std::vector<std::pair<std::pair<int, std::uint64_t>, DyadicPowerSum>> before;
      for (int v = j + 1; v <= sim.depth; ++v) {
        const auto [lo, hi] = cl.range(v, code, j);
        for (std::size_t i = lo; i < hi; ++i) {
          const std::uint64_t sub = cl.codes[static_cast<std::size_t>(v)][i];
          before.emplace_back(std::make_pair(v, sub), sim.cube_mass(sub, v));
        }
      }
      fill(j, code, cap);
      for (const auto& [key, old_mass] : before) {
        const DyadicPowerSum new_mass = sim.cube_mass(key.second, key.first);
        if ((new_mass - old_mass).sign() > 0) {
          sim.findings.push_back({j, code, key.first, key.second, old_mass.to_double(),
                                  new_mass.to_double()});
        }
      }
    }
  }

  DyadicPowerSum total{DyadicPowerSum(g)};
  for (const auto& lm : sim.leaf_mass) total = total + lm;
  sim.total = total;
  return sim;
}

}  // namespace testsupport
