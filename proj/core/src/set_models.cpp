#include "frostman/set_models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace frostman {

namespace {

using i128 = __int128;

constexpr std::size_t kMaxPieces = std::size_t{1} << 24;
constexpr std::size_t kMaxLeafCodes = std::size_t{1} << 26;

[[noreturn]] void fail_at(const std::string& origin, std::size_t line, const std::string& msg) {
  throw input_error(origin + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream iss(s);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_char(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// ---------------------------------------------------------------- IFS ----

void validate_ifs(const IfsSpec& spec) {
  if (spec.maps.empty()) throw input_error("ifs: at least one map required");
  const std::size_t d = spec.maps.front().offset.size();
  if (d < 1 || d > static_cast<std::size_t>(kMaxDim))
    throw input_error("ifs: offset arity must be in [1," + std::to_string(kMaxDim) + "]");
  for (const auto& m : spec.maps) {
    if (m.offset.size() != d) throw input_error("ifs: inconsistent offset arity");
    if (!m.reflect.empty() && m.reflect.size() != d)
      throw input_error("ifs: reflect arity must match offset arity");
    if (!(Frac(0, 1) < m.ratio) || !(m.ratio < Frac(1, 1)))
      throw input_error("ifs: ratio must lie strictly in (0,1)");
    for (std::size_t a = 0; a < d; ++a) {
      // image of [0,1] on this axis is [offset, offset+ratio] regardless of
      // reflection; it must stay inside [0,1]
      if (m.offset[a] < Frac(0, 1) || Frac(1, 1) < m.offset[a] + m.ratio)
        throw input_error("ifs: map image leaves [0,1]^d on axis " + std::to_string(a));
    }
  }
}

// One contraction composed down to a small piece; per-axis x -> trans + scale*x.
struct ExactAffine {
  Frac scale, trans;
};
struct ExactPiece {
  std::vector<Frac> lo, hi;
};
struct ApproxPiece {
  std::vector<long double> lo, hi;
};

bool exact_diam_small(const Frac& rabs, int d, int n_max) {
  // diameter sqrt(d)*rabs < 2^-n_max; exact when sqrt(d) is rational
  if (d == 1) return rabs.cmp_dyadic(1, n_max) < 0;
  if (d == 4) return rabs.cmp_dyadic(1, n_max + 1) < 0;
  const long double diam = static_cast<long double>(rabs.num) / rabs.den * sqrtl(d);
  return diam < ldexpl(1.0L, -n_max) * (1.0L - 1e-12L);  // bias toward refining
}

std::vector<ExactPiece> refine_exact(const IfsSpec& spec, int d, int n_max) {
  struct Item {
    std::vector<ExactAffine> ax;
    Frac rabs;
  };
  std::vector<Item> stack;
  stack.push_back({std::vector<ExactAffine>(d, {Frac(1, 1), Frac(0, 1)}), Frac(1, 1)});
  std::vector<ExactPiece> out;
  while (!stack.empty()) {
    Item it = std::move(stack.back());
    stack.pop_back();
    if (exact_diam_small(it.rabs, d, n_max)) {
      ExactPiece p;
      p.lo.reserve(d);
      p.hi.reserve(d);
      for (const auto& ax : it.ax) {
        const Frac a = ax.trans, b = ax.trans + ax.scale;
        p.lo.push_back(a < b ? a : b);
        p.hi.push_back(a < b ? b : a);
      }
      out.push_back(std::move(p));
      if (out.size() > kMaxPieces)
        throw infeasible_error("ifs refinement exceeds piece budget; lower n_max");
      continue;
    }
    for (const auto& m : spec.maps) {
      Item next;
      next.rabs = it.rabs * m.ratio;
      next.ax.reserve(d);
      for (int a = 0; a < d; ++a) {
        const bool refl = !m.reflect.empty() && m.reflect[a];
        const Frac ms = refl ? Frac(-m.ratio.num, m.ratio.den) : m.ratio;
        const Frac mt = refl ? m.offset[a] + m.ratio : m.offset[a];
        next.ax.push_back({it.ax[a].scale * ms, it.ax[a].trans + it.ax[a].scale * mt});
      }
      stack.push_back(std::move(next));
    }
    if (stack.size() > kMaxPieces)
      throw infeasible_error("ifs refinement exceeds piece budget; lower n_max");
  }
  return out;
}

std::vector<ApproxPiece> refine_approx(const IfsSpec& spec, int d, int n_max) {
  struct Axis {
    long double scale, trans;
  };
  struct Item {
    std::vector<Axis> ax;
    long double rabs;
  };
  const long double thr = ldexpl(1.0L, -n_max) * (1.0L - 1e-12L);
  std::vector<Item> stack;
  stack.push_back({std::vector<Axis>(d, {1.0L, 0.0L}), 1.0L});
  std::vector<ApproxPiece> out;
  while (!stack.empty()) {
    Item it = std::move(stack.back());
    stack.pop_back();
    if (it.rabs * sqrtl(d) < thr) {
      ApproxPiece p;
      for (const auto& ax : it.ax) {
        p.lo.push_back(std::min(ax.trans, ax.trans + ax.scale));
        p.hi.push_back(std::max(ax.trans, ax.trans + ax.scale));
      }
      out.push_back(std::move(p));
      if (out.size() > kMaxPieces)
        throw infeasible_error("ifs refinement exceeds piece budget; lower n_max");
      continue;
    }
    for (const auto& m : spec.maps) {
      Item next;
      const long double r = static_cast<long double>(m.ratio.num) / m.ratio.den;
      next.rabs = it.rabs * r;
      for (int a = 0; a < d; ++a) {
        const bool refl = !m.reflect.empty() && m.reflect[a];
        const long double off = static_cast<long double>(m.offset[a].num) / m.offset[a].den;
        const long double ms = refl ? -r : r;
        const long double mt = refl ? off + r : off;
        next.ax.push_back({it.ax[a].scale * ms, it.ax[a].trans + it.ax[a].scale * mt});
      }
      stack.push_back(std::move(next));
    }
    if (stack.size() > kMaxPieces)
      throw infeasible_error("ifs refinement exceeds piece budget; lower n_max");
  }
  return out;
}

// Collects occupied leaf codes by pruning the piece list down the cube tree.
template <class Piece, class Overlap>
std::vector<std::uint64_t> pieces_to_leaves(const std::vector<Piece>& pieces, int d, int n_max,
                                            const Overlap& overlaps) {
  std::vector<std::uint64_t> out;
  std::vector<std::uint64_t> ks(d, 0), ks2(d, 0);

  struct Rec {
    const std::vector<Piece>& pieces;
    int d, n_max;
    const Overlap& overlaps;
    std::vector<std::uint64_t>& out;
    void operator()(int level, std::uint64_t code, const std::vector<std::uint64_t>& ks,
                    const std::vector<std::uint32_t>& idx) {
      if (idx.empty()) return;
      if (level == n_max) {
        out.push_back(code);
        if (out.size() > kMaxLeafCodes)
          throw infeasible_error("realized set exceeds the leaf-cube budget; lower n_max");
        return;
      }
      std::vector<std::uint64_t> ks2(d);
      for (unsigned slot = 0; slot < (1u << d); ++slot) {
        for (int a = 0; a < d; ++a) ks2[a] = (ks[a] << 1) | ((slot >> a) & 1u);
        std::vector<std::uint32_t> sub;
        for (std::uint32_t i : idx)
          if (overlaps(pieces[i], ks2, level + 1)) sub.push_back(i);
        (*this)(level + 1, (code << d) | slot, ks2, sub);
      }
    }
  } rec{pieces, d, n_max, overlaps, out};

  std::vector<std::uint32_t> all(pieces.size());
  for (std::uint32_t i = 0; i < pieces.size(); ++i) all[i] = i;
  rec(0, 0, ks, all);
  std::sort(out.begin(), out.end());
  return out;
}

OccupancyTree realize_ifs(const IfsSpec& spec, int n_max) {
  validate_ifs(spec);
  const int d = static_cast<int>(spec.maps.front().offset.size());
  check_depth(d, n_max);
  try {
    auto pieces = refine_exact(spec, d, n_max);
    auto overlaps = [d](const ExactPiece& p, const std::vector<std::uint64_t>& ks, int level) {
      for (int a = 0; a < d; ++a)
        // closed piece vs half-open cube [k*2^-L, (k+1)*2^-L)
        if (!(p.lo[a].cmp_dyadic(ks[a] + 1, level) < 0 && p.hi[a].cmp_dyadic(ks[a], level) >= 0))
          return false;
      return true;
    };
    return OccupancyTree::from_codes(d, n_max, pieces_to_leaves(pieces, d, n_max, overlaps));
  } catch (const input_error&) {
    // 64-bit rational overflow during composition: fall back to long-double
    // pieces padded by a conservative slack margin.
    const long double slack = ldexpl(1.0L, -50);
    auto pieces = refine_approx(spec, d, n_max);
    auto overlaps = [d, slack](const ApproxPiece& p, const std::vector<std::uint64_t>& ks,
                               int level) {
      for (int a = 0; a < d; ++a) {
        const long double lo = ldexpl(static_cast<long double>(ks[a]), -level);
        const long double hi = ldexpl(static_cast<long double>(ks[a] + 1), -level);
        if (!(p.lo[a] - slack < hi && p.hi[a] + slack >= lo)) return false;
      }
      return true;
    };
    return OccupancyTree::from_codes(d, n_max, pieces_to_leaves(pieces, d, n_max, overlaps));
  }
}

// ---------------------------------------------------------- digit sets ----

void validate_digit(const DigitSetSpec& spec) {
  if (spec.base < 2 || spec.base > (1 << 20))
    throw input_error("digit set: base must be in [2, 2^20]");
  if (spec.pattern.empty()) throw input_error("digit set: empty pattern");
  for (const auto& cls : spec.pattern) {
    if (cls.empty()) throw input_error("digit set: empty digit class");
    if (!std::is_sorted(cls.begin(), cls.end()) ||
        std::adjacent_find(cls.begin(), cls.end()) != cls.end())
      throw input_error("digit set: digit classes must be sorted and unique");
    if (cls.front() < 0 || cls.back() >= spec.base)
      throw input_error("digit set: digit outside [0, base)");
  }
}

// Bit automaton for base 2^w: a cube fixes a bit prefix, and it is occupied
// iff the prefix extends to an admissible digit string.  States track the
// pattern position and the partial bits of the current digit.
struct DigitMachine {
  struct state_type {
    std::uint32_t cls = 0, off = 0, partial = 0;
  };
  int w = 1;
  std::uint32_t period = 1;
  // prefix_ok[cls][off] = admissible high-bit prefixes of length off (off in 1..w)
  std::vector<std::vector<std::vector<char>>> prefix_ok;

  explicit DigitMachine(const DigitSetSpec& spec) {
    w = __builtin_ctzll(spec.base);
    period = static_cast<std::uint32_t>(spec.pattern.size());
    prefix_ok.resize(period);
    for (std::uint32_t c = 0; c < period; ++c) {
      prefix_ok[c].resize(w + 1);
      for (int off = 1; off <= w; ++off) prefix_ok[c][off].assign(std::size_t{1} << off, 0);
      for (long long digit : spec.pattern[c])
        for (int off = 1; off <= w; ++off)
          prefix_ok[c][off][static_cast<std::size_t>(digit >> (w - off))] = 1;
    }
  }

  state_type initial() const { return {}; }
  std::uint64_t key(const state_type& s) const {
    return (std::uint64_t{s.cls} << 32) | (std::uint64_t{s.off} << 24) | s.partial;
  }
  bool step(const state_type& s, unsigned bit, int /*level*/, state_type* out) const {
    const std::uint32_t p2 = (s.partial << 1) | bit;
    if (!prefix_ok[s.cls][s.off + 1][p2]) return false;
    if (static_cast<int>(s.off) + 1 == w)
      *out = {(s.cls + 1) % period, 0, 0};
    else
      *out = {s.cls, s.off + 1, p2};
    return true;
  }
};

OccupancyTree realize_digit(const DigitSetSpec& spec, int n_max) {
  validate_digit(spec);
  check_depth(1, n_max);
  if ((spec.base & (spec.base - 1)) == 0 && spec.base <= (1 << 16))
    return OccupancyTree::from_state_machine(1, n_max, DigitMachine(spec));

  // Conservative interval scheme: admissible digit prefixes of depth q with
  // B^-q < 2^-n_max become closed intervals [v, v+B^-q].
  int q = 0;
  i128 bq = 1;
  while (bq <= (i128{1} << n_max)) {
    bq *= spec.base;
    ++q;
    if (bq > (i128{1} << 62))
      throw infeasible_error("digit set: B^q overflows at this depth; lower n_max");
  }
  const long long den = static_cast<long long>(bq);

  std::vector<std::uint64_t> codes;
  const std::uint64_t top = (std::uint64_t{1} << n_max) - 1;
  struct Rec {
    const DigitSetSpec& spec;
    int q, n_max;
    long long den;
    std::vector<std::uint64_t>& codes;
    std::uint64_t top;
    void operator()(int depth, long long num) const {
      if (depth == q) {
        // cubes meeting [num/den, (num+1)/den]
        const std::uint64_t klo =
            static_cast<std::uint64_t>((i128(num) << n_max) / den);
        std::uint64_t khi = static_cast<std::uint64_t>((i128(num + 1) << n_max) / den);
        if (khi > top) khi = top;
        for (std::uint64_t k = klo; k <= khi; ++k) {
          codes.push_back(k);
          if (codes.size() > kMaxLeafCodes)
            throw infeasible_error("digit set exceeds the leaf-cube budget; lower n_max");
        }
        return;
      }
      for (long long digit : spec.pattern[depth % spec.pattern.size()])
        (*this)(depth + 1, num * spec.base + digit);
    }
  } rec{spec, q, n_max, den, codes, top};
  rec(0, 0);
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  return OccupancyTree::from_codes(1, n_max, std::move(codes));
}

// -------------------------------------------------------- sequence sets ----

std::uint64_t ipow_clamped(std::uint64_t base, int exp, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

OccupancyTree realize_sequence(const SequenceSetSpec& spec, int n_max) {
  if (!(spec.p > 0) || !(spec.p <= 64)) throw input_error("sequence set: p must be in (0, 64]");
  check_depth(1, n_max);
  const std::uint64_t top = (std::uint64_t{1} << n_max) - 1;
  std::vector<std::uint64_t> codes{0};  // the cube containing 0 and every x < 2^-n_max

  const bool int_p = spec.p == std::floor(spec.p);
  const int ip = static_cast<int>(spec.p);
  const std::uint64_t cap = std::uint64_t{1} << 60;
  std::uint64_t fill_to = 0;

  std::uint64_t m = 1;
  for (;; ++m) {
    if (int_p) {
      const std::uint64_t a = ipow_clamped(m, ip, cap);
      const std::uint64_t b = ipow_clamped(m + 1, ip, cap);
      if (a > cap || b > cap) {  // beyond 2^-60 every gap is sub-resolution
        fill_to = a > cap ? 0 : static_cast<std::uint64_t>((i128(1) << n_max) / a);
        break;
      }
      // gap m^-p - (m+1)^-p >= 2^-n  <=>  2^n (b - a) >= a*b; once gaps drop
      // below resolution, cubes from m^-p down to 0 form a contiguous run
      if (!((i128(b - a) << n_max) >= i128(a) * b)) {
        fill_to = static_cast<std::uint64_t>((i128(1) << n_max) / a);
        break;
      }
      std::uint64_t k = static_cast<std::uint64_t>((i128(1) << n_max) / a);
      codes.push_back(std::min(k, top));
    } else {
      const long double xm = powl(static_cast<long double>(m), -(long double)spec.p);
      const long double xn = powl(static_cast<long double>(m + 1), -(long double)spec.p);
      if (xm - xn < ldexpl(1.0L, -n_max) * (1.0L - 1e-9L)) {
        fill_to = static_cast<std::uint64_t>(floorl(ldexpl(xm, n_max)));
        break;
      }
      std::uint64_t k = static_cast<std::uint64_t>(floorl(ldexpl(xm, n_max)));
      codes.push_back(std::min(k, top));
    }
  }
  if (fill_to + 1 + codes.size() > kMaxLeafCodes)
    throw infeasible_error("sequence set too dense at this depth; lower n_max or raise p");
  for (std::uint64_t k = 0; k <= fill_to; ++k) codes.push_back(k);

  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  return OccupancyTree::from_codes(1, n_max, std::move(codes));
}

}  // namespace

// ------------------------------------------------------------- ingest ----

PointIngest ingest_points(std::istream& is, int n_max, bool normalize,
                          const std::string& origin) {
  std::vector<std::vector<double>> points;
  std::vector<std::size_t> lines;  // source line per point, for diagnostics
  std::string line;
  std::size_t lineno = 0;
  int d = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    std::vector<double> pt;
    pt.reserve(toks.size());
    for (const auto& t : toks) {
      try {
        std::size_t pos = 0;
        pt.push_back(std::stod(t, &pos));
        if (pos != t.size()) throw std::invalid_argument(t);
      } catch (...) {
        fail_at(origin, lineno, "malformed coordinate '" + t + "'");
      }
    }
    if (d == 0) {
      d = static_cast<int>(pt.size());
      if (d < 1 || d > kMaxDim)
        fail_at(origin, lineno, "point arity " + std::to_string(pt.size()) + " unsupported");
    } else if (static_cast<int>(pt.size()) != d) {
      fail_at(origin, lineno,
              "expected " + std::to_string(d) + " coordinates, got " + std::to_string(pt.size()));
    }
    points.push_back(std::move(pt));
    lines.push_back(lineno);
  }
  if (points.empty()) throw input_error(origin + ": empty point set");

  PointIngest out;
  out.point_count = points.size();
  out.dim = d;
  out.normalized = normalize;
  out.offset.assign(d, 0.0);
  out.scale.assign(d, 1.0);

  if (normalize) {
    const double eps = std::ldexp(1.0, -n_max - 1);
    for (int a = 0; a < d; ++a) {
      double lo = points[0][a], hi = points[0][a];
      for (const auto& pt : points) {
        lo = std::min(lo, pt[a]);
        hi = std::max(hi, pt[a]);
      }
      out.offset[a] = lo;
      out.scale[a] = (hi > lo) ? (1.0 - eps) / (hi - lo) : 1.0;
    }
    for (auto& pt : points)
      for (int a = 0; a < d; ++a)
        pt[a] = std::min((pt[a] - out.offset[a]) * out.scale[a], 1.0 - eps);
  } else {
    for (std::size_t i = 0; i < points.size(); ++i)
      for (int a = 0; a < d; ++a)
        if (!(points[i][a] >= 0.0 && points[i][a] < 1.0))
          fail_at(origin, lines[i],
                  "point #" + std::to_string(i + 1) + " coordinate " +
                      std::to_string(points[i][a]) +
                      " outside [0,1); pass normalize to rescale");
  }
  out.tree = OccupancyTree::from_points(d, n_max, points);
  return out;
}

PointIngest ingest_points_file(const std::string& path, int n_max, bool normalize) {
  std::ifstream f(path);
  if (!f) throw input_error("cannot open point file: " + path);
  return ingest_points(f, n_max, normalize, path);
}

// -------------------------------------------------------------- parsing ----

int spec_dim(const SetSpec& spec) {
  if (std::holds_alternative<IfsSpec>(spec)) {
    const auto& ifs = std::get<IfsSpec>(spec);
    return ifs.maps.empty() ? 0 : static_cast<int>(ifs.maps.front().offset.size());
  }
  if (std::holds_alternative<PointCloudSpec>(spec)) return 0;  // known after ingest
  return 1;
}

namespace {

Frac parse_frac_at(const std::string& origin, std::size_t line, const std::string& s) {
  if (auto f = parse_exact_number(s)) return *f;
  fail_at(origin, line, "number '" + s + "' is not an exact rational (use p/q)");
}

SimilarityMap parse_map_line(const std::string& origin, std::size_t lineno,
                             const std::vector<std::string>& toks) {
  SimilarityMap m;
  bool have_ratio = false, have_offset = false;
  for (std::size_t i = 1; i < toks.size(); ++i) {
    const auto eq = toks[i].find('=');
    if (eq == std::string::npos) fail_at(origin, lineno, "expected key=value, got " + toks[i]);
    const std::string key = toks[i].substr(0, eq), val = toks[i].substr(eq + 1);
    if (key == "ratio") {
      m.ratio = parse_frac_at(origin, lineno, val);
      have_ratio = true;
    } else if (key == "offset") {
      for (const auto& part : split_char(val, ','))
        m.offset.push_back(parse_frac_at(origin, lineno, part));
      have_offset = true;
    } else if (key == "reflect") {
      for (const auto& part : split_char(val, ',')) {
        if (part != "0" && part != "1") fail_at(origin, lineno, "reflect entries must be 0/1");
        m.reflect.push_back(part == "1");
      }
    } else {
      fail_at(origin, lineno, "unknown map field '" + key + "'");
    }
  }
  if (!have_ratio || !have_offset) fail_at(origin, lineno, "map needs ratio= and offset=");
  return m;
}

}  // namespace

SetSpec parse_set_spec(std::istream& is, const std::string& origin) {
  std::string type;
  IfsSpec ifs;
  DigitSetSpec digit;
  SequenceSetSpec seq;
  PointCloudSpec pc;
  bool have_base = false, have_p = false, have_path = false;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    const std::string& key = toks[0];
    if (key == "type") {
      if (toks.size() != 2) fail_at(origin, lineno, "type needs one value");
      type = toks[1];
    } else if (key == "map") {
      ifs.maps.push_back(parse_map_line(origin, lineno, toks));
    } else if (key == "base") {
      if (toks.size() != 2) fail_at(origin, lineno, "base needs one value");
      try {
        digit.base = std::stoll(toks[1]);
      } catch (...) {
        fail_at(origin, lineno, "malformed base");
      }
      have_base = true;
    } else if (key == "digits") {
      if (toks.size() != 2) fail_at(origin, lineno, "digits needs a comma-separated list");
      std::vector<long long> cls;
      for (const auto& part : split_char(toks[1], ',')) {
        try {
          cls.push_back(std::stoll(part));
        } catch (...) {
          fail_at(origin, lineno, "malformed digit '" + part + "'");
        }
      }
      std::sort(cls.begin(), cls.end());
      digit.pattern.push_back(std::move(cls));
    } else if (key == "p") {
      if (toks.size() != 2) fail_at(origin, lineno, "p needs one value");
      seq.p = parse_number(toks[1]);
      have_p = true;
    } else if (key == "path") {
      if (toks.size() != 2) fail_at(origin, lineno, "path needs one value");
      pc.path = toks[1];
      have_path = true;
    } else if (key == "normalize") {
      if (toks.size() != 2 || (toks[1] != "true" && toks[1] != "false"))
        fail_at(origin, lineno, "normalize must be true or false");
      pc.normalize = toks[1] == "true";
    } else {
      fail_at(origin, lineno, "unknown directive '" + key + "'");
    }
  }

  if (type == "ifs") {
    validate_ifs(ifs);
    return ifs;
  }
  if (type == "digit") {
    if (!have_base) throw input_error(origin + ": digit spec needs base");
    validate_digit(digit);
    return digit;
  }
  if (type == "sequence") {
    if (!have_p) throw input_error(origin + ": sequence spec needs p");
    if (!(seq.p > 0)) throw input_error(origin + ": p must be positive");
    return seq;
  }
  if (type == "points") {
    if (!have_path) throw input_error(origin + ": points spec needs path");
    // resolve relative to the spec file location
    if (!pc.path.empty() && pc.path.front() != '/') {
      if (auto slash = origin.find_last_of('/'); slash != std::string::npos)
        pc.path = origin.substr(0, slash + 1) + pc.path;
    }
    return pc;
  }
  throw input_error(origin + ": missing or unknown type (points|ifs|digit|sequence)");
}

SetSpec parse_set_spec_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw input_error("cannot open spec file: " + path);
  return parse_set_spec(f, path);
}

OccupancyTree realize(const SetSpec& spec, int n_max) {
  if (std::holds_alternative<PointCloudSpec>(spec)) {
    const auto& pc = std::get<PointCloudSpec>(spec);
    return ingest_points_file(pc.path, n_max, pc.normalize).tree;
  }
  if (std::holds_alternative<IfsSpec>(spec)) return realize_ifs(std::get<IfsSpec>(spec), n_max);
  if (std::holds_alternative<DigitSetSpec>(spec))
    return realize_digit(std::get<DigitSetSpec>(spec), n_max);
  return realize_sequence(std::get<SequenceSetSpec>(spec), n_max);
}

}  // namespace frostman
