#include "frostman/occupancy_tree.hpp"

#include <algorithm>
#include <cassert>

namespace frostman {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

std::string cube_str(int d, const DyadicCube& q) {
  std::string s = "level " + std::to_string(q.level) + " cube (";
  auto ks = deinterleave(q.code, d, q.level);
  for (std::size_t i = 0; i < ks.size(); ++i)
    s += (i ? "," : "") + std::to_string(ks[i]);
  return s + ")";
}

}  // namespace

void OccupancyTree::init(int d, int n_max) {
  check_depth(d, n_max);
  d_ = d;
  n_max_ = n_max;
  levels_.assign(n_max + 1, {});
  child_ids_.assign(n_max + 1, {});
  cons_.assign(n_max + 1, {});
}

std::uint32_t OccupancyTree::intern(int level, std::uint64_t mask,
                                    const std::vector<std::uint32_t>& kids) {
  std::uint64_t h = mix(0, mask);
  for (auto k : kids) h = mix(h, k);
  auto& bucket = cons_[level][h];
  for (std::uint32_t id : bucket) {
    const Node& n = levels_[level][id];
    if (n.mask != mask) continue;
    auto span = children(level, id);
    if (std::equal(span.begin(), span.end(), kids.begin(), kids.end())) return id;
  }
  const auto id = static_cast<std::uint32_t>(levels_[level].size());
  const auto first = static_cast<std::uint32_t>(child_ids_[level].size());
  child_ids_[level].insert(child_ids_[level].end(), kids.begin(), kids.end());
  levels_[level].push_back(Node{mask, first, 0});
  bucket.push_back(id);
  return id;
}

void OccupancyTree::finalize() {
  cons_.clear();
  if (levels_[0].size() != 1)
    throw input_error("internal: tree must have exactly one root node");
  for (auto& lv : levels_)
    for (auto& n : lv) n.mult = 0;
  levels_[0][0].mult = 1;
  for (int n = 0; n < n_max_; ++n)
    for (std::uint32_t id = 0; id < levels_[n].size(); ++id)
      for (std::uint32_t c : children(n, id)) levels_[n + 1][c].mult += levels_[n][id].mult;

  cube_counts_.assign(n_max_ + 1, 0);
  min_branching_.assign(n_max_ + 1, 0);
  for (int n = 0; n <= n_max_; ++n) {
    std::uint64_t total = 0;
    std::uint64_t minb = ~std::uint64_t{0};
    for (const Node& nd : levels_[n]) {
      total += nd.mult;
      if (n < n_max_) minb = std::min<std::uint64_t>(minb, branching(nd.mask));
    }
    cube_counts_[n] = total;
    min_branching_[n] = (n < n_max_) ? minb : 0;
  }
}

OccupancyTree OccupancyTree::from_codes(int d, int n_max, std::vector<std::uint64_t> leaf_codes) {
  OccupancyTree t;
  t.init(d, n_max);
  if (leaf_codes.empty()) throw input_error("empty point set: no occupied leaf cubes");
  if (!std::is_sorted(leaf_codes.begin(), leaf_codes.end()) ||
      std::adjacent_find(leaf_codes.begin(), leaf_codes.end()) != leaf_codes.end())
    throw input_error("leaf codes must be sorted and unique");
  if (d * n_max < 64 && (leaf_codes.back() >> (d * n_max)) != 0)
    throw input_error("leaf code exceeds 2^(d*n_max)");

  t.levels_[n_max].push_back(Node{0, 0, 0});
  const std::uint64_t slot_mask = (std::uint64_t{1} << d) - 1;

  // (code, node id) pairs for the level being consumed, ascending by code.
  std::vector<std::pair<std::uint64_t, std::uint32_t>> cur;
  cur.reserve(leaf_codes.size());
  for (std::uint64_t c : leaf_codes) cur.emplace_back(c, 0);

  for (int level = n_max - 1; level >= 0; --level) {
    std::vector<std::pair<std::uint64_t, std::uint32_t>> up;
    std::size_t i = 0;
    std::vector<std::uint32_t> kids;
    while (i < cur.size()) {
      const std::uint64_t pcode = cur[i].first >> d;
      std::uint64_t mask = 0;
      kids.clear();
      while (i < cur.size() && (cur[i].first >> d) == pcode) {
        mask |= std::uint64_t{1} << (cur[i].first & slot_mask);
        kids.push_back(cur[i].second);
        ++i;
      }
      up.emplace_back(pcode, t.intern(level, mask, kids));
    }
    cur.swap(up);
  }
  t.finalize();
  return t;
}

OccupancyTree OccupancyTree::from_points(int d, int n_max,
                                         const std::vector<std::vector<double>>& points) {
  check_depth(d, n_max);
  if (points.empty()) throw input_error("empty point set");
  std::vector<std::uint64_t> codes;
  codes.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (static_cast<int>(points[i].size()) != d)
      throw input_error("point #" + std::to_string(i + 1) + " has arity " +
                        std::to_string(points[i].size()) + ", expected " + std::to_string(d));
    try {
      codes.push_back(containing_cube(points[i], n_max).code);
    } catch (const input_error& e) {
      throw input_error("point #" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  return from_codes(d, n_max, std::move(codes));
}

OccupancyTree OccupancyTree::from_oracle(int d, int n_max,
                                         const std::function<bool(const DyadicCube&)>& oracle,
                                         const OracleOptions& opts) {
  OccupancyTree t;
  t.init(d, n_max);
  t.levels_[n_max].push_back(Node{0, 0, 0});
  const DyadicCube root{0, 0};
  if (!oracle(root)) throw input_error("oracle rejects the root cube (empty set)");

  struct Rec {
    OccupancyTree& t;
    const std::function<bool(const DyadicCube&)>& oracle;
    const OracleOptions& opts;
    std::uint32_t operator()(const DyadicCube& q) {
      if (q.level == t.n_max_) return 0;
      std::uint64_t mask = 0;
      std::vector<std::uint32_t> kids;
      for (unsigned slot = 0; slot < (1u << t.d_); ++slot) {
        const DyadicCube c = child(q, t.d_, slot);
        if (oracle(c)) {
          mask |= std::uint64_t{1} << slot;
          kids.push_back((*this)(c));
        } else if (opts.check_monotonicity && c.level < t.n_max_) {
          for (unsigned s2 = 0; s2 < (1u << t.d_); ++s2) {
            const DyadicCube g = child(c, t.d_, s2);
            if (oracle(g))
              throw input_error("oracle monotonicity violation: accepts " +
                                cube_str(t.d_, g) + " under rejected " + cube_str(t.d_, c));
          }
        }
      }
      if (mask == 0)
        throw input_error("oracle dead-end: " + cube_str(t.d_, q) +
                          " is accepted but all its children are rejected");
      return t.intern(q.level, mask, kids);
    }
  } rec{t, oracle, opts};

  rec(root);
  t.finalize();
  return t;
}

OccupancyTree OccupancyTree::full(int d, int n_max) {
  OccupancyTree t;
  t.init(d, n_max);
  t.levels_[n_max].push_back(Node{0, 0, 0});
  const int nslots = 1 << d;
  const std::uint64_t mask = (nslots == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << nslots) - 1);
  for (int level = n_max - 1; level >= 0; --level) {
    std::vector<std::uint32_t> kids(std::size_t{1} << d, 0);
    t.intern(level, mask, kids);
  }
  t.finalize();
  return t;
}

OccupancyTree OccupancyTree::from_level_codes(
    int d, int n_max, const std::vector<std::vector<std::uint64_t>>& codes) {
  check_depth(d, n_max);
  if (static_cast<int>(codes.size()) != n_max + 1)
    throw format_error(format_error::kind::invalid_structure,
                       "expected " + std::to_string(n_max + 1) + " level blocks");
  if (codes[0] != std::vector<std::uint64_t>{0})
    throw format_error(format_error::kind::invalid_structure,
                       "level 0 must contain exactly the root cube");
  for (int n = 0; n <= n_max; ++n) {
    if (codes[n].empty() || !std::is_sorted(codes[n].begin(), codes[n].end()) ||
        std::adjacent_find(codes[n].begin(), codes[n].end()) != codes[n].end())
      throw format_error(format_error::kind::invalid_structure,
                         "level " + std::to_string(n) + " codes not sorted/unique/nonempty");
  }
  // Occupancy is exactly the parent closure of the leaf level.
  for (int n = n_max; n > 0; --n) {
    std::vector<std::uint64_t> parents;
    parents.reserve(codes[n].size());
    for (std::uint64_t c : codes[n]) parents.push_back(c >> d);
    parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
    if (parents != codes[n - 1])
      throw format_error(format_error::kind::invalid_structure,
                         "level " + std::to_string(n - 1) +
                             " cubes disagree with the parents of level " + std::to_string(n) +
                             " (upward closure / dead cube)");
  }
  return from_codes(d, n_max, codes[n_max]);
}

bool OccupancyTree::occupied(const DyadicCube& q) const { return walk(q).has_value(); }

std::optional<std::vector<std::uint32_t>> OccupancyTree::walk(const DyadicCube& q) const {
  if (q.level > n_max_)
    throw input_error("cube level " + std::to_string(q.level) + " exceeds tree depth " +
                      std::to_string(n_max_));
  std::vector<std::uint32_t> ids(q.level + 1);
  std::uint32_t id = 0;
  ids[0] = 0;
  const std::uint64_t slot_mask = (std::uint64_t{1} << d_) - 1;
  for (int j = 0; j < q.level; ++j) {
    const unsigned slot =
        static_cast<unsigned>((q.code >> (d_ * (q.level - 1 - j))) & slot_mask);
    const Node& n = levels_[j][id];
    if (!((n.mask >> slot) & 1u)) return std::nullopt;
    const int rank = branching(n.mask & ((std::uint64_t{1} << slot) - 1));
    id = child_ids_[j][n.first_child + rank];
    ids[j + 1] = id;
  }
  return ids;
}

int OccupancyTree::occupied_children_count(const DyadicCube& q) const {
  if (q.level >= n_max_)
    throw input_error("occupied-children count requires level < n_max");
  auto ids = walk(q);
  if (!ids) throw input_error("cube is not occupied: " + cube_str(d_, q));
  return branching(levels_[q.level][ids->back()].mask);
}

DyadicCube OccupancyTree::first_leaf_under(const DyadicCube& q) const {
  auto ids = walk(q);
  if (!ids) throw input_error("cube is not occupied: " + cube_str(d_, q));
  std::uint32_t id = ids->back();
  std::uint64_t code = q.code;
  for (int j = q.level; j < n_max_; ++j) {
    const Node& n = levels_[j][id];
    const unsigned slot = static_cast<unsigned>(__builtin_ctzll(n.mask));
    code = (code << d_) | slot;
    id = child_ids_[j][n.first_child];
  }
  return {n_max_, code};
}

std::uint64_t OccupancyTree::min_branching(int level) const {
  if (level < 0 || level >= n_max_)
    throw input_error("min branching is defined for levels 0..n_max-1");
  return min_branching_[level];
}

std::vector<std::uint64_t> OccupancyTree::descendant_counts(int a, int b) const {
  if (a < 0 || b > n_max_ || a > b) throw input_error("bad level pair for descendant counts");
  std::vector<std::uint64_t> dp(levels_[b].size(), 1);
  for (int j = b - 1; j >= a; --j) {
    std::vector<std::uint64_t> up(levels_[j].size(), 0);
    for (std::uint32_t id = 0; id < levels_[j].size(); ++id)
      for (std::uint32_t c : children(j, id)) up[id] += dp[c];
    dp.swap(up);
  }
  return dp;
}

std::vector<std::vector<std::uint64_t>> OccupancyTree::leaf_counts() const {
  std::vector<std::vector<std::uint64_t>> dp(n_max_ + 1);
  dp[n_max_].assign(levels_[n_max_].size(), 1);
  for (int j = n_max_ - 1; j >= 0; --j) {
    dp[j].assign(levels_[j].size(), 0);
    for (std::uint32_t id = 0; id < levels_[j].size(); ++id)
      for (std::uint32_t c : children(j, id)) dp[j][id] += dp[j + 1][c];
  }
  return dp;
}

DyadicCube OccupancyTree::first_cube_where(int level, const std::vector<char>& target) const {
  if (level < 0 || level > n_max_ || target.size() != levels_[level].size())
    throw input_error("bad target set for cube search");
  std::vector<std::vector<char>> reach(level + 1);
  reach[level] = target;
  for (int j = level - 1; j >= 0; --j) {
    reach[j].assign(levels_[j].size(), 0);
    for (std::uint32_t id = 0; id < levels_[j].size(); ++id)
      for (std::uint32_t c : children(j, id))
        if (reach[j + 1][c]) reach[j][id] = 1;
  }
  if (!reach[0][0]) throw input_error("no cube matches the search target");
  std::uint64_t code = 0;
  std::uint32_t id = 0;
  for (int j = 0; j < level; ++j) {
    const Node& n = levels_[j][id];
    int rank = 0;
    bool moved = false;
    for (unsigned slot = 0; slot < (1u << d_); ++slot) {
      if (!((n.mask >> slot) & 1u)) continue;
      const std::uint32_t c = child_ids_[j][n.first_child + rank];
      if (reach[j + 1][c]) {
        code = (code << d_) | slot;
        id = c;
        moved = true;
        break;
      }
      ++rank;
    }
    assert(moved);
    (void)moved;
  }
  return {level, code};
}

void OccupancyTree::for_each_cube(
    int level, const std::function<void(std::uint64_t, std::uint32_t)>& fn) const {
  if (level < 0 || level > n_max_) throw input_error("level out of range");
  struct Rec {
    const OccupancyTree& t;
    int target;
    const std::function<void(std::uint64_t, std::uint32_t)>& fn;
    void operator()(int j, std::uint32_t id, std::uint64_t code) const {
      if (j == target) {
        fn(code, id);
        return;
      }
      const Node& n = t.levels_[j][id];
      int rank = 0;
      for (unsigned slot = 0; slot < (1u << t.d_); ++slot) {
        if (!((n.mask >> slot) & 1u)) continue;
        (*this)(j + 1, t.child_ids_[j][n.first_child + rank], (code << t.d_) | slot);
        ++rank;
      }
    }
  } rec{*this, level, fn};
  rec(0, 0, 0);
}

std::vector<std::uint64_t> OccupancyTree::level_codes(int level) const {
  std::vector<std::uint64_t> out;
  out.reserve(cube_counts_[level]);
  for_each_cube(level, [&](std::uint64_t code, std::uint32_t) { out.push_back(code); });
  return out;
}

std::size_t OccupancyTree::total_nodes() const {
  std::size_t s = 0;
  for (const auto& lv : levels_) s += lv.size();
  return s;
}

bool equal_occupancy(const OccupancyTree& a, const OccupancyTree& b) {
  if (a.d_ != b.d_ || a.n_max_ != b.n_max_) return false;
  if (a.cube_counts_ != b.cube_counts_) return false;
  // Leaf codes determine every coarser level (occupancy is the parent closure).
  return a.level_codes(a.n_max_) == b.level_codes(b.n_max_);
}

}  // namespace frostman
