#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "frostman/dyadic.hpp"
#include "frostman/errors.hpp"

namespace frostman {

// Occupancy tree of a compact set E in [0,1)^d: per level n = 0..n_max the
// family of dyadic cubes meeting E.  Occupancy is upward closed, the root is
// always occupied, and every occupied cube above n_max has between 1 and 2^d
// occupied children.
//
// Storage is a per-level hash-consed DAG: structurally identical subtrees
// share one node, and each node carries the number of occupied cubes with
// that shape (mult).  Self-similar sets (full cubes, power-of-two digit
// sets) collapse to a handful of nodes per level, so depth-20 trees in d=2
// with 2^40 leaf cubes stay byte-sized; unstructured trees degrade to one
// node per cube.  Cube identity is recovered by walking Z-order codes from
// the root, so all per-cube queries remain integer arithmetic.
class OccupancyTree {
 public:
  struct Node {
    std::uint64_t mask = 0;         // occupied child slots; 0 at level n_max
    std::uint32_t first_child = 0;  // offset into the level's child-id array
    std::uint64_t mult = 0;         // occupied cubes sharing this shape
  };

  struct OracleOptions {
    bool check_monotonicity;
    OracleOptions() : check_monotonicity(true) {}
  };

  OccupancyTree() = default;

  int dim() const { return d_; }
  int depth() const { return n_max_; }

  // ---- construction ----

  static OccupancyTree from_points(int d, int n_max,
                                   const std::vector<std::vector<double>>& points);

  // Sorted, de-duplicated Z-order codes of the occupied level-n_max cubes.
  static OccupancyTree from_codes(int d, int n_max, std::vector<std::uint64_t> leaf_codes);

  // Top-down recursion over an occupancy predicate.  The tree holds exactly
  // the accepted cubes.  With check_monotonicity, children of every rejected
  // cube are probed and an accepting grandchild raises an error naming both
  // cubes; an accepted cube whose children are all rejected is an error too.
  static OccupancyTree from_oracle(int d, int n_max,
                                   const std::function<bool(const DyadicCube&)>& oracle,
                                   const OracleOptions& opts = {});

  // The whole cube [0,1)^d down to n_max (one node per level).
  static OccupancyTree full(int d, int n_max);

  // Deserializer entry: per-level sorted codes, child masks recomputed and
  // validated against the stored branching counts by the caller.
  static OccupancyTree from_level_codes(int d, int n_max,
                                        const std::vector<std::vector<std::uint64_t>>& codes);

  // Memoized top-down construction from a finite-state subdivision machine.
  // M needs: state_type, initial(), key(state) -> uint64_t, and
  // step(state, slot, level, &out) -> bool (false = child unoccupied).
  template <class M>
  static OccupancyTree from_state_machine(int d, int n_max, const M& machine) {
    OccupancyTree t;
    t.init(d, n_max);
    std::vector<std::unordered_map<std::uint64_t, std::uint32_t>> memo(n_max + 1);
    t.levels_[n_max].push_back(Node{0, 0, 0});  // shared terminal node

    struct Rec {
      OccupancyTree& t;
      const M& m;
      std::vector<std::unordered_map<std::uint64_t, std::uint32_t>>& memo;
      std::uint32_t operator()(const typename M::state_type& s, int level) {
        if (level == t.n_max_) return 0;
        // Recursion only ever descends, so a plain lookup-then-insert is safe.
        if (auto it = memo[level].find(m.key(s)); it != memo[level].end()) return it->second;
        std::uint64_t mask = 0;
        std::vector<std::uint32_t> kids;
        for (unsigned slot = 0; slot < (1u << t.d_); ++slot) {
          typename M::state_type next;
          if (!m.step(s, slot, level, &next)) continue;
          mask |= std::uint64_t{1} << slot;
          kids.push_back((*this)(next, level + 1));
        }
        if (mask == 0)
          throw input_error("state machine dead-ends at level " + std::to_string(level));
        const std::uint32_t id = t.intern(level, mask, kids);
        memo[level].emplace(m.key(s), id);
        return id;
      }
    } rec{t, machine, memo};

    rec(machine.initial(), 0);
    t.finalize();
    return t;
  }

  // ---- structure access (node ids are per-level) ----

  std::size_t node_count(int level) const { return levels_[level].size(); }
  const Node& node(int level, std::uint32_t id) const { return levels_[level][id]; }
  std::span<const std::uint32_t> children(int level, std::uint32_t id) const {
    const Node& n = levels_[level][id];
    return {child_ids_[level].data() + n.first_child,
            static_cast<std::size_t>(branching(n.mask))};
  }
  static int branching(std::uint64_t mask) { return __builtin_popcountll(mask); }

  // ---- per-cube queries ----

  bool occupied(const DyadicCube& q) const;
  // Node ids along root..q (size q.level+1), or nullopt if q is unoccupied.
  std::optional<std::vector<std::uint32_t>> walk(const DyadicCube& q) const;
  // Number of occupied children b(q) in {1..2^d}; q must be occupied, level < n_max.
  int occupied_children_count(const DyadicCube& q) const;
  // Leftmost (smallest-code) occupied level-n_max descendant of q.
  DyadicCube first_leaf_under(const DyadicCube& q) const;

  // ---- aggregate queries ----

  // M_n: occupied cubes per level.
  const std::vector<std::uint64_t>& cube_counts() const { return cube_counts_; }
  // N_n: min over occupied level-n cubes of b(.), for n < n_max.
  std::uint64_t min_branching(int level) const;
  // Occupied level-b descendants per level-a node id.
  std::vector<std::uint64_t> descendant_counts(int a, int b) const;
  // descendant_counts(level, n_max) for every level at once.
  std::vector<std::vector<std::uint64_t>> leaf_counts() const;

  // Smallest-code level-`level` cube whose node id satisfies `target`.
  DyadicCube first_cube_where(int level, const std::vector<char>& target) const;

  // In-order (ascending code) visit of the occupied cubes of one level.
  void for_each_cube(int level,
                     const std::function<void(std::uint64_t code, std::uint32_t id)>& fn) const;
  std::vector<std::uint64_t> level_codes(int level) const;

  std::size_t total_nodes() const;

 private:
  void init(int d, int n_max);
  std::uint32_t intern(int level, std::uint64_t mask, const std::vector<std::uint32_t>& kids);
  void finalize();  // multiplicities, counts, invariant checks

  int d_ = 1;
  int n_max_ = 0;
  std::vector<std::vector<Node>> levels_;
  std::vector<std::vector<std::uint32_t>> child_ids_;
  std::vector<std::uint64_t> cube_counts_;
  std::vector<std::uint64_t> min_branching_;
  // Construction-time hash-cons buckets (hash -> candidate ids); cleared by finalize().
  std::vector<std::unordered_map<std::uint64_t, std::vector<std::uint32_t>>> cons_;

  friend bool equal_occupancy(const OccupancyTree&, const OccupancyTree&);
};

// Same occupied cubes, independent of construction route.
bool equal_occupancy(const OccupancyTree& a, const OccupancyTree& b);

}  // namespace frostman
