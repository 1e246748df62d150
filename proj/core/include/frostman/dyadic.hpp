#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "frostman/errors.hpp"

namespace frostman {

// Half-open dyadic cubes in [0,1)^d.  A cube at level n has side 2^-n and is
// identified by the bit-interleaved (Morton/Z-order) code of its integer
// corner: bit p of coordinate k_i sits at code bit p*d + i.  Parent/child
// moves are then plain shifts, and sorting codes sorts cubes in Z-order.
//
// Codes are kept in a u64, which bounds d * level <= 63.

inline constexpr int kMaxDim = 6;
inline constexpr int kMaxCodeBits = 63;

struct DyadicCube {
  int level = 0;
  std::uint64_t code = 0;

  friend bool operator==(const DyadicCube&, const DyadicCube&) = default;
};

inline void check_dim(int d) {
  if (d < 1 || d > kMaxDim)
    throw input_error("dimension must be in [1," + std::to_string(kMaxDim) +
                      "], got " + std::to_string(d));
}

inline void check_depth(int d, int level) {
  check_dim(d);
  if (level < 0 || d * level > kMaxCodeBits)
    throw input_error("level " + std::to_string(level) + " out of range for d=" +
                      std::to_string(d) + " (need 0 <= d*level <= 63)");
}

// Interleave d coordinates (each < 2^level) into a Z-order code.
inline std::uint64_t interleave(const std::vector<std::uint64_t>& coords, int level) {
  const int d = static_cast<int>(coords.size());
  check_depth(d, level);
  std::uint64_t code = 0;
  for (int i = 0; i < d; ++i) {
    if (level < 64 && coords[i] >> level)
      throw input_error("coordinate index " + std::to_string(coords[i]) +
                        " does not fit level " + std::to_string(level));
    for (int p = 0; p < level; ++p)
      code |= ((coords[i] >> p) & 1u) << (p * d + i);
  }
  return code;
}

inline std::vector<std::uint64_t> deinterleave(std::uint64_t code, int d, int level) {
  check_depth(d, level);
  std::vector<std::uint64_t> coords(d, 0);
  for (int i = 0; i < d; ++i)
    for (int p = 0; p < level; ++p)
      coords[i] |= ((code >> (p * d + i)) & 1u) << p;
  return coords;
}

inline DyadicCube parent(const DyadicCube& q, int d) {
  if (q.level == 0) throw input_error("the root cube has no parent");
  return {q.level - 1, q.code >> d};
}

// Ancestor at a coarser level (ancestor_at(q, d, q.level) == q).
inline DyadicCube ancestor_at(const DyadicCube& q, int d, int level) {
  if (level < 0 || level > q.level)
    throw input_error("ancestor level must be in [0, cube level]");
  return {level, q.code >> (d * (q.level - level))};
}

// slot enumerates the 2^d children in Z-order.
inline DyadicCube child(const DyadicCube& q, int d, unsigned slot) {
  check_depth(d, q.level + 1);
  if (slot >= (1u << d)) throw input_error("child slot out of range");
  return {q.level + 1, (q.code << d) | slot};
}

// Child slot of q within its parent.
inline unsigned child_slot(const DyadicCube& q, int d) {
  return static_cast<unsigned>(q.code & ((std::uint64_t{1} << d) - 1));
}

inline double side_length(int level) { return std::ldexp(1.0, -level); }

// Exact cube diameter sqrt(d) * 2^-level.  All level <-> scale conversions
// carry this sqrt(d) factor explicitly.
inline double diameter(int d, int level) {
  return std::sqrt(static_cast<double>(d)) * side_length(level);
}

// Lower corner in [0,1)^d.
inline std::vector<double> lower_corner(const DyadicCube& q, int d) {
  auto ks = deinterleave(q.code, d, q.level);
  std::vector<double> x(d);
  for (int i = 0; i < d; ++i) x[i] = std::ldexp(static_cast<double>(ks[i]), -q.level);
  return x;
}

inline std::vector<double> center(const DyadicCube& q, int d) {
  auto x = lower_corner(q, d);
  const double h = std::ldexp(1.0, -q.level - 1);
  for (double& xi : x) xi += h;
  return x;
}

// The unique level-n cube containing x.  A point whose coordinate is exactly
// k*2^-n belongs to the cube starting there (half-open convention).
inline DyadicCube containing_cube(const std::vector<double>& x, int level) {
  const int d = static_cast<int>(x.size());
  check_depth(d, level);
  std::vector<std::uint64_t> ks(d);
  for (int i = 0; i < d; ++i) {
    if (!(x[i] >= 0.0 && x[i] < 1.0))
      throw input_error("point coordinate " + std::to_string(x[i]) + " outside [0,1)");
    ks[i] = static_cast<std::uint64_t>(std::floor(std::ldexp(x[i], level)));
    const std::uint64_t top = std::uint64_t{1} << level;
    if (ks[i] >= top) ks[i] = top - 1;  // guard against rounding at the upper edge
  }
  return {level, interleave(ks, level)};
}

}  // namespace frostman
