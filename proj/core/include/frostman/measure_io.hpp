#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "frostman/cascade.hpp"

namespace frostman {

// Measure file format ("DYFM", little-endian), mirroring the tree format
// with per-cube mass and flag fields:
//   magic "DYFM"; u16 version; u8 d; u8 n_max;
//   f64 theta, delta, s, t; u8 m, ell, level_top; u8 normalized;
//   f64 total mass T (pre-normalization);
//   u32 CRC32 of the paired tree's payload (binds measure to tree);
//   per level j = level_top..m:
//     u64 count; count x u64 cube codes (ascending);
//     count x f64 raw masses f_j; count x u8 flags (bit0 sat, bit1 trig);
//   trailing u32 CRC32 over all bytes after the magic.
//
// Loading re-runs the cascade on the supplied tree and requires bit-exact
// agreement with the stored tables, so a measure can never silently attach
// to the wrong tree or a drifted implementation.
inline constexpr std::uint16_t kMeasureFormatVersion = 1;

// Cubes stored across levels [level_top, m]; dumps above this size are
// refused (structured megatrees should be re-derived, not serialized).
inline constexpr std::uint64_t kMaxMeasureDumpCubes = std::uint64_t{1} << 26;

void save_measure(const CascadeMeasure& measure, std::ostream& os);
void save_measure_file(const CascadeMeasure& measure, const std::string& path);

// The returned measure holds a pointer to `tree`; keep the tree alive.
CascadeMeasure load_measure(std::istream& is, const OccupancyTree& tree);
CascadeMeasure load_measure_file(const std::string& path, const OccupancyTree& tree);

// Human-readable dump: parameter header, then per-level records
// "code f sat trig" for levels level_top..m.
void save_measure_text(const CascadeMeasure& measure, std::ostream& os);

}  // namespace frostman
