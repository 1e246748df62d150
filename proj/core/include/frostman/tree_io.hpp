#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "frostman/occupancy_tree.hpp"

namespace frostman {

// Binary occupancy-tree format:
//   magic "DYOT"
//   u16 version (LE)
//   u8 d, u8 n_max
//   per level n = 0..n_max:
//     u64 count (LE)
//     count x u64 cube codes (LE, ascending interleaved-bit order)
//     count x u8 occupied-children counts   (absent at level n_max)
//   u32 CRC32 (LE) over everything after the magic
// Load failures distinguish bad magic, unsupported version, truncation,
// checksum mismatch and structural inconsistencies.

inline constexpr std::uint16_t kTreeFormatVersion = 1;

void save_tree(const OccupancyTree& tree, std::ostream& os);
void save_tree_file(const OccupancyTree& tree, const std::string& path);

OccupancyTree load_tree(std::istream& is);
OccupancyTree load_tree_file(const std::string& path);

// CRC32 of the serialized payload (the bytes the trailing checksum covers)
// without materializing the stream; used to pin measure dumps to a tree.
std::uint32_t tree_payload_crc(const OccupancyTree& tree);

}  // namespace frostman
