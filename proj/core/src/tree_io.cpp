#include "frostman/tree_io.hpp"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include "frostman/errors.hpp"
#include "io_common.hpp"

namespace frostman {

namespace {

using detail::CrcSink;
using detail::Reader;

constexpr char kMagic[4] = {'D', 'Y', 'O', 'T'};

void write_tree(const OccupancyTree& tree, CrcSink& sink) {
  sink.raw(kMagic, 4);
  sink.u16(kTreeFormatVersion);
  sink.u8(static_cast<std::uint8_t>(tree.dim()));
  sink.u8(static_cast<std::uint8_t>(tree.depth()));
  for (int n = 0; n <= tree.depth(); ++n) {
    sink.u64(tree.cube_counts()[n]);
    tree.for_each_cube(n, [&](std::uint64_t code, std::uint32_t) { sink.u64(code); });
    if (n < tree.depth())
      tree.for_each_cube(n, [&](std::uint64_t, std::uint32_t id) {
        sink.u8(static_cast<std::uint8_t>(OccupancyTree::branching(tree.node(n, id).mask)));
      });
  }
}

}  // namespace

void save_tree(const OccupancyTree& tree, std::ostream& os) {
  CrcSink sink(&os);
  write_tree(tree, sink);
  sink.u32_raw(sink.crc());
  if (!os) throw input_error("failed writing tree stream");
}

void save_tree_file(const OccupancyTree& tree, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw input_error("cannot open for writing: " + path);
  save_tree(tree, f);
}

std::uint32_t tree_payload_crc(const OccupancyTree& tree) {
  CrcSink sink(nullptr);
  write_tree(tree, sink);
  return sink.crc();
}

OccupancyTree load_tree(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (is.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0)
    throw format_error(format_error::kind::bad_magic, "not a tree file (bad magic)");

  Reader r(is, "tree");
  const std::uint16_t version = r.u16();
  if (version != kTreeFormatVersion)
    throw format_error(format_error::kind::bad_version,
                       "unsupported tree format version " + std::to_string(version));
  const int d = r.u8();
  const int n_max = r.u8();
  if (d < 1 || d > kMaxDim || d * n_max > kMaxCodeBits)
    throw format_error(format_error::kind::invalid_structure,
                       "invalid dimensions d=" + std::to_string(d) +
                           " n_max=" + std::to_string(n_max));

  std::vector<std::vector<std::uint64_t>> codes(n_max + 1);
  std::vector<std::vector<std::uint8_t>> stored_b(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    const std::uint64_t count = r.u64();
    const std::uint64_t cap =
        (d * n <= 40) ? (std::uint64_t{1} << (d * n)) : (std::uint64_t{1} << 40);
    if (count == 0 || count > cap)
      throw format_error(format_error::kind::invalid_structure,
                         "implausible cube count at level " + std::to_string(n));
    codes[n].resize(count);
    for (auto& c : codes[n]) c = r.u64();
    if (n < n_max) {
      stored_b[n].resize(count);
      r.payload(stored_b[n].data(), count);
    }
  }
  const std::uint32_t actual = r.crc();
  const std::uint32_t stored = r.u32_raw();
  if (actual != stored)
    throw format_error(format_error::kind::bad_checksum, "tree checksum mismatch");
  if (r.stream().peek() != std::char_traits<char>::eof())
    throw format_error(format_error::kind::invalid_structure, "trailing bytes after checksum");

  OccupancyTree tree = [&] {
    try {
      return OccupancyTree::from_level_codes(d, n_max, codes);
    } catch (const format_error&) {
      throw;
    } catch (const input_error& e) {
      throw format_error(format_error::kind::invalid_structure, e.what());
    }
  }();

  // Cross-check the stored branching counts against the rebuilt structure.
  for (int n = 0; n < n_max; ++n) {
    std::size_t i = 0;
    bool ok = true;
    tree.for_each_cube(n, [&](std::uint64_t, std::uint32_t id) {
      if (stored_b[n][i++] !=
          static_cast<std::uint8_t>(OccupancyTree::branching(tree.node(n, id).mask)))
        ok = false;
    });
    if (!ok)
      throw format_error(format_error::kind::invalid_structure,
                         "stored children counts disagree with level " + std::to_string(n + 1));
  }
  return tree;
}

OccupancyTree load_tree_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw input_error("cannot open tree file: " + path);
  return load_tree(f);
}

}  // namespace frostman
