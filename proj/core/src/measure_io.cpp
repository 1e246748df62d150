#include "frostman/measure_io.hpp"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "frostman/tree_io.hpp"
#include "frostman/util.hpp"
#include "io_common.hpp"

namespace frostman {

namespace {

using detail::CrcSink;
using detail::Reader;

constexpr char kMagic[4] = {'D', 'Y', 'F', 'M'};

std::uint64_t dump_cube_count(const CascadeMeasure& m) {
  std::uint64_t total = 0;
  for (int j = m.params.level_top; j <= m.params.m; ++j)
    total += m.tree->cube_counts()[j];
  return total;
}

}  // namespace

void save_measure(const CascadeMeasure& measure, std::ostream& os) {
  const OccupancyTree& tree = *measure.tree;
  if (dump_cube_count(measure) > kMaxMeasureDumpCubes)
    throw infeasible_error("measure spans too many cubes to dump explicitly; "
                           "re-derive it from the tree instead");
  CrcSink sink(&os);
  sink.raw(kMagic, 4);
  sink.u16(kMeasureFormatVersion);
  sink.u8(static_cast<std::uint8_t>(tree.dim()));
  sink.u8(static_cast<std::uint8_t>(tree.depth()));
  sink.f64(measure.params.theta);
  sink.f64(measure.params.delta);
  sink.f64(measure.params.s);
  sink.f64(measure.params.t);
  sink.u8(static_cast<std::uint8_t>(measure.params.m));
  sink.u8(static_cast<std::uint8_t>(measure.params.ell));
  sink.u8(static_cast<std::uint8_t>(measure.params.level_top));
  sink.u8(measure.normalized ? 1 : 0);
  sink.f64(measure.total);
  sink.u32_payload(tree_payload_crc(tree));
  for (int j = measure.params.level_top; j <= measure.params.m; ++j) {
    sink.u64(tree.cube_counts()[j]);
    tree.for_each_cube(j, [&](std::uint64_t code, std::uint32_t) { sink.u64(code); });
    tree.for_each_cube(j, [&](std::uint64_t, std::uint32_t id) { sink.f64(measure.f[j][id]); });
    tree.for_each_cube(j, [&](std::uint64_t, std::uint32_t id) {
      sink.u8(static_cast<std::uint8_t>((measure.sat[j][id] ? 1 : 0) |
                                        (measure.trig[j][id] ? 2 : 0)));
    });
  }
  sink.u32_raw(sink.crc());
  if (!os) throw input_error("failed writing measure stream");
}

void save_measure_file(const CascadeMeasure& measure, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw input_error("cannot open for writing: " + path);
  save_measure(measure, f);
}

CascadeMeasure load_measure(std::istream& is, const OccupancyTree& tree) {
  char magic[4];
  is.read(magic, 4);
  if (is.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0)
    throw format_error(format_error::kind::bad_magic, "not a measure file (bad magic)");

  Reader r(is, "measure");
  const std::uint16_t version = r.u16();
  if (version != kMeasureFormatVersion)
    throw format_error(format_error::kind::bad_version,
                       "unsupported measure format version " + std::to_string(version));
  const int d = r.u8();
  const int depth = r.u8();
  const double theta = r.f64(), delta = r.f64(), s = r.f64(), t = r.f64();
  const int m = r.u8(), ell = r.u8(), level_top = r.u8();
  const bool normalized = r.u8() != 0;
  const double total = r.f64();
  const std::uint32_t tree_crc = r.u32_payload();

  if (d != tree.dim() || depth != tree.depth())
    throw format_error(format_error::kind::invalid_structure,
                       "measure dimensions d=" + std::to_string(d) + " depth=" +
                           std::to_string(depth) + " do not match the tree");
  if (tree_crc != tree_payload_crc(tree))
    throw format_error(format_error::kind::invalid_structure,
                       "measure was built for a different tree (tree checksum mismatch)");

  FrostmanParams params;
  try {
    params = derive_params(theta, delta, s, t, d, depth);
  } catch (const input_error& e) {
    throw format_error(format_error::kind::invalid_structure,
                       std::string("stored parameters are not derivable: ") + e.what());
  }
  if (params.m != m || params.ell != ell || params.level_top != level_top)
    throw format_error(format_error::kind::invalid_structure,
                       "stored scale levels disagree with re-derivation from parameters");

  // Recompute and require bit-exact agreement with the stored tables.
  CascadeMeasure measure = run_cascade(tree, params);
  auto bits = [](double v) {
    std::uint64_t b;
    std::memcpy(&b, &v, 8);
    return b;
  };
  if (bits(measure.total) != bits(total))
    throw format_error(format_error::kind::invalid_structure,
                       "stored total mass disagrees with recomputation");
  for (int j = level_top; j <= m; ++j) {
    const std::uint64_t count = r.u64();
    if (count != tree.cube_counts()[j])
      throw format_error(format_error::kind::invalid_structure,
                         "cube count mismatch at level " + std::to_string(j));
    std::vector<std::uint64_t> codes(count);
    for (auto& c : codes) c = r.u64();
    std::vector<double> masses(count);
    for (auto& v : masses) v = r.f64();
    std::vector<std::uint8_t> flags(count);
    r.payload(flags.data(), count);

    std::size_t i = 0;
    bool ok = true;
    tree.for_each_cube(j, [&](std::uint64_t code, std::uint32_t id) {
      const std::uint8_t expect = static_cast<std::uint8_t>(
          (measure.sat[j][id] ? 1 : 0) | (measure.trig[j][id] ? 2 : 0));
      if (codes[i] != code || bits(masses[i]) != bits(measure.f[j][id]) || flags[i] != expect)
        ok = false;
      ++i;
    });
    if (!ok)
      throw format_error(format_error::kind::invalid_structure,
                         "stored masses disagree with recomputation at level " +
                             std::to_string(j));
  }
  const std::uint32_t actual = r.crc();
  const std::uint32_t stored = r.u32_raw();
  if (actual != stored)
    throw format_error(format_error::kind::bad_checksum, "measure checksum mismatch");
  if (r.stream().peek() != std::char_traits<char>::eof())
    throw format_error(format_error::kind::invalid_structure, "trailing bytes after checksum");

  if (normalized) normalize(measure);
  return measure;
}

CascadeMeasure load_measure_file(const std::string& path, const OccupancyTree& tree) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw input_error("cannot open measure file: " + path);
  return load_measure(f, tree);
}

void save_measure_text(const CascadeMeasure& measure, std::ostream& os) {
  const OccupancyTree& tree = *measure.tree;
  if (dump_cube_count(measure) > kMaxMeasureDumpCubes)
    throw infeasible_error("measure spans too many cubes to dump explicitly; "
                           "re-derive it from the tree instead");
  os << "frostman measure dump\n";
  os << "dim " << tree.dim() << "\n";
  os << "depth " << tree.depth() << "\n";
  os << "theta " << fmt12(measure.params.theta) << "\n";
  os << "delta " << fmt12(measure.params.delta) << "\n";
  os << "s " << fmt12(measure.params.s) << "\n";
  os << "t " << fmt12(measure.params.t) << "\n";
  os << "level_base " << measure.params.m << "\n";
  os << "ell " << measure.params.ell << "\n";
  os << "level_top " << measure.params.level_top << "\n";
  os << "total_mass " << fmt12(measure.total) << "\n";
  os << "normalized " << (measure.normalized ? "true" : "false") << "\n";
  for (int j = measure.params.level_top; j <= measure.params.m; ++j) {
    os << "level " << j << " count " << tree.cube_counts()[j] << "\n";
    tree.for_each_cube(j, [&](std::uint64_t code, std::uint32_t id) {
      os << code << " " << fmt12(measure.f[j][id]) << " "
         << (measure.sat[j][id] ? 1 : 0) << " " << (measure.trig[j][id] ? 1 : 0) << "\n";
    });
  }
  if (!os) throw input_error("failed writing measure text dump");
}

}  // namespace frostman
