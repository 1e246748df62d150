#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "frostman/occupancy_tree.hpp"
#include "frostman/util.hpp"

namespace frostman {

// Set descriptions that can be realized as occupancy trees.  Realization is
// deterministic; per-variant exactness:
//  * PointCloud   exact (finite set, half-open cube assignment)
//  * Ifs          conservative superset: pieces refined until their diameter
//                 is < 2^-n_max, cube occupied iff it meets a piece.  Exact
//                 rational piece arithmetic when map data fits 64-bit
//                 rationals, long-double with a 2^-50 slack margin otherwise.
//  * DigitSet     exact for power-of-two bases (bit automaton); otherwise the
//                 same conservative interval scheme at digit depth B^-q < 2^-n_max
//  * SequenceSet  exact for integer p, floating-point floors otherwise
// The boundary point 1 (e.g. 1^-p, or the all-(B-1) digit tail) is assigned
// to the last cube [1-2^-n, 1).

struct PointCloudSpec {
  std::string path;
  bool normalize = false;
};

struct SimilarityMap {
  Frac ratio;                 // contraction in (0,1), same on every axis
  std::vector<Frac> offset;   // translation per axis; image must stay in [0,1]^d
  std::vector<bool> reflect;  // per-axis orientation flip (empty = none)
};

struct IfsSpec {
  std::vector<SimilarityMap> maps;
};

struct DigitSetSpec {
  long long base = 2;
  // Allowed digits per expansion position, cycled periodically.
  std::vector<std::vector<long long>> pattern;
};

struct SequenceSetSpec {
  double p = 1.0;  // {n^-p : n >= 1} together with 0, in dimension 1
};

using SetSpec = std::variant<PointCloudSpec, IfsSpec, DigitSetSpec, SequenceSetSpec>;

int spec_dim(const SetSpec& spec);

// Key/value spec-file grammar (one directive per line, '#' comments):
//   type points|ifs|digit|sequence
//   path <file>            normalize true|false        (points)
//   map ratio=1/3 offset=0[,..] [reflect=0,1]          (ifs, one per map)
//   base <B>               digits d1,d2,...            (digit, one line per
//                                                       pattern position)
//   p <value>                                          (sequence)
SetSpec parse_set_spec(std::istream& is, const std::string& origin);
SetSpec parse_set_spec_file(const std::string& path);

OccupancyTree realize(const SetSpec& spec, int n_max);

struct PointIngest {
  OccupancyTree tree;
  std::size_t point_count = 0;
  int dim = 0;
  bool normalized = false;
  // Applied transform x' = (x - offset) * scale (identity when !normalized).
  std::vector<double> offset, scale;
};

// Whitespace-separated coordinates, one point per line, '#' comments.
// Arity is inferred from the first point; errors carry line numbers.
// With normalize, the bounding box is mapped affinely into [0, 1-eps]^d,
// eps = 2^-(n_max+1); otherwise out-of-range coordinates are rejected.
PointIngest ingest_points(std::istream& is, int n_max, bool normalize,
                          const std::string& origin);
PointIngest ingest_points_file(const std::string& path, int n_max, bool normalize);

}  // namespace frostman
