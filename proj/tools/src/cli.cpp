#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <frostman/cascade.hpp>
#include <frostman/errors.hpp>
#include <frostman/measure_io.hpp>
#include <frostman/set_models.hpp>
#include <frostman/tree_io.hpp>
#include <frostman/util.hpp>
#include <frostman/verify.hpp>

namespace frostman::cli {

namespace fs = std::filesystem;

double parse_scale_value(const std::string& text) {
  if (text.size() > 2 && text[0] == '2' && text[1] == '^') {
    double e = parse_number(text.substr(2));
    return std::exp2(e);
  }
  return parse_number(text);
}

std::vector<double> parse_scale_list(const std::string& text) {
  auto dots = text.find("..");
  if (dots == std::string::npos) return {parse_scale_value(text)};
  double first = parse_scale_value(text.substr(0, dots));
  double last = parse_scale_value(text.substr(dots + 2));
  if (!(first < 1.0) || !(last > 0.0) || !(first > last))
    throw input_error("scale grid needs 1 > first > last > 0, got \"" + text + "\"");
  std::vector<double> grid;
  for (double v = first; v >= last * (1.0 - 1e-9); v *= 0.5) grid.push_back(v);
  return grid;
}

std::vector<double> parse_theta_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    double v = parse_number(item);
    if (!(v > 0.0) || v > 1.0) throw input_error("theta must lie in (0,1], got " + item);
    out.push_back(v);
  }
  if (out.empty()) throw input_error("empty theta list");
  return out;
}

namespace {

std::string join12(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += fmt12(values[i]);
  }
  return out.empty() ? "-" : out;
}

std::string estimator_flags(const RunConfig& c) {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += ',';
    out += name;
  };
  add(c.want_all, "all");
  add(c.want_dyadic, "dyadic");
  add(c.want_box, "box");
  add(c.want_lower, "lower");
  add(c.want_intermediate, "intermediate");
  return out.empty() ? "default" : out;
}

}  // namespace

std::string canonical_config(const RunConfig& c) {
  std::ostringstream os;
  os << "command=" << c.command << " input=" << c.input << " n_max=" << c.n_max
     << " theta=" << join12(c.thetas) << " delta=" << join12(c.deltas) << " s=" << fmt12(c.s)
     << " t=" << fmt12(c.t) << " burn_in=" << c.burn_in << " samples=" << c.samples
     << " seed=" << c.seed << " format=" << c.format << " estimators=" << estimator_flags(c);
  return os.str();
}

std::uint64_t config_hash(const RunConfig& c) {
  std::string text = canonical_config(c);
  return fnv1a64(text);
}

namespace {

struct LoadedInput {
  OccupancyTree tree;
  std::string kind;  // "tree" | "spec" | "points"
  std::string note;
};

bool looks_like_spec(const std::string& path) {
  std::ifstream is(path);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    return line.compare(first, 4, "type") == 0;
  }
  return false;
}

LoadedInput load_input(const RunConfig& c) {
  std::ifstream probe(c.input, std::ios::binary);
  if (!probe) throw input_error("cannot open input: " + c.input);
  char magic[4] = {};
  probe.read(magic, 4);
  if (probe.gcount() == 4 && std::memcmp(magic, "DYOT", 4) == 0) {
    probe.close();
    return {load_tree_file(c.input), "tree", ""};
  }
  probe.close();
  if (c.n_max < 1) throw input_error("--n-max is required when the input is not a tree file");
  if (looks_like_spec(c.input)) {
    auto spec = parse_set_spec_file(c.input);
    return {realize(spec, c.n_max), "spec", ""};
  }
  auto pts = ingest_points_file(c.input, c.n_max, false);
  std::ostringstream note;
  note << "points " << pts.point_count;
  return {std::move(pts.tree), "points", note.str()};
}

void write_header(std::ostream& os, const RunConfig& c) {
  char hex[24];
  std::snprintf(hex, sizeof hex, "%016llx", (unsigned long long)config_hash(c));
  os << "# frostman " << c.command << "\n# config " << canonical_config(c)
     << "\n# config_hash " << hex << "\n";
}

std::ofstream open_report(const RunConfig& c, const std::string& name) {
  fs::create_directories(c.output_dir);
  fs::path path = fs::path(c.output_dir) / name;
  std::ofstream os(path, std::ios::binary);  // binary: identical bytes everywhere
  if (!os) throw input_error("cannot write " + path.string());
  write_header(os, c);
  return os;
}

// text format pads columns for reading; table format is plain TSV for plotting
void emit_table(std::ostream& os, const RunConfig& c, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
  if (c.format == "table") {
    os << '#';
    for (const auto& h : header) os << '\t' << h;
    os << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "\t" : "") << row[i];
      os << '\n';
    }
    return;
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  os << "# ";
  for (std::size_t i = 0; i < header.size(); ++i)
    os << (i ? "  " : "") << header[i] << std::string(width[i] - header[i].size(), ' ');
  os << '\n';
  for (const auto& row : rows) {
    os << "  ";
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "  " : "") << row[i] << std::string(width[i] - row[i].size(), ' ');
    os << '\n';
  }
}

std::vector<double> default_thetas(const RunConfig& c) {
  if (!c.thetas.empty()) return c.thetas;
  return {0.25, 0.5, 0.75, 1.0};
}

// Fine-anchored default: per theta, scales whose fine level lands on the top
// seven tree levels, so the DP always sees the deepest structure available.
std::vector<double> theta_delta_grid(const RunConfig& c, double theta, int depth) {
  if (!c.deltas.empty()) return c.deltas;
  std::vector<double> grid;
  for (int b = std::max(1, depth - 6); b <= depth; ++b) grid.push_back(std::exp2(-theta * b));
  return grid;  // coarse -> fine (delta decreasing)
}

struct ProfileSummary {
  double theta = 0;
  double lower_proxy = 0, upper_proxy = 0;
};

// Shared by `estimate --intermediate` and `profile`: evaluates s*(delta,theta)
// per grid pair and summarizes min/max over the finest half of each grid.
std::vector<ProfileSummary> emit_profile(std::ostream& os, const RunConfig& c,
                                         const OccupancyTree& tree) {
  std::vector<std::vector<std::string>> rows;
  std::vector<ProfileSummary> summaries;
  for (double theta : default_thetas(c)) {
    auto grid = theta_delta_grid(c, theta, tree.depth());
    std::sort(grid.begin(), grid.end(), std::greater<>());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::vector<double> values;
    for (double delta : grid) {
      auto at = intermediate_dim_at_scale(tree, theta, delta);
      values.push_back(at.s_star);
      rows.push_back({fmt12(theta), fmt12(delta), std::to_string(at.level_coarse),
                      std::to_string(at.level_fine), fmt12(at.s_star)});
    }
    std::size_t fine_from = values.size() / 2;
    auto [lo, hi] = std::minmax_element(values.begin() + fine_from, values.end());
    summaries.push_back({theta, *lo, *hi});
  }
  emit_table(os, c, {"theta", "delta", "coarse", "fine", "s_star"}, rows);
  os << "#\n";
  std::vector<std::vector<std::string>> sum_rows;
  for (const auto& s : summaries)
    sum_rows.push_back({fmt12(s.theta), fmt12(s.lower_proxy), fmt12(s.upper_proxy)});
  emit_table(os, c, {"theta", "lower_proxy", "upper_proxy"}, sum_rows);
  return summaries;
}

void cmd_ingest(const RunConfig& c) {
  auto in = load_input(c);
  fs::create_directories(c.output_dir);
  std::string tree_path = (fs::path(c.output_dir) / "tree.dyot").string();
  save_tree_file(in.tree, tree_path);

  auto counts = level_counts(in.tree);
  auto os = open_report(c, "levels.txt");
  os << "input_kind " << in.kind << "\n";
  if (!in.note.empty()) os << in.note << "\n";
  os << "dim " << counts.dim << "\ndepth " << counts.depth << "\n";
  std::vector<std::vector<std::string>> rows;
  for (int n = 0; n <= counts.depth; ++n)
    rows.push_back({std::to_string(n), std::to_string(counts.occupied[n]),
                    n < counts.depth ? std::to_string(counts.min_branching[n]) : "-"});
  emit_table(os, c, {"level", "occupied", "min_branching"}, rows);

  std::printf("wrote %s (d=%d depth=%d leaves=%llu nodes=%llu)\n", tree_path.c_str(), counts.dim,
              counts.depth, (unsigned long long)counts.occupied.back(),
              (unsigned long long)in.tree.total_nodes());
}

void cmd_estimate(const RunConfig& c) {
  auto in = load_input(c);
  const auto& tree = in.tree;
  auto counts = level_counts(tree);
  bool all = c.want_all ||
             (!c.want_dyadic && !c.want_box && !c.want_lower && !c.want_intermediate);

  double dyadic_value = -1, lower_value = -1, box_value = -1;
  if (all || c.want_dyadic) {
    auto dd = dyadic_dimension(counts, c.burn_in);
    dyadic_value = dd.value;
    auto os = open_report(c, "dyadic.txt");
    os << "value " << fmt12(dd.value) << "\nargmin_level " << dd.argmin_level << "\nburn_in "
       << dd.burn_in << "\n";
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < dd.trace.size(); ++i)
      rows.push_back({std::to_string(dd.burn_in + (int)i), fmt12(dd.trace[i])});
    emit_table(os, c, {"level", "log2_min_branching"}, rows);
  }
  if (all || c.want_box) {
    int lo = std::min(c.burn_in, std::max(0, counts.depth - 2));
    auto fit = box_dimension(counts, lo, counts.depth);
    box_value = fit.slope;
    auto os = open_report(c, "box.txt");
    os << "slope " << fmt12(fit.slope) << "\nintercept " << fmt12(fit.intercept)
       << "\nrms_residual " << fmt12(fit.rms_residual) << "\nfit_levels " << fit.level_lo << ".."
       << fit.level_hi << "\n";
  }
  if (all || c.want_lower) {
    std::vector<std::pair<int, int>> windows;
    for (int w : {4, 6, 8})
      for (int a = c.burn_in; a + w <= counts.depth; a += 2) windows.push_back({a, a + w});
    if (windows.empty() && counts.depth >= 2) windows.push_back({0, counts.depth});
    auto ld = lower_dimension(tree, windows);
    lower_value = ld.value;
    auto os = open_report(c, "lower.txt");
    os << "value " << fmt12(ld.value) << "\nwitness_level " << ld.witness.level
       << "\nwitness_code " << ld.witness.code << "\nbest_window " << ld.level_a << ".."
       << ld.level_b << "\n";
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : ld.rows)
      rows.push_back({std::to_string(r.level_a), std::to_string(r.level_b),
                      std::to_string(r.min_descendants), fmt12(r.slope)});
    emit_table(os, c, {"level_a", "level_b", "min_descendants", "slope"}, rows);
  }
  std::vector<ProfileSummary> profile;
  if (all || c.want_intermediate) {
    auto os = open_report(c, "profile.txt");
    profile = emit_profile(os, c, tree);
  }

  auto os = open_report(c, "estimate_summary.txt");
  os << "dim " << counts.dim << "\ndepth " << counts.depth << "\n";
  if (dyadic_value >= 0) os << "dyadic_dimension " << fmt12(dyadic_value) << "\n";
  if (lower_value >= 0) os << "lower_dimension " << fmt12(lower_value) << "\n";
  if (box_value >= 0) os << "box_dimension " << fmt12(box_value) << "\n";
  if (dyadic_value >= 0 && lower_value >= 0 && box_value >= 0) {
    bool ok = dyadic_value <= lower_value + 1e-9 && lower_value <= box_value + 1e-9;
    os << "chain_dyadic_le_lower_le_box " << (ok ? "ok" : "violated") << "\n";
  }
  for (const auto& p : profile)
    os << "intermediate theta=" << fmt12(p.theta) << " lower=" << fmt12(p.lower_proxy)
       << " upper=" << fmt12(p.upper_proxy) << "\n";

  std::printf("estimate: dyadic=%s lower=%s box=%s\n",
              dyadic_value >= 0 ? fmt12(dyadic_value).c_str() : "-",
              lower_value >= 0 ? fmt12(lower_value).c_str() : "-",
              box_value >= 0 ? fmt12(box_value).c_str() : "-");
  for (const auto& p : profile)
    std::printf("intermediate theta=%s: [%s, %s]\n", fmt12(p.theta).c_str(),
                fmt12(p.lower_proxy).c_str(), fmt12(p.upper_proxy).c_str());
}

void cmd_profile(const RunConfig& c) {
  auto in = load_input(c);
  auto os = open_report(c, "profile.txt");
  auto summaries = emit_profile(os, c, in.tree);
  for (const auto& p : summaries)
    std::printf("theta=%s: s* in [%s, %s]\n", fmt12(p.theta).c_str(),
                fmt12(p.lower_proxy).c_str(), fmt12(p.upper_proxy).c_str());
}

void require_construct_params(const RunConfig& c) {
  if (c.thetas.size() != 1) throw input_error("--theta must be a single value here");
  if (c.deltas.size() != 1) throw input_error("--delta must be a single value here");
  if (c.s <= 0) throw input_error("--s is required and must be positive");
  if (c.t <= 0) throw input_error("--t is required and must be positive");
}

void cmd_construct(const RunConfig& c) {
  require_construct_params(c);
  auto in = load_input(c);
  auto result = construct(in.tree, c.thetas[0], c.deltas[0], c.s, c.t);

  fs::create_directories(c.output_dir);
  save_tree_file(in.tree, (fs::path(c.output_dir) / "tree.dyot").string());
  save_measure_file(result.measure, (fs::path(c.output_dir) / "measure.dyfm").string());
  {
    std::ofstream ms((fs::path(c.output_dir) / "measure.txt").string(), std::ios::binary);
    write_header(ms, c);
    save_measure_text(result.measure, ms);
  }

  const auto& p = result.params;
  {
    auto os = open_report(c, "cover.txt");
    os << "cube_count " << result.cover.cube_count << "\ntotal_mass "
       << fmt12(result.cover.total_mass) << "\n";
    std::vector<std::vector<std::string>> rows;
    for (const auto& g : result.cover.groups)
      rows.push_back({std::to_string(g.level), std::to_string(g.count), fmt12(g.mass_each),
                      fmt12(g.diameter)});
    emit_table(os, c, {"level", "count", "mass_each", "diameter"}, rows);
    if (result.cover.cube_count <= 4096) {
      os << "#\n";
      std::vector<std::vector<std::string>> cubes;
      for_each_cover_cube(result.measure, [&](const DyadicCube& q, double mass) {
        cubes.push_back({std::to_string(q.level), std::to_string(q.code), fmt12(mass)});
        return true;
      });
      emit_table(os, c, {"level", "code", "mass"}, cubes);
    }
  }
  {
    auto os = open_report(c, "construct_report.txt");
    os << "theta " << fmt12(p.theta) << "\ndelta " << fmt12(p.delta) << "\ns " << fmt12(p.s)
       << "\nt " << fmt12(p.t) << "\nlevel_m " << p.m << "\nell " << p.ell << "\nlevel_top "
       << p.level_top << "\ntotal_mass " << fmt12(result.total_mass) << "\ncover_cubes "
       << result.cover.cube_count << "\nbranching_premise "
       << (result.branching.premise ? 1 : 0) << "\nbranching_holds "
       << (result.branching.holds ? 1 : 0) << "\nbranching_worst_margin "
       << fmt12(result.branching.worst_margin) << "\nbranching_worst_level "
       << result.branching.worst_level << "\n";
  }

  std::printf("construct: m=%d ell=%d T=%s cover_cubes=%llu premise=%d\n", p.m, p.ell,
              fmt12(result.total_mass).c_str(), (unsigned long long)result.cover.cube_count,
              result.branching.premise ? 1 : 0);
}

void emit_regime(std::ostream& os, const char* tag, const RegimeReport& r) {
  os << tag << "_samples " << r.samples << "\n"
     << tag << "_constant " << fmt12(r.constant) << "\n"
     << tag << "_r_lo " << fmt12(r.r_lo) << "\n"
     << tag << "_r_hi " << fmt12(r.r_hi) << "\n";
  if (r.samples) {
    os << tag << "_witness_x";
    for (double v : r.witness_x) os << ' ' << fmt12(v);
    os << "\n"
       << tag << "_witness_r " << fmt12(r.witness_r) << "\n"
       << tag << "_witness_mass " << fmt12(r.witness_mass) << "\n"
       << tag << "_witness_bound " << fmt12(r.witness_bound) << "\n";
  }
}

void cmd_verify(const RunConfig& c) {
  fs::path in(c.input);
  fs::path measure_path = fs::is_directory(in) ? in / "measure.dyfm" : in;
  fs::path tree_path = measure_path.parent_path() / "tree.dyot";
  if (!fs::exists(measure_path))
    throw input_error("no measure dump at " + measure_path.string());
  if (!fs::exists(tree_path))
    throw input_error("no tree file next to the measure: " + tree_path.string());

  auto tree = load_tree_file(tree_path.string());
  auto measure = load_measure_file(measure_path.string(), tree);

  SamplingSpec sampling;
  sampling.random_leaf_centers = c.samples;
  sampling.seed = c.seed;
  auto report = decay_report(measure, sampling);

  auto os = open_report(c, "verify_report.txt");
  const auto& p = report.params;
  os << "theta " << fmt12(p.theta) << "\ndelta " << fmt12(p.delta) << "\ns " << fmt12(p.s)
     << "\nt " << fmt12(p.t) << "\nlevel_m " << p.m << "\nell " << p.ell << "\ntotal_mass "
     << fmt12(report.total_mass) << "\n";
  emit_regime(os, "mid", report.mid);
  emit_regime(os, "fine", report.fine);

  std::printf("verify: mid_constant=%s (%zu samples) fine_constant=%s (%zu samples)\n",
              fmt12(report.mid.constant).c_str(), report.mid.samples,
              fmt12(report.fine.constant).c_str(), report.fine.samples);
}

void cmd_stability(const RunConfig& c) {
  if (c.thetas.size() != 1) throw input_error("--theta must be a single value here");
  if (c.s <= 0) throw input_error("--s is required and must be positive");
  if (c.t <= 0) throw input_error("--t is required and must be positive");
  auto in = load_input(c);
  std::vector<double> grid = c.deltas;
  if (grid.empty()) grid = parse_scale_list("2^-2..2^-8");

  SamplingSpec sampling;
  sampling.random_leaf_centers = c.samples;
  sampling.seed = c.seed;
  auto report = constant_stability(in.tree, c.thetas[0], c.s, c.t, grid, sampling);

  auto os = open_report(c, "stability_report.txt");
  os << "theta " << fmt12(report.theta) << "\ns " << fmt12(report.s) << "\nt "
     << fmt12(report.t) << "\n";
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : report.rows)
    rows.push_back({fmt12(r.delta), fmt12(r.total_mass), fmt12(r.mid_constant),
                    fmt12(r.fine_constant)});
  emit_table(os, c, {"delta", "total_mass", "mid_constant", "fine_constant"}, rows);
  os << "mid_ratio " << fmt12(report.mid_ratio) << "\nfine_ratio " << fmt12(report.fine_ratio)
     << "\nmid_trend " << fmt12(report.mid_trend) << "\nfine_trend "
     << fmt12(report.fine_trend) << "\nmass_ratio " << fmt12(report.mass_ratio)
     << "\nmass_premise_ok " << (report.mass_premise_ok ? 1 : 0) << "\n";

  std::printf("stability: mid_ratio=%s fine_ratio=%s mass_ratio=%s premise_ok=%d\n",
              fmt12(report.mid_ratio).c_str(), fmt12(report.fine_ratio).c_str(),
              fmt12(report.mass_ratio).c_str(), report.mass_premise_ok ? 1 : 0);
}

}  // namespace

void run(const RunConfig& c) {
  if (c.command == "ingest") return cmd_ingest(c);
  if (c.command == "estimate") return cmd_estimate(c);
  if (c.command == "construct") return cmd_construct(c);
  if (c.command == "verify") return cmd_verify(c);
  if (c.command == "profile") return cmd_profile(c);
  if (c.command == "stability") return cmd_stability(c);
  throw input_error("unknown command: " + c.command);
}

}  // namespace frostman::cli
