#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <frostman/estimators.hpp>

namespace frostman::cli {

// One parsed invocation.  Every output file carries canonical_config() and its
// hash so reruns are diffable and reports are traceable to their parameters.
struct RunConfig {
  std::string command;
  std::string input;
  std::string output_dir = ".";
  int n_max = -1;  // required when the input is a set spec or point file
  std::vector<double> thetas;  // default {0.25, 0.5, 0.75, 1}
  std::vector<double> deltas;  // empty = per-theta fine-anchored default grid
  double s = -1;
  double t = -1;
  int burn_in = kDefaultBurnIn;
  int samples = 64;
  std::uint64_t seed = 0;
  std::string format = "text";  // "text" aligned columns, "table" TSV
  bool want_all = false;
  bool want_dyadic = false;
  bool want_box = false;
  bool want_lower = false;
  bool want_intermediate = false;
};

// "0.25", "2^-6", "2^-4.75" -> value; exponent form keeps grids exact.
double parse_scale_value(const std::string& text);

// Single value, or "first..last" halving grid (e.g. "2^-2..2^-8" -> 7 scales).
std::vector<double> parse_scale_list(const std::string& text);

std::vector<double> parse_theta_list(const std::string& text);

std::string canonical_config(const RunConfig& config);
std::uint64_t config_hash(const RunConfig& config);

// Dispatches config.command; throws input_error / infeasible_error for the
// caller to map onto exit codes.
void run(const RunConfig& config);

}  // namespace frostman::cli
