#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>
#include <frostman/errors.hpp>

#include "cli.hpp"

int main(int argc, char** argv) {
  frostman::cli::RunConfig config;
  std::string theta_text, delta_text;

  CLI::App app{"dimension estimation and Frostman-measure toolkit for dyadic occupancy trees"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--input", config.input, "set spec, point file, or .dyot tree; for verify, a construct output directory")
        ->required();
    cmd->add_option("--output-dir", config.output_dir, "directory for report files (default .)");
    cmd->add_option("--n-max", config.n_max, "tree depth when realizing a spec or point input");
    cmd->add_option("--theta", theta_text, "comma list of theta values in (0,1]");
    cmd->add_option("--delta", delta_text, "scale value or halving grid first..last (2^-k accepted)");
    cmd->add_option("--s", config.s, "fine-regime Frostman exponent");
    cmd->add_option("--t", config.t, "mid-regime Frostman exponent (cap 2^{-jt})");
    cmd->add_option("--burn-in", config.burn_in, "coarse levels skipped by estimators (default 4)");
    cmd->add_option("--samples", config.samples, "random ball centers per verification regime");
    cmd->add_option("--seed", config.seed, "RNG seed for sampling");
    cmd->add_option("--format", config.format, "report style")
        ->check(CLI::IsMember({"text", "table"}));
    return cmd;
  };

  add_common(app.add_subcommand("ingest", "realize a set and write tree.dyot plus level counts"));
  auto* estimate =
      add_common(app.add_subcommand("estimate", "run dimension estimators on a set or tree"));
  estimate->add_flag("--all", config.want_all, "every estimator (default when none selected)");
  estimate->add_flag("--dyadic", config.want_dyadic, "min-branching dimension with trace");
  estimate->add_flag("--box", config.want_box, "log-log box-counting fit");
  estimate->add_flag("--lower", config.want_lower, "lower-dimension window scan");
  estimate->add_flag("--intermediate", config.want_intermediate, "theta-spectrum profile");
  add_common(app.add_subcommand("construct", "build a (delta,s,t)-Frostman measure and cover"));
  add_common(app.add_subcommand("verify", "check ball-mass decay of a stored measure"));
  add_common(app.add_subcommand("profile", "s*(delta,theta) table over theta/delta grids"));
  add_common(app.add_subcommand("stability", "sweep a delta grid and track decay constants"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    config.command = app.get_subcommands().front()->get_name();
    if (!theta_text.empty()) config.thetas = frostman::cli::parse_theta_list(theta_text);
    if (!delta_text.empty()) config.deltas = frostman::cli::parse_scale_list(delta_text);
    frostman::cli::run(config);
    return 0;
  } catch (const frostman::infeasible_error& e) {
    std::fprintf(stderr, "error (infeasible): %s\n", e.what());
    return 3;
  } catch (const frostman::input_error& e) {
    std::fprintf(stderr, "error (input): %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
