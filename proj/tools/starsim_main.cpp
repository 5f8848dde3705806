// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: outage / scaling / pattern / validate.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "starsim/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"STAR surface link-level simulator and analytical toolkit"};
  app.set_version_flag("--version", std::string(starsim::cli::kVersion));
  app.require_subcommand(1);

  starsim::cli::RunOptions opts;
  std::string primary_user;
  std::string nu_rule;
  double t_group_fraction = -1.0;
  double beta_r = -1.0;
  long trials = -1;
  long long seed = -1;
  int workers = -1;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", opts.config_path, "Config file (defaults when omitted)");
    sub->add_option("-o,--out", opts.output_dir, "Output directory")->capture_default_str();
    sub->add_option("--set", opts.overrides, "Override a config key: section.key=value");
    sub->add_option("--strategy", opts.strategies,
                    "Strategy to run (repeatable): ps dp tr random independent");
    sub->add_option("--primary", primary_user, "Primary user for the ps strategy: T or R");
    sub->add_option("--nu-rule", nu_rule, "Auxiliary-bit rule for ps: literal or closest");
    sub->add_option("--t-group-fraction", t_group_fraction,
                    "Fraction of elements in the transmit group (tr)");
    sub->add_option("--beta-r", beta_r, "Common reflection amplitude");
    sub->add_option("--trials", trials, "Monte Carlo trials per sweep point");
    sub->add_option("--seed", seed, "Master seed");
    sub->add_option("--workers", workers, "Worker threads (0 = hardware)");
  };

  CLI::App* outage = app.add_subcommand("outage", "Outage probability vs transmit SNR");
  CLI::App* scaling = app.add_subcommand("scaling", "Received power vs element count");
  CLI::App* pattern = app.add_subcommand("pattern", "Radiation pattern over azimuth");
  CLI::App* validate = app.add_subcommand("validate", "Analytic consistency self-checks");
  for (CLI::App* sub : {outage, scaling, pattern, validate}) add_common(sub);
  pattern->add_flag("--dump-coefficients", opts.dump_coefficients,
                    "Also write per-element coefficient CSVs");
  pattern->add_option("--fading-average", opts.fading_average,
                      "Average pattern power over N fading draws (0 = pure LoS)");

  CLI11_PARSE(app, argc, argv);

  opts.subcommand = app.get_subcommands().front()->get_name();
  if (!primary_user.empty()) opts.overrides.push_back("surface.primary_user=" + primary_user);
  if (!nu_rule.empty()) opts.overrides.push_back("surface.nu_rule=" + nu_rule);
  if (t_group_fraction >= 0.0) {
    opts.overrides.push_back("surface.t_group_fraction=" + std::to_string(t_group_fraction));
  }
  if (beta_r >= 0.0) opts.overrides.push_back("surface.beta_r=" + std::to_string(beta_r));
  if (trials >= 0) opts.overrides.push_back("sim.trials=" + std::to_string(trials));
  if (seed >= 0) opts.overrides.push_back("sim.seed=" + std::to_string(seed));
  if (workers >= 0) opts.overrides.push_back("sim.workers=" + std::to_string(workers));

  return starsim::cli::run(opts, std::cout, std::cerr);
}
