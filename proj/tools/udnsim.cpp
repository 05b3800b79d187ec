// udnsim: train MADQN, run baselines/oracles and sweep scenarios to CSV.
#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "udn/config.hpp"
#include "udn/experiment.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct Common {
  std::string config_file;
  std::string out_dir = "out";
  std::map<std::string, std::string> overrides;
  std::int64_t seed = -1;
  int drops = -1;
  bool fast = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_file, "flat key=value configuration file");
  cmd->add_option("--out", c.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--seed", c.seed, "master seed");
  cmd->add_option("--drops", c.drops, "number of random drops");
  cmd->add_flag("--fast", c.fast, "reduced profile: 10 drops, 100 episodes x 100 steps");
  for (const auto& field : udn::config_fields()) {
    if (field.name == "seed" || field.name == "drops") continue;
    std::string flag = "--" + field.name;
    for (auto& ch : flag)
      if (ch == '_') ch = '-';
    cmd->add_option_function<std::string>(
        flag, [&c, name = field.name](const std::string& v) { c.overrides[name] = v; }, field.help);
  }
}

udn::ExperimentConfig resolve(const Common& c) {
  udn::ExperimentConfig cfg;
  if (!c.config_file.empty()) cfg = udn::load_config(c.config_file);
  if (c.fast) cfg.apply_fast_profile();
  for (const auto& [key, value] : c.overrides) udn::set_config_value(cfg, key, value);
  if (c.seed >= 0) cfg.seed = static_cast<std::uint64_t>(c.seed);
  if (c.drops >= 0) cfg.drops = c.drops;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ultra-dense network association/allocation simulator"};
  app.require_subcommand(1);

  Common train_opts, sweep_opts, baseline_opts, oracle_opts;
  std::string checkpoint;

  auto* train = app.add_subcommand("train", "train MADQN on one scenario; writes trace.csv");
  add_common(train, train_opts);
  train->add_option("--checkpoint", checkpoint, "save drop-0 networks to this file");

  auto* sweep = app.add_subcommand("sweep", "run `methods` over the users x aps x (k,f) grid");
  add_common(sweep, sweep_opts);

  auto* baseline = app.add_subcommand("baseline", "Max-RSRP and random baselines over the sweep grid");
  add_common(baseline, baseline_opts);

  auto* oracle = app.add_subcommand("oracle", "exhaustive optimum on one (small) scenario");
  add_common(oracle, oracle_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  udn::ExperimentConfig cfg;
  try {
    if (*train) cfg = resolve(train_opts);
    if (*sweep) cfg = resolve(sweep_opts);
    if (*baseline) cfg = resolve(baseline_opts);
    if (*oracle) cfg = resolve(oracle_opts);
  } catch (const udn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (*train) {
      const udn::Scenario sc = udn::single_scenario(cfg);
      const udn::Method methods[] = {udn::Method::Madqn};
      std::vector<udn::QNetwork> nets;
      auto rec = udn::run_experiment(cfg, std::span(&sc, 1), methods, true,
                                     checkpoint.empty() ? nullptr : &nets);
      udn::write_outputs(train_opts.out_dir, rec);
      if (!checkpoint.empty()) udn::save_networks(checkpoint, nets);
    } else if (*sweep) {
      const auto grid = udn::sweep_scenarios(cfg);
      udn::write_outputs(sweep_opts.out_dir, udn::run_experiment(cfg, grid, cfg.methods));
    } else if (*baseline) {
      const auto grid = udn::sweep_scenarios(cfg);
      const udn::Method methods[] = {udn::Method::MaxRsrp, udn::Method::Random};
      udn::write_outputs(baseline_opts.out_dir, udn::run_experiment(cfg, grid, methods));
    } else if (*oracle) {
      const udn::Scenario sc = udn::single_scenario(cfg);
      const udn::Method methods[] = {udn::Method::BruteForce};
      udn::write_outputs(oracle_opts.out_dir, udn::run_experiment(cfg, std::span(&sc, 1), methods));
    }
  } catch (const udn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
