// compgap: command-line runner for the robustness experiments.
//
//   compgap <experiment> [--config FILE] [--seed N] [--trials N] [--out DIR]
//   compgap report [--out DIR]
//
// Exit codes: 0 success, 2 configuration error, 3 invariant violation.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "compgap/config.hpp"
#include "compgap/errors.hpp"
#include "compgap/experiments.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kInvariantViolation = 3;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::string> out;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config_path, "key = value configuration file");
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--trials", o.trials, "number of games, samples or draws");
  sub->add_option("--out", o.out, "output directory");
}

compgap::ExperimentConfig load(const Overrides& o, const std::string& experiment) {
  compgap::ExperimentConfig cfg;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path, std::ios::binary);
    if (!in) throw compgap::ConfigError("cannot read config file " + o.config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    cfg = compgap::parse_config(ss.str());
  }
  cfg.experiment = experiment;
  if (o.seed) cfg.seed = *o.seed;
  if (o.trials) cfg.trials = *o.trials;
  if (o.out) cfg.out = *o.out;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiments on computational vs. information-theoretic adversarial robustness"};
  app.require_subcommand(1);
  Overrides o;
  const char* experiments[] = {"risk", "adv-risk", "separation", "c3", "np-forge", "oracle-check"};
  for (const char* name : experiments) add_common(app.add_subcommand(name, std::string("run the ") + name + " experiment"), o);
  auto* report = app.add_subcommand("report", "print a summary table of <out>/results.csv");
  report->add_option("--out", o.out, "output directory");
  report->add_option("--config", o.config_path, "configuration file (for its out key)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (sub->get_name() == "report") {
      compgap::ExperimentConfig cfg = load(o, "separation");
      std::ifstream in(std::filesystem::path(cfg.out) / "results.csv");
      if (!in) throw compgap::ConfigError("no results.csv in " + cfg.out);
      std::cout << compgap::report_table(in);
      return 0;
    }
    compgap::ExperimentConfig cfg = load(o, sub->get_name());
    compgap::RunOutput out = compgap::run(cfg);
    compgap::write_outputs(out, cfg.out);
    std::cout << compgap::results_csv(out);
    return 0;
  } catch (const compgap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const compgap::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariantViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
