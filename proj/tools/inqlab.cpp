// inqlab: run, sweep, verify and plot.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <boost/algorithm/string.hpp>
#include <fmt/format.h>

#include "CLI11.hpp"
#include "inqlab/config.hpp"
#include "inqlab/errors.hpp"
#include "inqlab/harness.hpp"
#include "inqlab/plot.hpp"
#include "inqlab/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kPropertyFailure = 1;
constexpr int kUsageError = 2;

struct Overrides {
  std::string config;
  std::optional<std::string> agent;
  std::optional<std::size_t> runs;
  std::optional<std::size_t> steps;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool full = false;
  bool resample_truth = false;
  bool serial = false;

  void attach(CLI::App& cmd, bool with_agent) {
    cmd.add_option("--config", config, "experiment config file")->required();
    if (with_agent) cmd.add_option("--agent", agent, "inq|thompson|bayesexp|greedy");
    cmd.add_option("--runs", runs, "number of runs");
    cmd.add_option("--steps", steps, "steps per run");
    cmd.add_option("--seed", seed, "master seed");
    cmd.add_option("--out", out, "output directory");
    cmd.add_flag("--full", full, "full operating point (50 runs)");
    cmd.add_flag("--resample-truth", resample_truth, "draw the true environment per run");
    cmd.add_flag("--serial", serial, "run without the thread pool");
  }

  inqlab::ExperimentConfig load() const {
    inqlab::ExperimentConfig c = inqlab::load_experiment_config(config);
    if (agent) c.agent.kind = inqlab::parse_agent_kind(*agent);
    if (full) c.runs = 50;
    if (runs) c.runs = *runs;
    if (steps) c.steps = *steps;
    if (seed) c.seed = *seed;
    if (out) c.out = *out;
    if (resample_truth) c.resample_truth = true;
    c.validate();
    return c;
  }

  inqlab::Execution execution() const {
    return serial ? inqlab::Execution::Serial : inqlab::Execution::Parallel;
  }
};

void summarize(const std::string& agent, const inqlab::ExperimentResult& r) {
  const auto& m = r.metrics;
  fmt::print("{}: runs={} steps={} final_mean_cum_avg_reward={:.4f} sd={:.4f}\n", agent, m.runs,
             m.length(), m.mean_cum_avg_reward.back(), m.sd_cum_avg_reward.back());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian exploration agents: experiments, property checks and plots"};
  app.require_subcommand(1);

  Overrides run_opts;
  auto* run = app.add_subcommand("run", "run one agent on a configured environment");
  run_opts.attach(*run, true);

  Overrides sweep_opts;
  std::string agents_list = "inq,thompson,bayesexp";
  auto* sweep = app.add_subcommand("sweep", "run several agents and plot them together");
  sweep_opts.attach(*sweep, false);
  sweep->add_option("--agents", agents_list, "comma-separated agent kinds");

  std::string suite;
  std::uint64_t verify_seed = 0;
  auto* verify = app.add_subcommand("verify", "run a property campaign");
  verify->add_option("suite", suite, "lemma1|martingale|dp-vs-bruteforce|rho-beta-bounds|"
                                     "planner-consistency|convergence")
      ->required();
  verify->add_option("--seed", verify_seed, "campaign seed");

  std::vector<std::string> plot_inputs;
  std::string plot_out = "reward_curve.svg";
  auto* plot = app.add_subcommand("plot", "plot metrics CSV files as reward curves");
  plot->add_option("csv", plot_inputs, "metrics.csv files")->required();
  plot->add_option("--out", plot_out, "output SVG");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*run) {
      const auto config = run_opts.load();
      const auto result = inqlab::run_experiment(config, run_opts.execution());
      summarize(inqlab::to_string(config.agent.kind), result);
      fmt::print("wrote {}\n", config.out);
      return kOk;
    }
    if (*sweep) {
      const auto config = sweep_opts.load();
      std::vector<std::string> names;
      boost::split(names, agents_list, boost::is_any_of(","));
      std::vector<inqlab::AgentKind> kinds;
      for (auto& n : names) kinds.push_back(inqlab::parse_agent_kind(boost::trim_copy(n)));
      const auto results = inqlab::run_sweep(config, kinds, sweep_opts.execution());
      for (std::size_t i = 0; i < kinds.size(); ++i)
        summarize(inqlab::to_string(kinds[i]), results[i]);
      fmt::print("wrote {}\n", config.out);
      return kOk;
    }
    if (*verify) {
      const auto report = inqlab::run_suite(suite, verify_seed);
      inqlab::print_report(std::cout, report);
      return report.passed() ? kOk : kPropertyFailure;
    }
    if (*plot) {
      std::vector<inqlab::Curve> curves;
      for (const auto& path : plot_inputs) curves.push_back(inqlab::load_metrics_curve(path));
      inqlab::save_reward_svg(plot_out, curves);
      fmt::print("wrote {}\n", plot_out);
      return kOk;
    }
  } catch (const inqlab::ConfigError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsageError;
  } catch (const inqlab::ParseError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kPropertyFailure;
  }
  return kUsageError;
}
