#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "inqlab/config.hpp"

namespace inqlab {

struct StepRecord {
  std::size_t t = 0;
  ActionId action = 0;
  ObservationId observation = 0;
  double reward = 0.0;
  bool explored = false;
  std::size_t m = 0;
  std::size_t k = 0;
  std::string provenance;
  double beta = 0.0;
  double rho_max = 0.0;
  /// Posterior weight of the true member after this step's update.
  double w_true = 0.0;
  /// NaN unless the prediction-error diagnostic is enabled.
  double pred_error = 0.0;
};

struct RunResult {
  std::size_t run_id = 0;
  std::uint64_t seed = 0;
  std::size_t true_index = 0;
  std::vector<StepRecord> steps;
};

/// Per-run seed: a split of the master seed by run index.
std::uint64_t run_seed(std::uint64_t master_seed, std::size_t run_index);

/// One simulated interaction of `config.steps` steps; deterministic given
/// (config.seed, run_index).
RunResult run_episode(const ExperimentConfig& config, const ExperimentSetup& setup,
                      std::size_t run_index);

enum class Execution { Parallel, Serial };

/// Runs with the given indices. The parallel path uses an OpenMP work pool
/// capped by INQLAB_THREADS; results are ordered by run index either way. A
/// failing run aborts the batch with its index and seed in the message.
std::vector<RunResult> run_batch(const ExperimentConfig& config, const ExperimentSetup& setup,
                                 std::span<const std::size_t> run_indices, Execution execution);

struct MetricsSeries {
  std::size_t runs = 0;
  std::vector<double> mean_reward;
  std::vector<double> mean_cum_avg_reward;
  /// Across-run sample standard deviation (0 for a single run).
  std::vector<double> sd_cum_avg_reward;
  std::vector<double> beta;
  std::vector<double> w_true;
  std::vector<double> pred_error;

  std::size_t length() const { return mean_reward.size(); }
};

MetricsSeries aggregate(std::span<const RunResult> runs);

void write_trajectory_csv(std::ostream& out, std::span<const RunResult> runs);
void write_diagnostics_csv(std::ostream& out, std::span<const RunResult> runs);
void write_metrics_csv(std::ostream& out, const MetricsSeries& metrics);

struct ExperimentResult {
  MetricsSeries metrics;
  std::vector<RunResult> runs;
};

/// All runs, aggregation, and trajectory.csv, diagnostics.csv, metrics.csv and
/// reward_curve.svg under `config.out`.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                Execution execution = Execution::Parallel);

/// One experiment per agent kind under out/<agent>/, plus a combined
/// reward_curve.svg in out/.
std::vector<ExperimentResult> run_sweep(const ExperimentConfig& config,
                                        const std::vector<AgentKind>& agents,
                                        Execution execution = Execution::Parallel);

}  // namespace inqlab
