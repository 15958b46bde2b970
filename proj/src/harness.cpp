#include "inqlab/harness.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <omp.h>

#include "inqlab/errors.hpp"
#include "inqlab/plot.hpp"

namespace inqlab {
namespace {

int thread_cap() {
  if (const char* env = std::getenv("INQLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

std::size_t choose_truth(const ExperimentConfig& config, const ExperimentSetup& setup,
                         std::size_t run_index) {
  if (!config.resample_truth) return setup.true_index;
  Rng rng(split_seed(config.seed, run_index, "truth"));
  return sample_index(setup.cls->prior(), rng);
}

std::string run_context(const ExperimentConfig& config, std::size_t run_index) {
  return fmt::format("run {} (master seed {}, run seed {})", run_index, config.seed,
                     run_seed(config.seed, run_index));
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t run_index) {
  return split_seed(master_seed, run_index, "run");
}

RunResult run_episode(const ExperimentConfig& config, const ExperimentSetup& setup,
                      std::size_t run_index) {
  RunResult result;
  result.run_id = run_index;
  result.seed = run_seed(config.seed, run_index);
  result.true_index = choose_truth(config, setup, run_index);
  result.steps.reserve(config.steps);

  const EnvironmentClass& cls = *setup.cls;
  const Environment& truth = cls.member(result.true_index);
  const Alphabets& alphabets = cls.alphabets();
  auto agent = make_agent(config.agent, setup.cls, result.seed);
  Rng env_rng(split_seed(config.seed, run_index, "environment"));
  StateId env_state = truth.initial_state();
  std::vector<double> dist(alphabets.num_percepts());

  try {
    for (std::size_t t = 1; t <= config.steps; ++t) {
      const Decision d = agent->act();
      truth.percept_distribution(env_state, d.action, dist);
      const auto percept = static_cast<PerceptId>(sample_index(dist, env_rng));
      env_state = truth.transition(env_state, d.action, percept);
      agent->observe(d.action, percept);

      StepRecord rec;
      rec.t = t;
      rec.action = d.action;
      rec.observation = alphabets.observation_of(percept);
      rec.reward = alphabets.percept_reward(percept);
      rec.explored = d.explored;
      rec.m = d.m;
      rec.k = d.k;
      rec.provenance = d.provenance;
      rec.beta = d.beta;
      rec.rho_max = d.rho_max;
      rec.w_true = agent->belief().weight(result.true_index);
      rec.pred_error = config.pred_error_m == 0
                           ? std::numeric_limits<double>::quiet_NaN()
                           : prediction_error(cls, agent->belief(), agent->class_state(),
                                              result.true_index, config.pred_error_m);
      result.steps.push_back(std::move(rec));
    }
  } catch (const ImpossibleObservation& e) {
    throw ImpossibleObservation(run_context(config, run_index) + ": " + e.what());
  }
  return result;
}

std::vector<RunResult> run_batch(const ExperimentConfig& config, const ExperimentSetup& setup,
                                 std::span<const std::size_t> run_indices, Execution execution) {
  const auto n = static_cast<std::ptrdiff_t>(run_indices.size());
  std::vector<RunResult> results(run_indices.size());
  std::vector<std::exception_ptr> errors(run_indices.size());

  const auto one = [&](std::ptrdiff_t i) {
    try {
      results[i] = run_episode(config, setup, run_indices[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_cap())
    for (std::ptrdiff_t i = 0; i < n; ++i) one(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) one(i);
  }

  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const ImpossibleObservation&) {
      throw;
    } catch (const std::exception& e) {
      throw std::runtime_error(run_context(config, run_indices[i]) + ": " + e.what());
    }
  }
  return results;
}

MetricsSeries aggregate(std::span<const RunResult> runs) {
  MetricsSeries m;
  m.runs = runs.size();
  if (runs.empty()) return m;
  const std::size_t steps = runs.front().steps.size();
  for (const auto& r : runs)
    if (r.steps.size() != steps) throw ConsistencyError("runs of different lengths");

  const double n = static_cast<double>(runs.size());
  std::vector<double> cum(runs.size(), 0.0);
  std::vector<double> avg(runs.size(), 0.0);
  for (std::size_t s = 0; s < steps; ++s) {
    double reward = 0.0, beta = 0.0, w = 0.0, pe = 0.0, mean_avg = 0.0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const StepRecord& rec = runs[i].steps[s];
      cum[i] += rec.reward;
      avg[i] = cum[i] / static_cast<double>(rec.t);
      reward += rec.reward;
      beta += rec.beta;
      w += rec.w_true;
      pe += rec.pred_error;
      mean_avg += avg[i];
    }
    mean_avg /= n;
    double var = 0.0;
    for (double a : avg) var += (a - mean_avg) * (a - mean_avg);
    m.mean_reward.push_back(reward / n);
    m.mean_cum_avg_reward.push_back(mean_avg);
    m.sd_cum_avg_reward.push_back(runs.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0);
    m.beta.push_back(beta / n);
    m.w_true.push_back(w / n);
    m.pred_error.push_back(pe / n);
  }
  return m;
}

void write_trajectory_csv(std::ostream& out, std::span<const RunResult> runs) {
  fmt::print(out, "run_id,t,action_idx,obs_idx,reward,explored_flag,m,k,provenance,beta,rho_max\n");
  for (const auto& r : runs)
    for (const auto& s : r.steps)
      fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{}\n", r.run_id, s.t, s.action,
                 s.observation, s.reward, s.explored ? 1 : 0, s.m, s.k, s.provenance, s.beta,
                 s.rho_max);
}

void write_diagnostics_csv(std::ostream& out, std::span<const RunResult> runs) {
  fmt::print(out, "run_id,t,w_true,beta,pred_error_m\n");
  for (const auto& r : runs)
    for (const auto& s : r.steps)
      fmt::print(out, "{},{},{},{},{}\n", r.run_id, s.t, s.w_true, s.beta, s.pred_error);
}

void write_metrics_csv(std::ostream& out, const MetricsSeries& m) {
  fmt::print(out, "t,mean_reward,mean_cum_avg_reward,sd_cum_avg_reward,beta,w_true,pred_error\n");
  for (std::size_t i = 0; i < m.length(); ++i)
    fmt::print(out, "{},{},{},{},{},{},{}\n", i + 1, m.mean_reward[i], m.mean_cum_avg_reward[i],
               m.sd_cum_avg_reward[i], m.beta[i], m.w_true[i], m.pred_error[i]);
}

ExperimentResult run_experiment(const ExperimentConfig& config, Execution execution) {
  config.validate();
  const ExperimentSetup setup = make_setup(config.environment);
  std::vector<std::size_t> indices(config.runs);
  std::iota(indices.begin(), indices.end(), 0);

  ExperimentResult result;
  result.runs = run_batch(config, setup, indices, execution);
  result.metrics = aggregate(result.runs);

  ensure_dir(config.out);
  const std::filesystem::path dir(config.out);
  {
    auto out = open_out(dir / "trajectory.csv");
    write_trajectory_csv(out, result.runs);
  }
  {
    auto out = open_out(dir / "diagnostics.csv");
    write_diagnostics_csv(out, result.runs);
  }
  {
    auto out = open_out(dir / "metrics.csv");
    write_metrics_csv(out, result.metrics);
  }
  Curve curve{to_string(config.agent.kind), {}, result.metrics.mean_cum_avg_reward};
  for (std::size_t i = 1; i <= result.metrics.length(); ++i)
    curve.t.push_back(static_cast<double>(i));
  save_reward_svg((dir / "reward_curve.svg").string(), {curve});
  return result;
}

std::vector<ExperimentResult> run_sweep(const ExperimentConfig& config,
                                        const std::vector<AgentKind>& agents,
                                        Execution execution) {
  if (agents.empty()) throw ConfigError("sweep needs at least one agent");
  std::vector<ExperimentResult> results;
  std::vector<Curve> curves;
  for (AgentKind kind : agents) {
    ExperimentConfig c = config;
    c.agent.kind = kind;
    c.out = (std::filesystem::path(config.out) / to_string(kind)).string();
    results.push_back(run_experiment(c, execution));
    Curve curve{to_string(kind), {}, results.back().metrics.mean_cum_avg_reward};
    for (std::size_t i = 1; i <= curve.value.size(); ++i) curve.t.push_back(static_cast<double>(i));
    curves.push_back(std::move(curve));
  }
  save_reward_svg((std::filesystem::path(config.out) / "reward_curve.svg").string(), curves);
  return results;
}

}  // namespace inqlab
