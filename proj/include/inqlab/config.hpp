#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "inqlab/baselines.hpp"
#include "inqlab/environment.hpp"
#include "inqlab/gridworld.hpp"
#include "inqlab/policy.hpp"

namespace inqlab {

enum class EnvironmentType { Gridworld, Bandit };

struct EnvironmentConfig {
  EnvironmentType type = EnvironmentType::Gridworld;
  /// Grid-world: the dispenser is the true environment's.
  GridWorldSpec grid;
  /// Bandit: one success-probability vector per class member.
  std::vector<std::vector<double>> arms;
  std::size_t true_index = 0;
};

enum class AgentKind { Inq, Thompson, BayesExp, Greedy };

AgentKind parse_agent_kind(const std::string& name);
std::string to_string(AgentKind kind);

struct AgentConfig {
  AgentKind kind = AgentKind::Inq;
  double eta = 1.0;
  double gamma = 0.99;
  /// 0 means the planner horizon.
  std::size_t m_max = 0;
  double epsilon_trunc = 0.05;
  PlannerSettings planner;
  std::size_t resample_horizon = 0;
  std::optional<double> ig_threshold;

  InqConfig inq_config(std::uint64_t seed) const;
  BaselineConfig baseline_config(std::uint64_t seed) const;
};

struct ExperimentConfig {
  EnvironmentConfig environment;
  AgentConfig agent;
  std::size_t runs = 20;
  std::size_t steps = 2000;
  std::uint64_t seed = 0;
  std::string out = "out";
  /// Draw the true environment from the prior per run instead of using the
  /// configured one.
  bool resample_truth = false;
  /// Depth of the logged prediction-error diagnostic; 0 disables it.
  std::size_t pred_error_m = 0;

  void validate() const;
};

ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig load_experiment_config(const std::string& path);

/// The hypothesis class and the designated true member.
struct ExperimentSetup {
  std::shared_ptr<const EnvironmentClass> cls;
  std::size_t true_index = 0;
};

ExperimentSetup make_setup(const EnvironmentConfig& env);

std::unique_ptr<Agent> make_agent(const AgentConfig& config,
                                  std::shared_ptr<const EnvironmentClass> cls,
                                  std::uint64_t seed);

}  // namespace inqlab
