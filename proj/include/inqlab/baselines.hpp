#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "inqlab/agents.hpp"

namespace inqlab {

enum class BaselineKind { Thompson, BayesExp, Greedy };

struct BaselineConfig {
  BaselineKind kind = BaselineKind::Greedy;
  /// Thompson: steps a sampled member is kept. 0 means the planner horizon.
  std::size_t resample_horizon = 0;
  /// BayesExp: explore when the best IG value exceeds this. Unset means 1/sqrt(t).
  std::optional<double> ig_threshold;
  double gamma = 0.99;
  double epsilon_trunc = 0.05;
  std::uint64_t rng_seed = 0;
  PlannerSettings planner;

  void validate() const;
};

/// Reward planning horizon shared by every agent: the effective horizon capped
/// by the planner horizon.
std::size_t exploit_horizon(double gamma, double epsilon_trunc, const PlannerSettings& planner);

class ThompsonAgent final : public Agent {
 public:
  ThompsonAgent(std::shared_ptr<const EnvironmentClass> cls, BaselineConfig config);
  std::string name() const override { return "thompson"; }
  Decision act() override;
  /// The member currently planned against, if one has been drawn.
  std::optional<std::size_t> sampled_member() const { return sample_; }

 private:
  BaselineConfig config_;
  std::optional<std::size_t> sample_;
  std::optional<BeliefState> model_;
  std::size_t held_ = 0;
};

class BayesExpAgent final : public Agent {
 public:
  BayesExpAgent(std::shared_ptr<const EnvironmentClass> cls, BaselineConfig config);
  std::string name() const override { return "bayesexp"; }
  Decision act() override;
  std::size_t burst_remaining() const { return burst_remaining_; }

 private:
  double threshold() const;

  BaselineConfig config_;
  std::size_t burst_remaining_ = 0;
};

/// Bayes-optimal with respect to the mixture, no exploration.
class GreedyAgent final : public Agent {
 public:
  GreedyAgent(std::shared_ptr<const EnvironmentClass> cls, BaselineConfig config);
  std::string name() const override { return "greedy"; }
  Decision act() override;

 private:
  BaselineConfig config_;
};

std::unique_ptr<Agent> make_baseline(std::shared_ptr<const EnvironmentClass> cls,
                                     const BaselineConfig& config);

}  // namespace inqlab
