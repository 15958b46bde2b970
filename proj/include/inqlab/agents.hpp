#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inqlab/belief.hpp"
#include "inqlab/environment.hpp"
#include "inqlab/expedition.hpp"
#include "inqlab/history.hpp"
#include "inqlab/planner.hpp"
#include "inqlab/policy.hpp"
#include "inqlab/rng.hpp"

namespace inqlab {

struct Decision {
  ActionId action = 0;
  std::string provenance;
  bool explored = false;
  /// Expedition coordinates when an exploratory interval was hit.
  std::size_t m = 0;
  std::size_t k = 0;
  double beta = 0.0;
  double rho_max = 0.0;
};

/// Bayesian agent skeleton: owns the posterior, the class state and the
/// history. Subclasses decide; observe() does the exact update.
class Agent {
 public:
  Agent(std::shared_ptr<const EnvironmentClass> cls, std::uint64_t seed);
  virtual ~Agent() = default;

  virtual std::string name() const = 0;
  virtual Decision act() = 0;
  /// Throws ImpossibleObservation when the class gave the percept probability 0.
  void observe(ActionId action, PerceptId percept);

  /// The timestep of the next decision, starting at 1.
  std::size_t time() const { return history_.length() + 1; }
  const BeliefState& belief() const { return belief_; }
  const History& history() const { return history_; }
  const ClassState& class_state() const { return state_; }
  const EnvironmentClass& environment_class() const { return *cls_; }

 protected:
  /// Seed for a planner call at the current timestep.
  std::uint64_t stream_seed(std::string_view label, std::uint64_t extra = 0) const;
  Rng& rng() { return rng_; }

 private:
  std::shared_ptr<const EnvironmentClass> cls_;
  std::uint64_t seed_;
  Rng rng_;
  BeliefState belief_;
  ClassState state_;
  History history_;
};

/// Inq. With the exact planner it keeps an expedition registry and computes
/// expectimax exploitation; with the MCTS planner it follows the sampled
/// variant, using rhoUCT for both the exploit action and the expeditions.
class InqAgent final : public Agent {
 public:
  InqAgent(std::shared_ptr<const EnvironmentClass> cls, InqConfig config);

  std::string name() const override { return "inq"; }
  Decision act() override;

  const InqConfig& config() const { return config_; }
  /// Exact mode only.
  const ExpeditionRegistry& registry() const { return *registry_; }
  /// The distribution the last act() sampled from (exact mode only).
  const ActionDistribution& last_distribution() const { return last_distribution_; }

 private:
  Decision act_exact();
  Decision act_sampled();
  const PlanResult& information_plan(std::size_t depth);

  InqConfig config_;
  std::optional<ExpeditionRegistry> registry_;
  ActionDistribution last_distribution_;
  // Sampled mode: ig_values_[j][m-1] is V_m computed at time t - j.
  std::deque<std::vector<double>> ig_values_;
  std::vector<std::optional<PlanResult>> ig_plans_;
};

}  // namespace inqlab
