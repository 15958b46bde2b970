#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

#include "inqlab/belief.hpp"
#include "inqlab/environment.hpp"
#include "inqlab/rng.hpp"

namespace inqlab {

enum class PlannerKind { Exact, Mcts };

struct PlannerSettings {
  PlannerKind kind = PlannerKind::Mcts;
  std::size_t samples = 600;
  std::size_t horizon = 6;
  double exploration = std::numbers::sqrt2;
};

enum class ObjectiveKind { ExternalReward, InformationGain };

/// What to maximize and which generative model to sample. The model is the
/// agent's posterior (mixture) or, for Thompson sampling, a point mass on the
/// sampled member. Information gain is only meaningful under the mixture.
struct PlannerObjective {
  ObjectiveKind kind = ObjectiveKind::ExternalReward;
  const BeliefState* model = nullptr;
};

struct PlanResult {
  ActionId action = 0;
  /// External reward: normalized to [0,1] by the truncated discount sum.
  /// Information gain: expected nats over the horizon.
  double value = 0.0;
  std::vector<std::uint32_t> root_visits;
};

/// rhoUCT: `samples` simulations of UCB tree search with uniform-random
/// rollouts. Percepts are sampled from the objective's model, and the model's
/// posterior is conditioned along each simulated path. Information-gain
/// returns are undiscounted; external rewards are discounted by gamma.
PlanResult rho_uct(const EnvironmentClass& cls, const ClassState& state,
                   const PlannerObjective& objective, std::size_t samples, std::size_t horizon,
                   double gamma, Rng& rng, double exploration = std::numbers::sqrt2);

/// Exact finite-horizon expectimax against `model`. Ties go to the lowest
/// action index; the value is normalized by sum_{i<horizon} gamma^i.
PlanResult expectimax(const EnvironmentClass& cls, const BeliefState& model,
                      const ClassState& state, std::size_t horizon, double gamma);

/// Reward planning with the configured planner.
PlanResult plan_reward(const EnvironmentClass& cls, const BeliefState& model,
                       const ClassState& state, const PlannerSettings& settings,
                       std::size_t horizon, double gamma, std::uint64_t seed);

/// Best first action of a depth-`depth` information-gain expedition and its
/// value, with the configured planner.
PlanResult plan_information(const EnvironmentClass& cls, const BeliefState& belief,
                            const ClassState& state, const PlannerSettings& settings,
                            std::size_t depth, std::uint64_t seed);

}  // namespace inqlab
