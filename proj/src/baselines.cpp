#include "inqlab/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "inqlab/errors.hpp"

namespace inqlab {

void BaselineConfig::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in [0, 1)");
  if (!(epsilon_trunc > 0.0 && epsilon_trunc < 1.0))
    throw ConfigError("epsilon_trunc must lie in (0, 1)");
  if (ig_threshold && !(*ig_threshold > 0.0)) throw ConfigError("ig_threshold must be > 0");
  if (planner.samples < 1) throw ConfigError("planner samples must be at least 1");
  if (planner.horizon < 1) throw ConfigError("planner horizon must be at least 1");
}

std::size_t exploit_horizon(double gamma, double epsilon_trunc, const PlannerSettings& planner) {
  return std::min(effective_horizon(gamma, epsilon_trunc), planner.horizon);
}

namespace {

PlanResult plan_exploit(const Agent& agent, const BeliefState& model, const BaselineConfig& c,
                        std::uint64_t seed) {
  return plan_reward(agent.environment_class(), model, agent.class_state(), c.planner,
                     exploit_horizon(c.gamma, c.epsilon_trunc, c.planner), c.gamma, seed);
}

}  // namespace

ThompsonAgent::ThompsonAgent(std::shared_ptr<const EnvironmentClass> cls, BaselineConfig config)
    : Agent(std::move(cls), config.rng_seed), config_(config) {
  config_.validate();
  if (config_.resample_horizon == 0) config_.resample_horizon = config_.planner.horizon;
}

Decision ThompsonAgent::act() {
  if (!sample_ || held_ >= config_.resample_horizon) {
    sample_ = sample_index(belief().weights(), rng());
    model_ = BeliefState::point_mass(belief().size(), *sample_);
    held_ = 0;
  }
  ++held_;
  Decision d;
  d.action = plan_exploit(*this, *model_, config_, stream_seed("thompson")).action;
  d.provenance = "thompson(" + std::to_string(*sample_) + ")";
  return d;
}

BayesExpAgent::BayesExpAgent(std::shared_ptr<const EnvironmentClass> cls, BaselineConfig config)
    : Agent(std::move(cls), config.rng_seed), config_(config) {
  config_.validate();
}

double BayesExpAgent::threshold() const {
  if (config_.ig_threshold) return *config_.ig_threshold;
  return 1.0 / std::sqrt(static_cast<double>(time()));
}

Decision BayesExpAgent::act() {
  const std::size_t horizon = config_.planner.horizon;
  Decision d;
  if (burst_remaining_ > 0) {
    d.action = plan_information(environment_class(), belief(), class_state(), config_.planner,
                                burst_remaining_, stream_seed("ig", burst_remaining_))
                   .action;
    --burst_remaining_;
    d.provenance = "bayesexp(burst)";
    d.explored = true;
    return d;
  }
  if (!belief().is_point_mass()) {
    const PlanResult ig = plan_information(environment_class(), belief(), class_state(),
                                           config_.planner, horizon, stream_seed("ig", horizon));
    if (ig.value > threshold()) {
      burst_remaining_ = horizon - 1;
      d.action = ig.action;
      d.provenance = "bayesexp(burst)";
      d.explored = true;
      return d;
    }
  }
  d.action = plan_exploit(*this, belief(), config_, stream_seed("exploit")).action;
  d.provenance = "bayesexp(exploit)";
  return d;
}

GreedyAgent::GreedyAgent(std::shared_ptr<const EnvironmentClass> cls, BaselineConfig config)
    : Agent(std::move(cls), config.rng_seed), config_(config) {
  config_.validate();
}

Decision GreedyAgent::act() {
  Decision d;
  d.action = plan_exploit(*this, belief(), config_, stream_seed("exploit")).action;
  d.provenance = "greedy";
  return d;
}

std::unique_ptr<Agent> make_baseline(std::shared_ptr<const EnvironmentClass> cls,
                                     const BaselineConfig& config) {
  switch (config.kind) {
    case BaselineKind::Thompson:
      return std::make_unique<ThompsonAgent>(std::move(cls), config);
    case BaselineKind::BayesExp:
      return std::make_unique<BayesExpAgent>(std::move(cls), config);
    case BaselineKind::Greedy:
      return std::make_unique<GreedyAgent>(std::move(cls), config);
  }
  throw ConfigError("unknown baseline kind");
}

}  // namespace inqlab
