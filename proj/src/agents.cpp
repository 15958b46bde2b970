#include "inqlab/agents.hpp"

#include <algorithm>

#include "inqlab/errors.hpp"

namespace inqlab {

Agent::Agent(std::shared_ptr<const EnvironmentClass> cls, std::uint64_t seed)
    : cls_(std::move(cls)),
      seed_(seed),
      rng_(split_seed(seed, 0, "agent")),
      belief_(cls_->prior()),
      state_(cls_->initial_state()) {}

void Agent::observe(ActionId action, PerceptId percept) {
  belief_ = posterior_update(belief_, *cls_, state_, action, percept);
  cls_->advance(state_, action, percept);
  history_.append(make_timestep(action, percept, cls_->alphabets()));
}

std::uint64_t Agent::stream_seed(std::string_view label, std::uint64_t extra) const {
  return split_seed(seed_, time(), label, extra);
}

InqAgent::InqAgent(std::shared_ptr<const EnvironmentClass> cls, InqConfig config)
    : Agent(std::move(cls), config.rng_seed), config_(config) {
  config_.validate();
  if (config_.planner.kind == PlannerKind::Exact) registry_.emplace(config_.m_max);
}

Decision InqAgent::act() {
  return config_.planner.kind == PlannerKind::Exact ? act_exact() : act_sampled();
}

Decision InqAgent::act_exact() {
  const std::size_t t = time();
  const auto& cls = environment_class();
  registry_->step(cls, belief(), class_state(), t);
  const PlanResult exploit = exploit_action(cls, belief(), class_state(), config_.gamma,
                                            config_.epsilon_trunc, config_.planner.horizon);
  last_distribution_ =
      inq_action_distribution(*registry_, history(), cls.alphabets(), t, config_.eta,
                              exploit.action);

  Decision d;
  for (std::size_t m = 1; m <= config_.m_max; ++m)
    d.rho_max = std::max(d.rho_max, rho(*registry_, t, m, 0, config_.eta));
  d.beta = beta(*registry_, t, config_.m_max, config_.eta);
  const ActionChoice& choice = last_distribution_.select(uniform01(rng()));
  d.action = choice.action;
  d.provenance = choice.provenance.label();
  d.explored = !choice.provenance.exploit;
  d.m = choice.provenance.m;
  d.k = choice.provenance.k;
  return d;
}

const PlanResult& InqAgent::information_plan(std::size_t depth) {
  auto& slot = ig_plans_[depth - 1];
  if (!slot)
    slot = plan_information(environment_class(), belief(), class_state(), config_.planner, depth,
                            stream_seed("ig", depth));
  return *slot;
}

Decision InqAgent::act_sampled() {
  const std::size_t t = time();
  const std::size_t m_max = config_.m_max;
  ig_plans_.assign(m_max, std::nullopt);

  // Snapshot V_m for expeditions starting now. Once the posterior is a point
  // mass no expedition can gain information, so the search is skipped.
  std::vector<double> values(m_max, 0.0);
  if (!belief().is_point_mass())
    for (std::size_t m = 1; m <= m_max; ++m) values[m - 1] = information_plan(m).value;
  ig_values_.push_front(std::move(values));
  if (ig_values_.size() > m_max) ig_values_.pop_back();

  Decision d;
  const double u = uniform01(rng());
  double acc = 0.0;
  std::optional<Provenance> hit;
  for (std::size_t m = 1; m <= m_max; ++m) {
    for (std::size_t k = 0; k < std::min(m, t); ++k) {
      const double r = rho_value(m, ig_values_[k][m - 1], config_.eta);
      if (k == 0) d.rho_max = std::max(d.rho_max, r);
      if (r <= 0.0) continue;
      if (!hit && u < acc + r) hit = Provenance::expedition(m, k);
      acc += r;
    }
  }
  d.beta = acc;

  if (hit) {
    // The tail of the (t-k, m) expedition from here is itself an optimal
    // (m-k)-step expedition from the current history.
    d.action = information_plan(hit->m - hit->k).action;
    d.provenance = hit->label();
    d.explored = true;
    d.m = hit->m;
    d.k = hit->k;
  } else {
    d.action = plan_reward(environment_class(), belief(), class_state(), config_.planner,
                           std::min(effective_horizon(config_.gamma, config_.epsilon_trunc),
                                    config_.planner.horizon),
                           config_.gamma, stream_seed("exploit"))
                   .action;
    d.provenance = Provenance::exploitation().label();
  }
  return d;
}

}  // namespace inqlab
