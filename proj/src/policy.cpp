#include "inqlab/policy.hpp"

#include <algorithm>
#include <cmath>

#include "inqlab/errors.hpp"

namespace inqlab {

void InqConfig::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("eta must be a finite value > 0");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in [0, 1)");
  if (m_max < 1) throw ConfigError("m_max must be at least 1");
  if (!(epsilon_trunc > 0.0 && epsilon_trunc < 1.0))
    throw ConfigError("epsilon_trunc must lie in (0, 1)");
  if (planner.samples < 1) throw ConfigError("planner samples must be at least 1");
  if (planner.horizon < 1) throw ConfigError("planner horizon must be at least 1");
  if (planner.kind == PlannerKind::Mcts && m_max > planner.horizon)
    throw ConfigError("m_max may not exceed the planner horizon");
}

double rho_cap(std::size_t m) {
  const double md = static_cast<double>(m);
  return 1.0 / (md * md * (md + 1.0));
}

double rho_value(std::size_t m, double ig_value, double eta) {
  return std::min(rho_cap(m), eta * ig_value);
}

double rho(const ExpeditionRegistry& registry, std::size_t t, std::size_t m, std::size_t k,
           double eta) {
  if (k >= std::min(m, t)) throw ConsistencyError("rho needs k < min(m, t)");
  return rho_value(m, registry.entry(t - k, m).ig_value, eta);
}

double beta(const ExpeditionRegistry& registry, std::size_t t, std::size_t m_max, double eta) {
  double total = 0.0;
  for (std::size_t m = 1; m <= m_max; ++m)
    for (std::size_t k = 0; k < std::min(m, t); ++k) total += rho(registry, t, m, k, eta);
  return total;
}

double beta_bound(std::size_t m_max, std::size_t t) {
  double total = 0.0;
  for (std::size_t m = 1; m <= m_max; ++m)
    total += static_cast<double>(std::min(m, t)) * rho_cap(m);
  return total;
}

std::string Provenance::label() const {
  if (exploit) return "exploit";
  return std::to_string(m) + "-" + std::to_string(k);
}

double ActionDistribution::total() const {
  double s = 0.0;
  for (const auto& c : choices) s += c.probability;
  return s;
}

double ActionDistribution::probability_of(ActionId action) const {
  double s = 0.0;
  for (const auto& c : choices)
    if (c.action == action) s += c.probability;
  return s;
}

const ActionChoice& ActionDistribution::select(double u) const {
  if (choices.empty()) throw ConsistencyError("empty action distribution");
  double acc = 0.0;
  for (const auto& c : choices) {
    acc += c.probability;
    if (u < acc) return c;
  }
  return choices.back();
}

std::size_t effective_horizon(double gamma, double epsilon_trunc) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in [0, 1)");
  if (!(epsilon_trunc > 0.0 && epsilon_trunc < 1.0))
    throw ConfigError("epsilon_trunc must lie in (0, 1)");
  if (gamma == 0.0) return 1;
  const double h = std::ceil(std::log(epsilon_trunc) / std::log(gamma));
  return std::max<std::size_t>(1, static_cast<std::size_t>(h));
}

PlanResult exploit_action(const EnvironmentClass& cls, const BeliefState& belief,
                          const ClassState& state, double gamma, double epsilon_trunc,
                          std::size_t horizon_cap) {
  const std::size_t h = std::min(effective_horizon(gamma, epsilon_trunc), horizon_cap);
  return expectimax(cls, belief, state, h, gamma);
}

ActionDistribution inq_action_distribution(const ExpeditionRegistry& registry,
                                           const History& history, const Alphabets& alphabets,
                                           std::size_t t, double eta, ActionId exploit) {
  ActionDistribution out;
  double used = 0.0;
  for (std::size_t m = 1; m <= registry.m_max(); ++m) {
    for (std::size_t k = 0; k < std::min(m, t); ++k) {
      const double r = rho(registry, t, m, k, eta);
      if (r <= 0.0) continue;
      out.choices.push_back(ActionChoice{exploratory_action(registry, history, alphabets, t, m, k),
                                         r, Provenance::expedition(m, k)});
      used += r;
    }
  }
  out.choices.push_back(
      ActionChoice{exploit, std::max(0.0, 1.0 - used), Provenance::exploitation()});
  return out;
}

}  // namespace inqlab
