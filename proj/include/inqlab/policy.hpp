#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "inqlab/expedition.hpp"
#include "inqlab/planner.hpp"

namespace inqlab {

struct InqConfig {
  double eta = 1.0;
  double gamma = 0.99;
  std::size_t m_max = 6;
  double epsilon_trunc = 0.05;
  std::uint64_t rng_seed = 0;
  PlannerSettings planner;

  /// Throws ConfigError on out-of-range fields.
  void validate() const;
};

/// 1 / (m^2 (m+1)).
double rho_cap(std::size_t m);
/// min(cap(m), eta * V^IG).
double rho_value(std::size_t m, double ig_value, double eta);

/// rho(h_{<t}, m, k), computed from the (t-k, m) registry entry.
double rho(const ExpeditionRegistry& registry, std::size_t t, std::size_t m, std::size_t k,
           double eta);
/// sum over m <= m_max and k < min(m, t) of rho(h_{<t}, m, k).
double beta(const ExpeditionRegistry& registry, std::size_t t, std::size_t m_max, double eta);
/// The largest value beta can take at time t: sum_m min(m, t) / (m^2 (m+1)).
double beta_bound(std::size_t m_max, std::size_t t);

struct Provenance {
  bool exploit = true;
  std::size_t m = 0;
  std::size_t k = 0;

  static Provenance exploitation() { return {}; }
  static Provenance expedition(std::size_t m, std::size_t k) { return {false, m, k}; }
  std::string label() const;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct ActionChoice {
  ActionId action = 0;
  double probability = 0.0;
  Provenance provenance;
};

/// The mixed policy at one timestep as a list of intervals laid out in
/// (m, k) lexicographic order, with the exploit remainder last.
class ActionDistribution {
 public:
  std::vector<ActionChoice> choices;

  double total() const;
  double probability_of(ActionId action) const;
  /// The choice whose interval contains u in [0, 1).
  const ActionChoice& select(double u) const;
};

/// ceil(ln eps / ln gamma), at least 1.
std::size_t effective_horizon(double gamma, double epsilon_trunc);

/// Exact Bayes-optimal action for the mixture over the effective horizon,
/// capped at `horizon_cap`.
PlanResult exploit_action(const EnvironmentClass& cls, const BeliefState& belief,
                          const ClassState& state, double gamma, double epsilon_trunc,
                          std::size_t horizon_cap);

/// Action distribution of Inq at time t given a registry already stepped to t.
ActionDistribution inq_action_distribution(const ExpeditionRegistry& registry,
                                           const History& history, const Alphabets& alphabets,
                                           std::size_t t, double eta, ActionId exploit);

}  // namespace inqlab
