#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "inqlab/belief.hpp"
#include "inqlab/environment.hpp"
#include "inqlab/rng.hpp"

namespace inqlab {

struct PropertyReport {
  std::string name;
  std::size_t instances = 0;
  /// The worst observed value of the checked quantity (an error, or the
  /// statistic compared against the threshold).
  double max_error = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<PropertyReport> properties;
  bool passed() const;
};

/// One line per property: `property=<name> instances=<n> max_error=<x> verdict=PASS|FAIL`.
void print_report(std::ostream& out, const SuiteReport& report);

const std::vector<std::string>& suite_names();
/// Throws ConfigError on an unknown suite.
SuiteReport run_suite(const std::string& name, std::uint64_t seed = 0);

struct InstanceLimits {
  std::size_t min_members = 2;
  std::size_t max_members = 4;
  std::size_t max_actions = 3;
  std::size_t max_percepts = 4;
  std::size_t max_depth = 3;
  std::size_t max_states = 2;
  /// Only (actions, percepts, depth) combinations whose brute-force tree
  /// count stays below this are drawn.
  std::uint64_t max_trees = 10000;
  /// Random steps taken under the mixture before the instance starts.
  std::size_t max_prefix = 3;
};

/// A random tabular class with a random prior, conditioned on a short random
/// history so the belief and class state are not at their defaults.
struct RandomInstance {
  std::shared_ptr<const EnvironmentClass> cls;
  BeliefState belief;
  ClassState state;
  std::size_t depth = 1;
};

RandomInstance random_instance(Rng& rng, const InstanceLimits& limits = {});

/// Depth-2 two-member toy where the myopic choice is wrong.
std::shared_ptr<const EnvironmentClass> make_planner_toy();
/// Success vectors of the 4-member bandit class used by the convergence checks.
std::vector<std::vector<double>> convergence_bandit_arms();

SuiteReport verify_lemma1(std::size_t instances, std::uint64_t seed);
SuiteReport verify_martingale();
SuiteReport verify_dp_vs_bruteforce(std::size_t instances, std::uint64_t seed);
SuiteReport verify_rho_beta_bounds(std::size_t states, std::uint64_t seed);
SuiteReport verify_planner_consistency(std::size_t trials, std::size_t samples,
                                       std::uint64_t seed);
SuiteReport verify_convergence(std::size_t seeds, std::size_t steps, std::uint64_t seed);

}  // namespace inqlab
