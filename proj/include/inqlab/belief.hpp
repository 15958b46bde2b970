#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "inqlab/environment.hpp"
#include "inqlab/history.hpp"

namespace inqlab {

/// Posterior w(nu | h) over a finite class. Log-weights are authoritative and
/// renormalized with a max shift on every update; weights() mirrors them.
/// A weight becomes exactly zero only through an exact-zero likelihood.
class BeliefState {
 public:
  explicit BeliefState(std::span<const double> prior);
  static BeliefState point_mass(std::size_t size, std::size_t index);
  static BeliefState from_log_weights(std::vector<double> log_weights);

  std::size_t size() const { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> log_weights() const { return log_weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  /// Exactly one member carries positive weight.
  bool is_point_mass() const { return support_ == 1; }

  /// Bayes' rule with likelihoods[i] = nu_i(or | h a). Throws
  /// ImpossibleObservation when the mixture probability is zero.
  BeliefState updated(std::span<const double> likelihoods) const;

 private:
  BeliefState() = default;
  void normalize();

  std::vector<double> log_weights_;
  std::vector<double> weights_;
  std::size_t support_ = 0;
};

/// xi(p | h a) for one likelihood row.
double mixture_probability(const BeliefState& belief, const LikelihoodTable& table,
                           const LikelihoodTable::Row& row);

/// Full mixture predictive distribution over the percept alphabet.
std::vector<double> mixture_predict(const BeliefState& belief, const EnvironmentClass& cls,
                                    const ClassState& state, ActionId action);
std::vector<double> mixture_predict(const BeliefState& belief, const EnvironmentClass& cls,
                                    const History& history, ActionId action);

BeliefState posterior_update(const BeliefState& belief, const EnvironmentClass& cls,
                             const ClassState& state, ActionId action, PerceptId percept);
BeliefState posterior_update(const BeliefState& belief, const EnvironmentClass& cls,
                             const History& history, const Timestep& step);

/// KL(after || before) in nats, with 0 log 0 = 0. Throws UndefinedDivergence
/// if `after` is positive where `before` is zero.
double information_gain(const BeliefState& after, const BeliefState& before);

/// z = 1 / w(mu | h). Throws std::domain_error if that weight is zero.
double true_env_weight_reciprocal(const BeliefState& belief, std::size_t true_index);

/// Sparse copy-on-write view of a posterior used along simulated paths: the
/// root stays shared, members touched by likelihood exceptions get their own
/// log-weight, and everyone else shares one log-scale offset. An update costs
/// O(exceptions + overrides) rather than O(class size).
class PathBelief {
 public:
  explicit PathBelief(const BeliefState& root) : root_(&root) {}

  double weight(std::uint32_t member) const;
  double probability(const LikelihoodTable& table, const LikelihoodTable::Row& row) const;
  /// Conditions on the row's percept, which must have mixture probability
  /// `probability` > 0. Returns the information gain of this step.
  double update(const LikelihoodTable& table, const LikelihoodTable::Row& row,
                double probability);

 private:
  double log_weight(std::uint32_t member) const;

  const BeliefState* root_;
  double log_shift_ = 0.0;
  bool others_zero_ = false;
  boost::container::small_vector<std::pair<std::uint32_t, double>, 8> overrides_;
};

/// max over action sequences and percept sequences of length m of
/// |P_mu(h'|h) - P_xi(h'|h)|, by enumeration.
double prediction_error(const EnvironmentClass& cls, const BeliefState& belief,
                        const ClassState& state, std::size_t true_index, std::size_t m);

}  // namespace inqlab
