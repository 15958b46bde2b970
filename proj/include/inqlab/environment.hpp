#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "inqlab/history.hpp"
#include "inqlab/rng.hpp"

namespace inqlab {

using StateId = std::uint64_t;

/// A stochastic environment nu(or | h a). Implementations are finite-state:
/// the history enters only through a Markov summary state, which keeps
/// stepping O(1). The history-conditional contract is available through
/// state_after().
class Environment {
 public:
  Environment(std::string name, std::shared_ptr<const Alphabets> alphabets);
  virtual ~Environment() = default;

  const std::string& name() const { return name_; }
  const Alphabets& alphabets() const { return *alphabets_; }
  const std::shared_ptr<const Alphabets>& shared_alphabets() const { return alphabets_; }

  virtual StateId initial_state() const = 0;
  virtual StateId transition(StateId state, ActionId action, PerceptId percept) const = 0;
  /// Writes nu(p | state, action) for every percept p; out.size() == num_percepts.
  virtual void percept_distribution(StateId state, ActionId action,
                                    std::span<double> out) const = 0;

  StateId state_after(const History& history) const;
  std::vector<double> percept_distribution(StateId state, ActionId action) const;
  std::vector<double> percept_distribution(const History& history, ActionId action) const;
  PerceptId sample_percept(StateId state, ActionId action, Rng& rng) const;
  PerceptId sample_percept(const History& history, ActionId action, Rng& rng) const;

 private:
  std::string name_;
  std::shared_ptr<const Alphabets> alphabets_;
};

/// Finite stochastic automaton: per (state, action) a percept distribution and
/// a deterministic successor for each percept. Bandits are the one-state case.
class TabularEnvironment final : public Environment {
 public:
  /// distributions and successors are laid out as [state][action][percept].
  TabularEnvironment(std::string name, std::shared_ptr<const Alphabets> alphabets,
                     std::size_t num_states, std::vector<double> distributions,
                     std::vector<StateId> successors, StateId initial = 0);

  std::size_t num_states() const { return num_states_; }
  StateId initial_state() const override { return initial_; }
  StateId transition(StateId state, ActionId action, PerceptId percept) const override;
  void percept_distribution(StateId state, ActionId action, std::span<double> out) const override;
  using Environment::percept_distribution;

 private:
  std::size_t offset(StateId state, ActionId action) const;

  std::size_t num_states_;
  std::vector<double> distributions_;
  std::vector<StateId> successors_;
  StateId initial_;
};

/// Observations of the bandit alphabet.
inline constexpr ObservationId kLose = 0;
inline constexpr ObservationId kWin = 1;

/// Alphabet shared by Bernoulli bandits: actions arm0.., observations
/// {lose, win}, rewards {0, 1}.
std::shared_ptr<const Alphabets> bandit_alphabets(std::size_t num_arms);

/// Bernoulli bandit: pulling arm i yields (win, 1) with probability
/// arm_success[i] and (lose, 0) otherwise.
std::shared_ptr<const Environment> make_bandit(std::string name,
                                               std::shared_ptr<const Alphabets> alphabets,
                                               std::span<const double> arm_success);

/// Sparse form of member likelihoods nu_i(p | state, a) for one (state, a).
/// Each row covers one percept: every member's likelihood is `base` except
/// the listed exceptions. Percepts absent from the table have likelihood zero
/// under every member.
struct LikelihoodTable {
  struct Row {
    PerceptId percept = 0;
    double base = 0.0;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
  };

  std::vector<Row> rows;
  std::vector<std::uint32_t> members;
  std::vector<double> values;
  std::vector<double> scratch;

  void clear() {
    rows.clear();
    members.clear();
    values.clear();
  }
  void add_row(PerceptId percept, double base) {
    const auto at = static_cast<std::uint32_t>(members.size());
    rows.push_back(Row{percept, base, at, at});
  }
  void add_exception(std::uint32_t member, double value) {
    members.push_back(member);
    values.push_back(value);
    rows.back().end = static_cast<std::uint32_t>(members.size());
  }
  double likelihood(const Row& row, std::uint32_t member) const;
  const Row* find(PerceptId percept) const;
};

using ClassState = boost::container::small_vector<StateId, 2>;

/// Finite environment class M with prior w. The joint class state holds one
/// summary state per member; subclasses whose members share dynamics may
/// compress it.
class EnvironmentClass {
 public:
  EnvironmentClass(std::vector<std::shared_ptr<const Environment>> members,
                   std::vector<double> prior);
  virtual ~EnvironmentClass() = default;

  std::size_t size() const { return members_.size(); }
  const Environment& member(std::size_t i) const { return *members_.at(i); }
  std::span<const double> prior() const { return prior_; }
  const Alphabets& alphabets() const { return members_.front()->alphabets(); }

  virtual ClassState initial_state() const;
  virtual void advance(ClassState& state, ActionId action, PerceptId percept) const;
  virtual StateId member_state(const ClassState& state, std::size_t i) const;
  virtual void likelihoods(const ClassState& state, ActionId action, LikelihoodTable& out) const;

  ClassState state_after(const History& history) const;
  /// Dense nu_i(percept | state, action) for every member.
  std::vector<double> member_likelihoods(const ClassState& state, ActionId action,
                                         PerceptId percept) const;

 private:
  std::vector<std::shared_ptr<const Environment>> members_;
  std::vector<double> prior_;
};

std::vector<double> uniform_prior(std::size_t n);

/// One Bernoulli bandit per success vector, uniform prior.
std::shared_ptr<const EnvironmentClass> make_bandit_class(
    const std::vector<std::vector<double>>& arm_success_vectors);

}  // namespace inqlab
