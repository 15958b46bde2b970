#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace inqlab {

using ActionId = std::uint32_t;
using ObservationId = std::uint32_t;
using RewardId = std::uint32_t;
/// Joint (observation, reward) index: observation * num_rewards + reward.
using PerceptId = std::uint32_t;

/// Exact reward value. Always stored in lowest terms with a positive
/// denominator so that equality is percept identity.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational of(std::int64_t num, std::int64_t den = 1);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Finite action, observation and reward alphabets. Symbols are addressed by
/// index; actions carry display names.
class Alphabets {
 public:
  Alphabets(std::vector<std::string> action_names, std::size_t num_observations,
            std::vector<Rational> rewards);

  std::size_t num_actions() const { return action_names_.size(); }
  std::size_t num_observations() const { return num_observations_; }
  std::size_t num_rewards() const { return rewards_.size(); }
  std::size_t num_percepts() const { return num_observations_ * rewards_.size(); }

  const std::string& action_name(ActionId a) const { return action_names_.at(a); }
  const std::vector<Rational>& rewards() const { return rewards_; }
  double reward_value(RewardId r) const { return reward_values_[r]; }

  PerceptId percept(ObservationId o, RewardId r) const {
    return static_cast<PerceptId>(o * rewards_.size() + r);
  }
  ObservationId observation_of(PerceptId p) const {
    return static_cast<ObservationId>(p / rewards_.size());
  }
  RewardId reward_of(PerceptId p) const { return static_cast<RewardId>(p % rewards_.size()); }
  double percept_reward(PerceptId p) const { return reward_values_[reward_of(p)]; }

 private:
  std::vector<std::string> action_names_;
  std::size_t num_observations_;
  std::vector<Rational> rewards_;
  std::vector<double> reward_values_;
};

struct Timestep {
  ActionId action = 0;
  ObservationId observation = 0;
  RewardId reward = 0;

  friend bool operator==(const Timestep&, const Timestep&) = default;
};

bool is_valid(const Timestep& step, const Alphabets& alphabets);
PerceptId percept_of(const Timestep& step, const Alphabets& alphabets);
Timestep make_timestep(ActionId action, PerceptId percept, const Alphabets& alphabets);

using HistoryFragment = std::vector<Timestep>;

/// Append-only interaction history. Indices are 1-based: at(t) is the t-th
/// timestep, fragment(i, j) is h_{i:j} inclusive.
class History {
 public:
  History() = default;
  explicit History(std::vector<Timestep> steps) : steps_(std::move(steps)) {}

  void append(const Timestep& step) { steps_.push_back(step); }
  std::size_t length() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }

  const Timestep& at(std::size_t t) const;
  /// h_{from:to}; empty when from == to + 1. Throws std::out_of_range unless
  /// 1 <= from <= to + 1 <= length + 1.
  HistoryFragment fragment(std::size_t from, std::size_t to) const;
  const std::vector<Timestep>& steps() const { return steps_; }

 private:
  std::vector<Timestep> steps_;
};

}  // namespace inqlab
