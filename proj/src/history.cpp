#include "inqlab/history.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "inqlab/errors.hpp"

namespace inqlab {

Rational Rational::of(std::int64_t num, std::int64_t den) {
  if (den == 0) throw ConfigError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational{num, den};
}

Alphabets::Alphabets(std::vector<std::string> action_names, std::size_t num_observations,
                     std::vector<Rational> rewards)
    : action_names_(std::move(action_names)),
      num_observations_(num_observations),
      rewards_(std::move(rewards)) {
  if (action_names_.empty() || num_observations_ == 0 || rewards_.empty())
    throw ConfigError("alphabets must be non-empty");
  for (std::size_t i = 0; i < rewards_.size(); ++i) {
    const Rational r = Rational::of(rewards_[i].num, rewards_[i].den);
    if (r.num < 0 || r.num > r.den) throw ConfigError("reward values must lie in [0,1]");
    for (std::size_t j = 0; j < i; ++j)
      if (rewards_[j] == r) throw ConfigError("duplicate reward value");
    rewards_[i] = r;
    reward_values_.push_back(r.value());
  }
}

bool is_valid(const Timestep& step, const Alphabets& alphabets) {
  return step.action < alphabets.num_actions() &&
         step.observation < alphabets.num_observations() &&
         step.reward < alphabets.num_rewards();
}

PerceptId percept_of(const Timestep& step, const Alphabets& alphabets) {
  return alphabets.percept(step.observation, step.reward);
}

Timestep make_timestep(ActionId action, PerceptId percept, const Alphabets& alphabets) {
  return Timestep{action, alphabets.observation_of(percept), alphabets.reward_of(percept)};
}

const Timestep& History::at(std::size_t t) const {
  if (t < 1 || t > steps_.size())
    throw std::out_of_range("history index " + std::to_string(t) + " outside 1.." +
                            std::to_string(steps_.size()));
  return steps_[t - 1];
}

HistoryFragment History::fragment(std::size_t from, std::size_t to) const {
  if (from < 1 || from > to + 1 || to > steps_.size())
    throw std::out_of_range("fragment " + std::to_string(from) + ":" + std::to_string(to) +
                            " outside history of length " + std::to_string(steps_.size()));
  return HistoryFragment(steps_.begin() + static_cast<std::ptrdiff_t>(from - 1),
                         steps_.begin() + static_cast<std::ptrdiff_t>(to));
}

}  // namespace inqlab
