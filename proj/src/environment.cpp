#include "inqlab/environment.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "inqlab/errors.hpp"

namespace inqlab {

Environment::Environment(std::string name, std::shared_ptr<const Alphabets> alphabets)
    : name_(std::move(name)), alphabets_(std::move(alphabets)) {
  if (!alphabets_) throw ConfigError("environment without alphabets");
}

StateId Environment::state_after(const History& history) const {
  StateId s = initial_state();
  for (const Timestep& step : history.steps()) s = transition(s, step.action, percept_of(step, alphabets()));
  return s;
}

std::vector<double> Environment::percept_distribution(StateId state, ActionId action) const {
  std::vector<double> out(alphabets().num_percepts(), 0.0);
  percept_distribution(state, action, out);
  return out;
}

std::vector<double> Environment::percept_distribution(const History& history,
                                                      ActionId action) const {
  return percept_distribution(state_after(history), action);
}

PerceptId Environment::sample_percept(StateId state, ActionId action, Rng& rng) const {
  const auto dist = percept_distribution(state, action);
  return static_cast<PerceptId>(sample_index(dist, rng));
}

PerceptId Environment::sample_percept(const History& history, ActionId action, Rng& rng) const {
  return sample_percept(state_after(history), action, rng);
}

TabularEnvironment::TabularEnvironment(std::string name,
                                       std::shared_ptr<const Alphabets> alphabets,
                                       std::size_t num_states, std::vector<double> distributions,
                                       std::vector<StateId> successors, StateId initial)
    : Environment(std::move(name), std::move(alphabets)),
      num_states_(num_states),
      distributions_(std::move(distributions)),
      successors_(std::move(successors)),
      initial_(initial) {
  const std::size_t block = this->alphabets().num_percepts();
  const std::size_t expected = num_states_ * this->alphabets().num_actions() * block;
  if (num_states_ == 0 || distributions_.size() != expected || successors_.size() != expected)
    throw ConfigError("tabular environment '" + this->name() + "': table size mismatch");
  if (initial_ >= num_states_) throw ConfigError("tabular environment: bad initial state");
  for (std::size_t at = 0; at < expected; at += block) {
    double total = 0.0;
    for (std::size_t p = 0; p < block; ++p) {
      const double v = distributions_[at + p];
      if (!(v >= 0.0)) throw ConfigError("tabular environment: negative probability");
      if (successors_[at + p] >= num_states_)
        throw ConfigError("tabular environment: successor out of range");
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw ConfigError("tabular environment '" + this->name() +
                        "': percept distribution does not sum to 1");
  }
}

std::size_t TabularEnvironment::offset(StateId state, ActionId action) const {
  const auto& a = alphabets();
  return (static_cast<std::size_t>(state) * a.num_actions() + action) * a.num_percepts();
}

StateId TabularEnvironment::transition(StateId state, ActionId action, PerceptId percept) const {
  return successors_[offset(state, action) + percept];
}

void TabularEnvironment::percept_distribution(StateId state, ActionId action,
                                              std::span<double> out) const {
  const std::size_t at = offset(state, action);
  std::copy_n(distributions_.begin() + static_cast<std::ptrdiff_t>(at), out.size(), out.begin());
}

std::shared_ptr<const Alphabets> bandit_alphabets(std::size_t num_arms) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < num_arms; ++i) names.push_back("arm" + std::to_string(i));
  return std::make_shared<const Alphabets>(std::move(names), 2,
                                           std::vector<Rational>{Rational::of(0), Rational::of(1)});
}

std::shared_ptr<const Environment> make_bandit(std::string name,
                                               std::shared_ptr<const Alphabets> alphabets,
                                               std::span<const double> arm_success) {
  if (arm_success.size() != alphabets->num_actions())
    throw ConfigError("bandit arm count does not match its alphabet");
  const std::size_t percepts = alphabets->num_percepts();
  std::vector<double> dist(arm_success.size() * percepts, 0.0);
  std::vector<StateId> succ(dist.size(), 0);
  const PerceptId win = alphabets->percept(kWin, 1);
  const PerceptId lose = alphabets->percept(kLose, 0);
  for (std::size_t a = 0; a < arm_success.size(); ++a) {
    const double p = arm_success[a];
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("bandit success probability outside [0,1]");
    dist[a * percepts + win] = p;
    dist[a * percepts + lose] = 1.0 - p;
  }
  return std::make_shared<TabularEnvironment>(std::move(name), std::move(alphabets), 1,
                                              std::move(dist), std::move(succ));
}

double LikelihoodTable::likelihood(const Row& row, std::uint32_t member) const {
  for (std::uint32_t i = row.begin; i < row.end; ++i)
    if (members[i] == member) return values[i];
  return row.base;
}

const LikelihoodTable::Row* LikelihoodTable::find(PerceptId percept) const {
  for (const Row& r : rows)
    if (r.percept == percept) return &r;
  return nullptr;
}

EnvironmentClass::EnvironmentClass(std::vector<std::shared_ptr<const Environment>> members,
                                   std::vector<double> prior)
    : members_(std::move(members)), prior_(std::move(prior)) {
  if (members_.empty()) throw ConfigError("environment class must have at least one member");
  if (prior_.size() != members_.size()) throw ConfigError("prior size does not match class size");
  const auto& a = members_.front()->alphabets();
  for (const auto& m : members_) {
    const auto& b = m->alphabets();
    if (b.num_actions() != a.num_actions() || b.num_observations() != a.num_observations() ||
        b.rewards() != a.rewards())
      throw ConfigError("class members must share alphabets");
  }
  double total = 0.0;
  for (double w : prior_) {
    if (!(w > 0.0)) throw ConfigError("prior weights must be strictly positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ConfigError("prior weights must sum to 1");
}

ClassState EnvironmentClass::initial_state() const {
  ClassState s;
  s.reserve(members_.size());
  for (const auto& m : members_) s.push_back(m->initial_state());
  return s;
}

void EnvironmentClass::advance(ClassState& state, ActionId action, PerceptId percept) const {
  for (std::size_t i = 0; i < members_.size(); ++i)
    state[i] = members_[i]->transition(state[i], action, percept);
}

StateId EnvironmentClass::member_state(const ClassState& state, std::size_t i) const {
  return state[i];
}

void EnvironmentClass::likelihoods(const ClassState& state, ActionId action,
                                   LikelihoodTable& out) const {
  out.clear();
  const std::size_t n = members_.size();
  const std::size_t percepts = alphabets().num_percepts();
  out.scratch.resize(n * percepts);
  for (std::size_t i = 0; i < n; ++i)
    members_[i]->percept_distribution(state[i], action,
                                      std::span<double>(out.scratch).subspan(i * percepts, percepts));
  for (std::size_t p = 0; p < percepts; ++p) {
    bool any = false;
    for (std::size_t i = 0; i < n && !any; ++i) any = out.scratch[i * percepts + p] > 0.0;
    if (!any) continue;
    out.add_row(static_cast<PerceptId>(p), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = out.scratch[i * percepts + p];
      if (v > 0.0) out.add_exception(static_cast<std::uint32_t>(i), v);
    }
  }
}

ClassState EnvironmentClass::state_after(const History& history) const {
  ClassState s = initial_state();
  for (const Timestep& step : history.steps())
    advance(s, step.action, percept_of(step, alphabets()));
  return s;
}

std::vector<double> EnvironmentClass::member_likelihoods(const ClassState& state, ActionId action,
                                                         PerceptId percept) const {
  LikelihoodTable table;
  likelihoods(state, action, table);
  std::vector<double> out(size(), 0.0);
  if (const auto* row = table.find(percept)) {
    std::fill(out.begin(), out.end(), row->base);
    for (std::uint32_t i = row->begin; i < row->end; ++i) out[table.members[i]] = table.values[i];
  }
  return out;
}

std::vector<double> uniform_prior(std::size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

std::shared_ptr<const EnvironmentClass> make_bandit_class(
    const std::vector<std::vector<double>>& arm_success_vectors) {
  if (arm_success_vectors.empty()) throw ConfigError("bandit class needs at least one member");
  const std::size_t arms = arm_success_vectors.front().size();
  if (arms == 0) throw ConfigError("bandit needs at least one arm");
  auto alphabets = bandit_alphabets(arms);
  std::vector<std::shared_ptr<const Environment>> members;
  for (std::size_t i = 0; i < arm_success_vectors.size(); ++i) {
    if (arm_success_vectors[i].size() != arms)
      throw ConfigError("bandit class members must have equal arm counts");
    members.push_back(make_bandit("bandit" + std::to_string(i), alphabets, arm_success_vectors[i]));
  }
  return std::make_shared<EnvironmentClass>(std::move(members),
                                            uniform_prior(arm_success_vectors.size()));
}

}  // namespace inqlab
