#include "inqlab/belief.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "inqlab/errors.hpp"

namespace inqlab {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

}  // namespace

BeliefState::BeliefState(std::span<const double> prior) {
  if (prior.empty()) throw ConfigError("belief over an empty class");
  log_weights_.reserve(prior.size());
  for (double w : prior) {
    if (!(w >= 0.0)) throw ConfigError("negative prior weight");
    log_weights_.push_back(safe_log(w));
  }
  normalize();
}

BeliefState BeliefState::point_mass(std::size_t size, std::size_t index) {
  std::vector<double> lw(size, kNegInf);
  lw.at(index) = 0.0;
  return from_log_weights(std::move(lw));
}

BeliefState BeliefState::from_log_weights(std::vector<double> log_weights) {
  BeliefState b;
  b.log_weights_ = std::move(log_weights);
  b.normalize();
  return b;
}

void BeliefState::normalize() {
  const double shift = *std::max_element(log_weights_.begin(), log_weights_.end());
  if (shift == kNegInf)
    throw ImpossibleObservation("every member assigns probability zero to the observation");
  double total = 0.0;
  for (double lw : log_weights_) total += std::exp(lw - shift);
  const double log_norm = shift + std::log(total);
  weights_.resize(log_weights_.size());
  support_ = 0;
  for (std::size_t i = 0; i < log_weights_.size(); ++i) {
    if (log_weights_[i] != kNegInf) log_weights_[i] -= log_norm;
    weights_[i] = std::exp(log_weights_[i]);
    if (weights_[i] > 0.0) ++support_;
  }
}

BeliefState BeliefState::updated(std::span<const double> likelihoods) const {
  if (likelihoods.size() != log_weights_.size())
    throw ConfigError("likelihood vector does not match class size");
  BeliefState next;
  next.log_weights_.resize(log_weights_.size());
  for (std::size_t i = 0; i < log_weights_.size(); ++i)
    next.log_weights_[i] = log_weights_[i] + safe_log(likelihoods[i]);
  next.normalize();
  return next;
}

double mixture_probability(const BeliefState& belief, const LikelihoodTable& table,
                           const LikelihoodTable::Row& row) {
  double exc_mass = 0.0;
  double total = 0.0;
  for (std::uint32_t i = row.begin; i < row.end; ++i) {
    const double w = belief.weight(table.members[i]);
    exc_mass += w;
    total += w * table.values[i];
  }
  if (row.base != 0.0) total += row.base * std::max(0.0, 1.0 - exc_mass);
  return total;
}

std::vector<double> mixture_predict(const BeliefState& belief, const EnvironmentClass& cls,
                                    const ClassState& state, ActionId action) {
  LikelihoodTable table;
  cls.likelihoods(state, action, table);
  std::vector<double> out(cls.alphabets().num_percepts(), 0.0);
  for (const auto& row : table.rows) out[row.percept] = mixture_probability(belief, table, row);
  return out;
}

std::vector<double> mixture_predict(const BeliefState& belief, const EnvironmentClass& cls,
                                    const History& history, ActionId action) {
  return mixture_predict(belief, cls, cls.state_after(history), action);
}

BeliefState posterior_update(const BeliefState& belief, const EnvironmentClass& cls,
                             const ClassState& state, ActionId action, PerceptId percept) {
  return belief.updated(cls.member_likelihoods(state, action, percept));
}

BeliefState posterior_update(const BeliefState& belief, const EnvironmentClass& cls,
                             const History& history, const Timestep& step) {
  return posterior_update(belief, cls, cls.state_after(history), step.action,
                          percept_of(step, cls.alphabets()));
}

double information_gain(const BeliefState& after, const BeliefState& before) {
  if (after.size() != before.size()) throw ConfigError("beliefs over different classes");
  double kl = 0.0;
  for (std::size_t i = 0; i < after.size(); ++i) {
    const double w = after.weight(i);
    if (w == 0.0) continue;
    if (before.weight(i) == 0.0)
      throw UndefinedDivergence("posterior weight appeared on member " + std::to_string(i) +
                                " that had zero prior weight");
    kl += w * (after.log_weights()[i] - before.log_weights()[i]);
  }
  return std::max(kl, 0.0);
}

double true_env_weight_reciprocal(const BeliefState& belief, std::size_t true_index) {
  const double w = belief.weight(true_index);
  if (!(w > 0.0)) throw std::domain_error("true environment has zero posterior weight");
  return 1.0 / w;
}

double PathBelief::log_weight(std::uint32_t member) const {
  for (const auto& [m, lw] : overrides_)
    if (m == member) return lw;
  if (others_zero_) return kNegInf;
  return root_->log_weights()[member] + log_shift_;
}

double PathBelief::weight(std::uint32_t member) const { return std::exp(log_weight(member)); }

double PathBelief::probability(const LikelihoodTable& table,
                               const LikelihoodTable::Row& row) const {
  double exc_mass = 0.0;
  double total = 0.0;
  for (std::uint32_t i = row.begin; i < row.end; ++i) {
    const double w = weight(table.members[i]);
    exc_mass += w;
    total += w * table.values[i];
  }
  if (row.base != 0.0) total += row.base * std::max(0.0, 1.0 - exc_mass);
  return total;
}

double PathBelief::update(const LikelihoodTable& table, const LikelihoodTable::Row& row,
                          double probability) {
  if (!(probability > 0.0)) throw ImpossibleObservation("conditioning on a zero-probability percept");
  const double log_z = std::log(probability);
  const double log_base_ratio = row.base > 0.0 ? std::log(row.base) - log_z : kNegInf;

  boost::container::small_vector<std::pair<std::uint32_t, double>, 8> fresh;
  double exc_mass_after = 0.0;
  double gain = 0.0;
  for (std::uint32_t i = row.begin; i < row.end; ++i) {
    const double lik = table.values[i];
    double lw = kNegInf;
    if (lik > 0.0) {
      lw = log_weight(table.members[i]);
      if (lw != kNegInf) {
        const double log_ratio = std::log(lik) - log_z;
        lw += log_ratio;
        const double w = std::exp(lw);
        exc_mass_after += w;
        gain += w * log_ratio;
      }
    }
    fresh.emplace_back(table.members[i], lw);
  }

  auto is_exception = [&](std::uint32_t member) {
    for (std::uint32_t i = row.begin; i < row.end; ++i)
      if (table.members[i] == member) return true;
    return false;
  };
  overrides_.erase(std::remove_if(overrides_.begin(), overrides_.end(),
                                  [&](const auto& o) { return is_exception(o.first); }),
                   overrides_.end());
  for (auto& o : overrides_) o.second += log_base_ratio;
  if (row.base > 0.0) {
    log_shift_ += log_base_ratio;
    gain += std::max(0.0, 1.0 - exc_mass_after) * log_base_ratio;
  } else {
    others_zero_ = true;
  }
  for (const auto& f : fresh) overrides_.push_back(f);
  if (others_zero_)
    overrides_.erase(std::remove_if(overrides_.begin(), overrides_.end(),
                                    [](const auto& o) { return o.second == kNegInf; }),
                     overrides_.end());
  return std::max(gain, 0.0);
}

namespace {

struct PredictionErrorSearch {
  const EnvironmentClass& cls;
  std::size_t true_index;
  std::size_t m;
  std::vector<LikelihoodTable> tables;
  double worst = 0.0;

  void run(const ClassState& state, const PathBelief* path, double p_mu, double p_xi,
           std::size_t depth) {
    if (depth == m) {
      worst = std::max(worst, std::abs(p_mu - p_xi));
      return;
    }
    LikelihoodTable& table = tables[depth];
    for (ActionId a = 0; a < cls.alphabets().num_actions(); ++a) {
      cls.likelihoods(state, a, table);
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const double mu = table.likelihood(row, static_cast<std::uint32_t>(true_index));
        const double xi = path ? path->probability(table, row) : 0.0;
        if (mu == 0.0 && xi == 0.0) continue;
        ClassState next = state;
        cls.advance(next, a, row.percept);
        if (xi > 0.0) {
          PathBelief child = *path;
          child.update(table, row, xi);
          run(next, &child, p_mu * mu, p_xi * xi, depth + 1);
        } else {
          run(next, nullptr, p_mu * mu, 0.0, depth + 1);
        }
      }
    }
  }
};

}  // namespace

double prediction_error(const EnvironmentClass& cls, const BeliefState& belief,
                        const ClassState& state, std::size_t true_index, std::size_t m) {
  if (m == 0) return 0.0;
  PredictionErrorSearch search{cls, true_index, m, std::vector<LikelihoodTable>(m)};
  PathBelief root(belief);
  search.run(state, &root, 1.0, 1.0, 0);
  return search.worst;
}

}  // namespace inqlab
