#include "inqlab/planner.hpp"

#include <cmath>
#include <limits>

#include <boost/container/small_vector.hpp>

#include "inqlab/errors.hpp"
#include "inqlab/expedition.hpp"

namespace inqlab {
namespace {

constexpr double kTieTolerance = 1e-12;

double discount_sum(double gamma, std::size_t steps) {
  double total = 0.0;
  double g = 1.0;
  for (std::size_t i = 0; i < steps; ++i) {
    total += g;
    g *= gamma;
  }
  return total;
}

class UctSearch {
 public:
  UctSearch(const EnvironmentClass& cls, const PlannerObjective& objective, std::size_t horizon,
            double gamma, double exploration, Rng& rng)
      : cls_(cls),
        alphabets_(cls.alphabets()),
        num_actions_(cls.alphabets().num_actions()),
        information_(objective.kind == ObjectiveKind::InformationGain),
        model_(*objective.model),
        horizon_(horizon),
        gamma_(information_ ? 1.0 : gamma),
        exploration_(exploration),
        rng_(rng),
        tables_(horizon) {
    for (std::size_t d = 0; d <= horizon; ++d) scale_.push_back(discount_sum(gamma_, horizon - d));
    new_node();
  }

  void run(const ClassState& root_state, std::size_t samples) {
    for (std::size_t i = 0; i < samples; ++i) {
      PathBelief path(model_);
      ClassState state = root_state;
      simulate(0, path, state, 0);
    }
  }

  // Most visited root action; exact ties (same visits and mean) are broken
  // uniformly so a flat value landscape does not favour low action indices.
  PlanResult result() {
    PlanResult out;
    std::size_t best = 0;
    std::size_t tied = 0;
    for (std::size_t a = 0; a < num_actions_; ++a) {
      const Edge& e = edges_[a];
      out.root_visits.push_back(e.visits);
      if (a == 0) {
        tied = 1;
        continue;
      }
      const Edge& b = edges_[best];
      const double me = e.visits ? mean(e) : 0.0;
      const double mb = b.visits ? mean(b) : 0.0;
      if (e.visits > b.visits || (e.visits == b.visits && me > mb)) {
        best = a;
        tied = 1;
      } else if (e.visits == b.visits && me == mb && rng_() % ++tied == 0) {
        best = a;
      }
    }
    out.action = static_cast<ActionId>(best);
    const Edge& e = edges_[best];
    out.value = e.visits == 0 ? 0.0 : mean(e) / (information_ ? 1.0 : scale_[0]);
    return out;
  }

 private:
  struct Edge {
    std::uint32_t visits = 0;
    double value_sum = 0.0;
    boost::container::small_vector<std::pair<PerceptId, std::uint32_t>, 2> children;
  };
  struct Node {
    std::uint32_t visits = 0;
    std::uint32_t first_edge = 0;
  };

  static double mean(const Edge& e) { return e.value_sum / e.visits; }

  std::uint32_t new_node() {
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(Node{0, static_cast<std::uint32_t>(edges_.size())});
    edges_.resize(edges_.size() + num_actions_);
    return id;
  }

  // Samples a percept from the model and conditions the path on it. Returns
  // the step reward (external or information gain).
  double step(PathBelief& path, ClassState& state, ActionId a, std::size_t depth,
              PerceptId& percept) {
    LikelihoodTable& table = tables_[depth];
    cls_.likelihoods(state, a, table);
    boost::container::small_vector<double, 4> probs;
    double total = 0.0;
    for (const auto& row : table.rows) {
      probs.push_back(path.probability(table, row));
      total += probs.back();
    }
    const double u = uniform01(rng_) * total;
    std::size_t pick = 0;
    double acc = 0.0;
    for (std::size_t r = 0; r < probs.size(); ++r) {
      if (probs[r] <= 0.0) continue;
      pick = r;
      acc += probs[r];
      if (u < acc) break;
    }
    const auto& row = table.rows[pick];
    percept = row.percept;
    const double gain = path.update(table, row, probs[pick]);
    cls_.advance(state, a, percept);
    return information_ ? gain : alphabets_.percept_reward(percept);
  }

  double rollout(PathBelief& path, ClassState& state, std::size_t depth) {
    double ret = 0.0;
    double g = 1.0;
    PerceptId percept = 0;
    for (std::size_t d = depth; d < horizon_; ++d) {
      const auto a = static_cast<ActionId>(rng_() % num_actions_);
      ret += g * step(path, state, a, d, percept);
      g *= gamma_;
    }
    return ret;
  }

  std::size_t select(std::uint32_t node, std::size_t depth) {
    const Node& n = nodes_[node];
    boost::container::small_vector<std::size_t, 8> untried;
    for (std::size_t a = 0; a < num_actions_; ++a)
      if (edges_[n.first_edge + a].visits == 0) untried.push_back(a);
    if (!untried.empty()) return untried[rng_() % untried.size()];

    const double scale = information_ ? std::max(ig_scale_, 1e-12) : scale_[depth];
    const double log_n = std::log(static_cast<double>(n.visits));
    std::size_t best = 0;
    std::size_t tied = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < num_actions_; ++a) {
      const Edge& e = edges_[n.first_edge + a];
      const double score =
          mean(e) / scale + exploration_ * std::sqrt(log_n / static_cast<double>(e.visits));
      if (score > best_score) {
        best_score = score;
        best = a;
        tied = 1;
      } else if (score == best_score && rng_() % ++tied == 0) {
        best = a;
      }
    }
    return best;
  }

  double simulate(std::uint32_t node, PathBelief& path, ClassState& state, std::size_t depth) {
    if (depth == horizon_) return 0.0;
    if (nodes_[node].visits == 0) {
      nodes_[node].visits = 1;
      const double ret = rollout(path, state, depth);
      if (information_) ig_scale_ = std::max(ig_scale_, ret);
      return ret;
    }
    const std::size_t a = select(node, depth);
    const std::uint32_t edge = nodes_[node].first_edge + static_cast<std::uint32_t>(a);
    PerceptId percept = 0;
    const double r = step(path, state, static_cast<ActionId>(a), depth, percept);

    std::uint32_t child = 0;
    bool found = false;
    for (const auto& [p, c] : edges_[edge].children) {
      if (p == percept) {
        child = c;
        found = true;
        break;
      }
    }
    if (!found) {
      child = new_node();
      edges_[edge].children.emplace_back(percept, child);
    }
    const double ret = r + gamma_ * simulate(child, path, state, depth + 1);
    Edge& e = edges_[edge];
    ++e.visits;
    e.value_sum += ret;
    ++nodes_[node].visits;
    if (information_) ig_scale_ = std::max(ig_scale_, ret);
    return ret;
  }

  const EnvironmentClass& cls_;
  const Alphabets& alphabets_;
  std::size_t num_actions_;
  bool information_;
  const BeliefState& model_;
  std::size_t horizon_;
  double gamma_;
  double exploration_;
  Rng& rng_;
  std::vector<LikelihoodTable> tables_;
  std::vector<double> scale_;
  double ig_scale_ = 0.0;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
};

struct Expectimax {
  const EnvironmentClass& cls;
  double gamma;
  std::vector<LikelihoodTable> tables;

  double q(const PathBelief& path, const ClassState& state, ActionId a, std::size_t remaining) {
    LikelihoodTable& table = tables[remaining - 1];
    cls.likelihoods(state, a, table);
    double total = 0.0;
    for (const auto& row : table.rows) {
      const double xi = path.probability(table, row);
      if (xi <= 0.0) continue;
      double future = 0.0;
      if (remaining > 1) {
        PathBelief next = path;
        next.update(table, row, xi);
        ClassState next_state = state;
        cls.advance(next_state, a, row.percept);
        future = value(next, next_state, remaining - 1);
      }
      total += xi * (cls.alphabets().percept_reward(row.percept) + gamma * future);
    }
    return total;
  }

  double value(const PathBelief& path, const ClassState& state, std::size_t remaining) {
    double best = 0.0;
    for (ActionId a = 0; a < cls.alphabets().num_actions(); ++a)
      best = std::max(best, q(path, state, a, remaining));
    return best;
  }
};

}  // namespace

PlanResult rho_uct(const EnvironmentClass& cls, const ClassState& state,
                   const PlannerObjective& objective, std::size_t samples, std::size_t horizon,
                   double gamma, Rng& rng, double exploration) {
  if (cls.alphabets().num_actions() == 0) throw ConfigError("planner needs at least one action");
  if (samples == 0 || horizon == 0) throw ConfigError("planner needs samples >= 1 and horizon >= 1");
  if (objective.model == nullptr) throw ConfigError("planner objective without a model");
  UctSearch search(cls, objective, horizon, gamma, exploration, rng);
  search.run(state, samples);
  return search.result();
}

PlanResult expectimax(const EnvironmentClass& cls, const BeliefState& model,
                      const ClassState& state, std::size_t horizon, double gamma) {
  if (horizon == 0) throw ConfigError("expectimax horizon must be at least 1");
  Expectimax search{cls, gamma, std::vector<LikelihoodTable>(horizon)};
  PathBelief root(model);
  PlanResult out;
  double best = -1.0;
  for (ActionId a = 0; a < cls.alphabets().num_actions(); ++a) {
    const double q = search.q(root, state, a, horizon);
    if (q > best + kTieTolerance) {
      best = q;
      out.action = a;
    }
  }
  out.value = best / discount_sum(gamma, horizon);
  return out;
}

PlanResult plan_reward(const EnvironmentClass& cls, const BeliefState& model,
                       const ClassState& state, const PlannerSettings& settings,
                       std::size_t horizon, double gamma, std::uint64_t seed) {
  if (settings.kind == PlannerKind::Exact) return expectimax(cls, model, state, horizon, gamma);
  Rng rng(seed);
  return rho_uct(cls, state, PlannerObjective{ObjectiveKind::ExternalReward, &model},
                 settings.samples, horizon, gamma, rng, settings.exploration);
}

PlanResult plan_information(const EnvironmentClass& cls, const BeliefState& belief,
                            const ClassState& state, const PlannerSettings& settings,
                            std::size_t depth, std::uint64_t seed) {
  if (settings.kind == PlannerKind::Exact) {
    const Expedition e = best_expedition_dp(cls, belief, state, depth, depth);
    return PlanResult{e.tree.action(e.tree.root()), e.value, {}};
  }
  Rng rng(seed);
  return rho_uct(cls, state, PlannerObjective{ObjectiveKind::InformationGain, &belief},
                 settings.samples, depth, 1.0, rng, settings.exploration);
}

}  // namespace inqlab
