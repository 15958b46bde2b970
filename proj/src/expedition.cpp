#include "inqlab/expedition.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "inqlab/errors.hpp"

namespace inqlab {
namespace {

constexpr double kTieTolerance = 1e-12;
constexpr std::size_t kMaxTreeNodes = std::size_t{1} << 26;

}  // namespace

ExpeditionTree::ExpeditionTree(std::size_t depth, std::size_t num_actions,
                               std::size_t num_percepts)
    : depth_(depth), num_actions_(num_actions), num_percepts_(num_percepts) {
  if (depth_ == 0) throw ConfigError("expedition depth must be at least 1");
  const std::size_t branching = num_actions_ * num_percepts_;
  std::size_t level_size = 1;
  std::size_t total = 0;
  for (std::size_t level = 0; level < depth_; ++level) {
    offsets_.push_back(total);
    total += level_size;
    if (total > kMaxTreeNodes) throw SizeError("expedition tree too large to store");
    if (level + 1 < depth_) {
      if (branching != 0 && level_size > kMaxTreeNodes / branching)
        throw SizeError("expedition tree too large to store");
      level_size *= branching;
    }
  }
  actions_.assign(total, 0);
}

ActionId ExpeditionTree::action_after(std::span<const Timestep> fragment,
                                      const Alphabets& alphabets) const {
  if (fragment.size() >= depth_)
    throw std::out_of_range("fragment of length " + std::to_string(fragment.size()) +
                            " does not fit an expedition of depth " + std::to_string(depth_));
  Node n = root();
  for (const Timestep& step : fragment) n = child(n, step.action, percept_of(step, alphabets));
  return action(n);
}

double expedition_value_bruteforce(const EnvironmentClass& cls, const BeliefState& belief,
                                   const ClassState& state, const ExpeditionTree& tree) {
  double total = 0.0;
  const std::size_t percepts = cls.alphabets().num_percepts();
  auto visit = [&](auto&& self, ExpeditionTree::Node node, const BeliefState& here,
                   const ClassState& s, double prob) -> void {
    if (node.level == tree.depth()) {
      total += prob * information_gain(here, belief);
      return;
    }
    const ActionId a = tree.action(node);
    const auto xi = mixture_predict(here, cls, s, a);
    for (std::size_t p = 0; p < percepts; ++p) {
      if (xi[p] <= 0.0) continue;
      const auto percept = static_cast<PerceptId>(p);
      ClassState next = s;
      cls.advance(next, a, percept);
      self(self, tree.child(node, a, percept), posterior_update(here, cls, s, a, percept), next,
           prob * xi[p]);
    }
  };
  visit(visit, tree.root(), belief, state, 1.0);
  return total;
}

double expedition_value_kl_form(const EnvironmentClass& cls, const BeliefState& belief,
                                const ClassState& state, const ExpeditionTree& tree) {
  const std::size_t n = cls.size();
  const std::size_t percepts = cls.alphabets().num_percepts();
  double total = 0.0;
  std::vector<StateId> states(n);
  for (std::size_t i = 0; i < n; ++i) states[i] = cls.member_state(state, i);

  auto visit = [&](auto&& self, ExpeditionTree::Node node, const std::vector<StateId>& s,
                   const std::vector<double>& path_prob) -> void {
    if (node.level == tree.depth()) {
      double p_xi = 0.0;
      for (std::size_t i = 0; i < n; ++i) p_xi += belief.weight(i) * path_prob[i];
      for (std::size_t i = 0; i < n; ++i) {
        const double w = belief.weight(i);
        if (w == 0.0 || path_prob[i] == 0.0) continue;
        total += w * path_prob[i] * std::log(path_prob[i] / p_xi);
      }
      return;
    }
    const ActionId a = tree.action(node);
    std::vector<std::vector<double>> dists(n);
    for (std::size_t i = 0; i < n; ++i) dists[i] = cls.member(i).percept_distribution(s[i], a);
    for (std::size_t p = 0; p < percepts; ++p) {
      std::vector<double> next_prob(n);
      std::vector<StateId> next_state(n);
      bool any = false;
      for (std::size_t i = 0; i < n; ++i) {
        next_prob[i] = path_prob[i] * dists[i][p];
        any = any || (next_prob[i] > 0.0 && belief.weight(i) > 0.0);
        next_state[i] = cls.member(i).transition(s[i], a, static_cast<PerceptId>(p));
      }
      if (!any) continue;
      self(self, tree.child(node, a, static_cast<PerceptId>(p)), next_state, next_prob);
    }
  };
  visit(visit, tree.root(), states, std::vector<double>(n, 1.0));
  return total;
}

std::uint64_t bruteforce_tree_count(std::size_t num_actions, std::size_t num_percepts,
                                    std::size_t depth) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t nodes = 0;
  std::uint64_t level = 1;
  for (std::size_t i = 0; i < depth; ++i) {
    nodes += level;
    if (nodes > 64) return kMax;
    level *= num_percepts;
  }
  std::uint64_t count = 1;
  for (std::uint64_t i = 0; i < nodes; ++i) {
    if (count > kMax / num_actions) return kMax;
    count *= num_actions;
  }
  return count;
}

Expedition best_expedition_bruteforce(const EnvironmentClass& cls, const BeliefState& belief,
                                      const ClassState& state, std::size_t depth,
                                      std::uint64_t max_trees) {
  const std::size_t actions = cls.alphabets().num_actions();
  const std::size_t percepts = cls.alphabets().num_percepts();
  const std::uint64_t count = bruteforce_tree_count(actions, percepts, depth);
  if (count > max_trees)
    throw SizeError("brute-force expedition search over " + std::to_string(count) +
                    " trees exceeds the guard of " + std::to_string(max_trees));

  // Prescribed skeleton: one slot per percept sequence of length < depth,
  // in level order. Slot 0 is the most significant digit.
  std::vector<std::size_t> level_offset;
  std::size_t slots = 0;
  std::size_t level_size = 1;
  for (std::size_t level = 0; level < depth; ++level) {
    level_offset.push_back(slots);
    slots += level_size;
    level_size *= percepts;
  }
  std::vector<ActionId> digits(slots, 0);

  auto build = [&]() {
    ExpeditionTree tree(depth, actions, percepts);
    auto fill = [&](auto&& self, ExpeditionTree::Node node, std::size_t level,
                    std::size_t local) -> void {
      const ActionId a = digits[level_offset[level] + local];
      tree.set_action(node, a);
      if (level + 1 == depth) return;
      for (std::size_t p = 0; p < percepts; ++p)
        self(self, tree.child(node, a, static_cast<PerceptId>(p)), level + 1,
             local * percepts + p);
    };
    fill(fill, tree.root(), 0, 0);
    return tree;
  };

  Expedition best{build(), expedition_value_bruteforce(cls, belief, state, build())};
  for (std::uint64_t i = 1; i < count; ++i) {
    for (std::size_t pos = slots; pos-- > 0;) {
      if (++digits[pos] < actions) break;
      digits[pos] = 0;
    }
    ExpeditionTree tree = build();
    const double v = expedition_value_bruteforce(cls, belief, state, tree);
    if (v > best.value + kTieTolerance) best = Expedition{std::move(tree), v};
  }
  return best;
}

namespace {

struct ExpeditionDp {
  const EnvironmentClass& cls;
  ExpeditionTree& tree;
  std::vector<LikelihoodTable> tables;

  double value(ExpeditionTree::Node node, const PathBelief& path, const ClassState& state,
               std::size_t remaining) {
    if (remaining == 0) return 0.0;
    LikelihoodTable& table = tables[node.level];
    double best = -1.0;
    ActionId best_action = 0;
    for (ActionId a = 0; a < tree.num_actions(); ++a) {
      cls.likelihoods(state, a, table);
      double q = 0.0;
      for (const auto& row : table.rows) {
        const double xi = path.probability(table, row);
        if (xi <= 0.0) continue;
        PathBelief next = path;
        const double gain = next.update(table, row, xi);
        double future = 0.0;
        if (remaining > 1) {
          ClassState next_state = state;
          cls.advance(next_state, a, row.percept);
          future = value(tree.child(node, a, row.percept), next, next_state, remaining - 1);
        }
        q += xi * (gain + future);
      }
      if (q > best + kTieTolerance) {
        best = q;
        best_action = a;
      }
    }
    tree.set_action(node, best_action);
    return best;
  }
};

}  // namespace

Expedition best_expedition_dp(const EnvironmentClass& cls, const BeliefState& belief,
                              const ClassState& state, std::size_t depth, std::size_t max_depth) {
  if (depth > max_depth)
    throw ConfigError("expedition depth " + std::to_string(depth) + " exceeds m_max " +
                      std::to_string(max_depth));
  Expedition out{ExpeditionTree(depth, cls.alphabets().num_actions(),
                                cls.alphabets().num_percepts()),
                 0.0};
  ExpeditionDp dp{cls, out.tree, std::vector<LikelihoodTable>(depth)};
  PathBelief root(belief);
  out.value = dp.value(out.tree.root(), root, state, depth);
  return out;
}

bool same_prescriptions(const ExpeditionTree& a, const ExpeditionTree& b,
                        const EnvironmentClass& cls, const BeliefState& belief,
                        const ClassState& state) {
  if (a.depth() != b.depth()) return false;
  const std::size_t percepts = cls.alphabets().num_percepts();
  auto walk = [&](auto&& self, ExpeditionTree::Node node, const BeliefState& here,
                  const ClassState& s) -> bool {
    const ActionId act = a.action(node);
    if (act != b.action(node)) return false;
    if (node.level + 1 == a.depth()) return true;
    const auto xi = mixture_predict(here, cls, s, act);
    for (std::size_t p = 0; p < percepts; ++p) {
      if (xi[p] <= 0.0) continue;
      const auto percept = static_cast<PerceptId>(p);
      ClassState next = s;
      cls.advance(next, act, percept);
      if (!self(self, a.child(node, act, percept), posterior_update(here, cls, s, act, percept),
                next))
        return false;
    }
    return true;
  };
  return walk(walk, a.root(), belief, state);
}

ExpeditionRegistry::ExpeditionRegistry(std::size_t m_max) : m_max_(m_max) {
  if (m_max_ == 0) throw ConfigError("m_max must be at least 1");
}

void ExpeditionRegistry::step(const EnvironmentClass& cls, const BeliefState& belief,
                              const ClassState& state, std::size_t t) {
  if (t != time_ + 1)
    throw ConsistencyError("registry stepped to t=" + std::to_string(t) + " after t=" +
                           std::to_string(time_));
  time_ = t;
  std::erase_if(entries_, [t](const auto& kv) { return t - kv.first.first >= kv.first.second; });
  for (std::size_t m = 1; m <= m_max_; ++m) {
    Expedition e = best_expedition_dp(cls, belief, state, m, m_max_);
    entries_.insert_or_assign({t, m}, RegistryEntry{std::move(e.tree), e.value, belief});
  }
}

bool ExpeditionRegistry::contains(std::size_t start_time, std::size_t m) const {
  return entries_.contains({start_time, m});
}

const RegistryEntry& ExpeditionRegistry::entry(std::size_t start_time, std::size_t m) const {
  const auto it = entries_.find({start_time, m});
  if (it == entries_.end())
    throw ConsistencyError("no expedition registered for start time " +
                           std::to_string(start_time) + ", m=" + std::to_string(m));
  return it->second;
}

ExpeditionRegistry registry_step(ExpeditionRegistry registry, const EnvironmentClass& cls,
                                 const BeliefState& belief, const ClassState& state,
                                 std::size_t t) {
  registry.step(cls, belief, state, t);
  return registry;
}

ActionId exploratory_action(const ExpeditionRegistry& registry, const History& history,
                            const Alphabets& alphabets, std::size_t t, std::size_t m,
                            std::size_t k) {
  if (k >= m || k >= t)
    throw ConsistencyError("exploratory action needs k < min(m, t)");
  const RegistryEntry& e = registry.entry(t - k, m);
  const HistoryFragment fragment = history.fragment(t - k, t - 1);
  return e.tree.action_after(fragment, alphabets);
}

}  // namespace inqlab
