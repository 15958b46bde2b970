#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "inqlab/belief.hpp"
#include "inqlab/environment.hpp"
#include "inqlab/history.hpp"

namespace inqlab {

/// Depth-m deterministic contingency plan: an action for every history
/// fragment of length < m, stored as a complete level-order tree over
/// (action, percept) branches. Off-prescription branches are part of the
/// tree, so a realized fragment that deviated from the plan still has an
/// answer.
class ExpeditionTree {
 public:
  struct Node {
    std::size_t level = 0;
    std::size_t local = 0;
  };

  ExpeditionTree(std::size_t depth, std::size_t num_actions, std::size_t num_percepts);

  std::size_t depth() const { return depth_; }
  std::size_t num_actions() const { return num_actions_; }
  std::size_t num_percepts() const { return num_percepts_; }
  std::size_t node_count() const { return actions_.size(); }

  Node root() const { return {}; }
  Node child(Node n, ActionId a, PerceptId p) const {
    return {n.level + 1, (n.local * num_actions_ + a) * num_percepts_ + p};
  }
  ActionId action(Node n) const { return actions_[offsets_[n.level] + n.local]; }
  void set_action(Node n, ActionId a) { actions_[offsets_[n.level] + n.local] = a; }

  /// The action prescribed after `fragment` (length < depth).
  ActionId action_after(std::span<const Timestep> fragment, const Alphabets& alphabets) const;

  friend bool operator==(const ExpeditionTree&, const ExpeditionTree&) = default;

 private:
  std::size_t depth_;
  std::size_t num_actions_;
  std::size_t num_percepts_;
  std::vector<std::size_t> offsets_;
  std::vector<ActionId> actions_;
};

struct Expedition {
  ExpeditionTree tree;
  double value = 0.0;
};

/// V^IG(alpha, h): expected information gain of following `tree` from the
/// current history, by enumerating every percept sequence under the mixture
/// and comparing the final posterior with the starting one.
double expedition_value_bruteforce(const EnvironmentClass& cls, const BeliefState& belief,
                                   const ClassState& state, const ExpeditionTree& tree);

/// The same quantity written as sum_nu w(nu|h) KL_{h,m}(P_nu || P_xi),
/// computed from member path probabilities alone. Used as an independent check
/// on expedition_value_bruteforce.
double expedition_value_kl_form(const EnvironmentClass& cls, const BeliefState& belief,
                                const ClassState& state, const ExpeditionTree& tree);

inline constexpr std::uint64_t kMaxBruteforceTrees = 100000;

/// |A|^(1 + P + ... + P^(m-1)), saturating at UINT64_MAX.
std::uint64_t bruteforce_tree_count(std::size_t num_actions, std::size_t num_percepts,
                                    std::size_t depth);

/// argmax over every depth-m tree, ties to the lexicographically first tree
/// (level order over prescribed nodes). Throws SizeError above `max_trees`.
Expedition best_expedition_bruteforce(const EnvironmentClass& cls, const BeliefState& belief,
                                      const ClassState& state, std::size_t depth,
                                      std::uint64_t max_trees = kMaxBruteforceTrees);

/// Backward induction on the per-step decomposition of expected information
/// gain: value(h', d) = max_a sum_or xi(or|h'a) [IG_step + value(h'aor, d-1)].
/// Ties go to the lowest action index. Throws ConfigError if depth > max_depth.
Expedition best_expedition_dp(const EnvironmentClass& cls, const BeliefState& belief,
                              const ClassState& state, std::size_t depth, std::size_t max_depth);

/// Whether two trees prescribe the same actions on every node reachable with
/// positive mixture probability when they are followed.
bool same_prescriptions(const ExpeditionTree& a, const ExpeditionTree& b,
                        const EnvironmentClass& cls, const BeliefState& belief,
                        const ClassState& state);

struct RegistryEntry {
  ExpeditionTree tree;
  double ig_value = 0.0;
  BeliefState start_belief;
};

/// Best m-step expeditions keyed by (start time, m), snapshotted when they
/// start. An entry lives while it can still prescribe an action, i.e. while
/// t - start < m.
class ExpeditionRegistry {
 public:
  explicit ExpeditionRegistry(std::size_t m_max);

  /// Call once per timestep t = 1, 2, ... before choosing the action.
  void step(const EnvironmentClass& cls, const BeliefState& belief, const ClassState& state,
            std::size_t t);

  bool contains(std::size_t start_time, std::size_t m) const;
  const RegistryEntry& entry(std::size_t start_time, std::size_t m) const;
  std::size_t size() const { return entries_.size(); }
  std::size_t m_max() const { return m_max_; }
  std::size_t time() const { return time_; }

 private:
  std::size_t m_max_;
  std::size_t time_ = 0;
  std::map<std::pair<std::size_t, std::size_t>, RegistryEntry> entries_;
};

ExpeditionRegistry registry_step(ExpeditionRegistry registry, const EnvironmentClass& cls,
                                 const BeliefState& belief, const ClassState& state,
                                 std::size_t t);

/// a^IG_{m,k}(h_{<t}): the (t-k, m) expedition evaluated on the realized
/// fragment h_{t-k:t-1}. Requires k < min(m, t).
ActionId exploratory_action(const ExpeditionRegistry& registry, const History& history,
                            const Alphabets& alphabets, std::size_t t, std::size_t m,
                            std::size_t k);

}  // namespace inqlab
