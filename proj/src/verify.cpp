#include "inqlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "inqlab/config.hpp"
#include "inqlab/errors.hpp"
#include "inqlab/expedition.hpp"
#include "inqlab/harness.hpp"
#include "inqlab/planner.hpp"
#include "inqlab/policy.hpp"

namespace inqlab {
namespace {

std::size_t uniform_int(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::shared_ptr<const Alphabets> alphabets_for(std::size_t actions, std::size_t percepts) {
  std::vector<std::string> names;
  for (std::size_t a = 0; a < actions; ++a) names.push_back("a" + std::to_string(a));
  if (percepts % 2 == 0)
    return std::make_shared<Alphabets>(names, percepts / 2,
                                       std::vector<Rational>{Rational::of(0), Rational::of(1)});
  return std::make_shared<Alphabets>(names, percepts, std::vector<Rational>{Rational::of(0)});
}

// Random distribution with some exact zeros, so that zero-probability
// branches get exercised.
std::vector<double> random_distribution(Rng& rng, std::size_t n) {
  std::vector<double> p(n, 0.0);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  double total = 0.0;
  for (auto& x : p) {
    if (uniform01(rng) < 0.2) continue;
    x = u(rng);
    total += x;
  }
  if (total == 0.0) {
    p[uniform_int(rng, 0, n - 1)] = 1.0;
    return p;
  }
  for (auto& x : p) x /= total;
  return p;
}

std::vector<double> random_prior(Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(n);
  for (auto& x : w) x = u(rng);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= total;
  // Renormalize against the class constructor's tolerance.
  w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
  return w;
}

PropertyReport property(std::string name, std::size_t n, double worst, bool pass) {
  return PropertyReport{std::move(name), n, worst, pass};
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyReport& p) { return p.pass; });
}

void print_report(std::ostream& out, const SuiteReport& report) {
  for (const auto& p : report.properties)
    fmt::print(out, "suite={} property={} instances={} max_error={:.6g} verdict={}\n",
               report.suite, p.name, p.instances, p.max_error, p.pass ? "PASS" : "FAIL");
}

RandomInstance random_instance(Rng& rng, const InstanceLimits& limits) {
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> shapes;
  for (std::size_t a = 1; a <= limits.max_actions; ++a)
    for (std::size_t p = 2; p <= limits.max_percepts; ++p)
      for (std::size_t m = 1; m <= limits.max_depth; ++m)
        if (bruteforce_tree_count(a, p, m) <= limits.max_trees) shapes.emplace_back(a, p, m);
  if (shapes.empty()) throw ConfigError("instance limits admit no shape");
  const auto [actions, percepts, depth] = shapes[uniform_int(rng, 0, shapes.size() - 1)];

  const auto alphabets = alphabets_for(actions, percepts);
  const std::size_t members = uniform_int(rng, limits.min_members, limits.max_members);
  const std::size_t states = uniform_int(rng, 1, limits.max_states);
  std::vector<std::shared_ptr<const Environment>> envs;
  for (std::size_t i = 0; i < members; ++i) {
    std::vector<double> dists;
    std::vector<StateId> succ;
    for (std::size_t s = 0; s < states; ++s)
      for (std::size_t a = 0; a < actions; ++a) {
        const auto d = random_distribution(rng, percepts);
        dists.insert(dists.end(), d.begin(), d.end());
        for (std::size_t p = 0; p < percepts; ++p) succ.push_back(uniform_int(rng, 0, states - 1));
      }
    envs.push_back(std::make_shared<TabularEnvironment>("m" + std::to_string(i), alphabets,
                                                        states, std::move(dists),
                                                        std::move(succ)));
  }
  auto cls = std::make_shared<EnvironmentClass>(std::move(envs), random_prior(rng, members));

  BeliefState belief(cls->prior());
  ClassState state = cls->initial_state();
  const std::size_t prefix = uniform_int(rng, 0, limits.max_prefix);
  for (std::size_t s = 0; s < prefix; ++s) {
    const auto a = static_cast<ActionId>(uniform_int(rng, 0, actions - 1));
    const auto xi = mixture_predict(belief, *cls, state, a);
    const auto p = static_cast<PerceptId>(sample_index(xi, rng));
    belief = posterior_update(belief, *cls, state, a, p);
    cls->advance(state, a, p);
  }
  return RandomInstance{std::move(cls), std::move(belief), std::move(state), depth};
}

std::shared_ptr<const EnvironmentClass> make_planner_toy() {
  // States s0, s1; percepts are rewards 0/1 under one observation. In s0, a0
  // pays a Bernoulli reward and stays, a1 pays nothing and moves to s1. In
  // s1, a0 pays a richer Bernoulli reward and a1 pays nothing; both stay.
  const auto alphabets = std::make_shared<Alphabets>(
      std::vector<std::string>{"a0", "a1"}, 1,
      std::vector<Rational>{Rational::of(0), Rational::of(1)});
  const auto member = [&](double s0_a0, double s1_a0, const std::string& name) {
    std::vector<double> d = {1 - s0_a0, s0_a0, 1, 0, 1 - s1_a0, s1_a0, 1, 0};
    std::vector<StateId> succ = {0, 0, 1, 1, 1, 1, 1, 1};
    return std::make_shared<TabularEnvironment>(name, alphabets, 2, std::move(d),
                                                std::move(succ));
  };
  std::vector<std::shared_ptr<const Environment>> envs = {member(0.2, 0.9, "A"),
                                                          member(0.4, 0.7, "B")};
  return std::make_shared<EnvironmentClass>(std::move(envs), std::vector<double>{0.5, 0.5});
}

std::vector<std::vector<double>> convergence_bandit_arms() {
  return {{0.25, 0.75}, {0.75, 0.25}, {0.5, 0.5}, {0.9, 0.9}};
}

SuiteReport verify_lemma1(std::size_t instances, std::uint64_t seed) {
  Rng rng(split_seed(seed, 0, "instances"));
  Rng tree_rng(split_seed(seed, 0, "trees"));
  double worst = 0.0;
  for (std::size_t i = 0; i < instances; ++i) {
    const RandomInstance inst = random_instance(rng);
    const auto& al = inst.cls->alphabets();
    ExpeditionTree tree(inst.depth, al.num_actions(), al.num_percepts());
    // Every node, prescribed or not, gets a random action.
    std::vector<ExpeditionTree::Node> frontier = {tree.root()};
    while (!frontier.empty()) {
      const auto n = frontier.back();
      frontier.pop_back();
      tree.set_action(n, static_cast<ActionId>(uniform_int(tree_rng, 0, al.num_actions() - 1)));
      if (n.level + 1 < inst.depth)
        for (ActionId a = 0; a < al.num_actions(); ++a)
          for (PerceptId p = 0; p < al.num_percepts(); ++p) frontier.push_back(tree.child(n, a, p));
    }
    const double direct = expedition_value_bruteforce(*inst.cls, inst.belief, inst.state, tree);
    const double kl = expedition_value_kl_form(*inst.cls, inst.belief, inst.state, tree);
    worst = std::max(worst, std::abs(direct - kl));
  }
  return SuiteReport{"lemma1", {property("direct_vs_kl_form", instances, worst, worst < 1e-9)}};
}

SuiteReport verify_martingale() {
  const auto cls = make_bandit_class({{0.3, 0.8}, {0.6, 0.45}});
  const std::size_t truth = 0;
  // Histories of length 0..4 are checked.
  const std::size_t max_len = 5;
  const auto& al = cls->alphabets();
  double worst = 0.0;
  std::size_t checks = 0;

  // Every action sequence is enumerated, so every deterministic policy's
  // histories are covered.
  std::function<void(const BeliefState&, const ClassState&, std::size_t)> walk =
      [&](const BeliefState& belief, const ClassState& state, std::size_t len) {
        if (len == max_len) return;
        const double z = true_env_weight_reciprocal(belief, truth);
        for (ActionId a = 0; a < al.num_actions(); ++a) {
          std::vector<double> mu(al.num_percepts());
          cls->member(truth).percept_distribution(cls->member_state(state, truth), a, mu);
          double expected = 0.0;
          for (PerceptId p = 0; p < al.num_percepts(); ++p) {
            if (mu[p] == 0.0) continue;
            const BeliefState next = posterior_update(belief, *cls, state, a, p);
            expected += mu[p] * true_env_weight_reciprocal(next, truth);
            ClassState next_state = state;
            cls->advance(next_state, a, p);
            walk(next, next_state, len + 1);
          }
          worst = std::max(worst, std::abs(expected - z));
          ++checks;
        }
      };
  walk(BeliefState(cls->prior()), cls->initial_state(), 0);
  return SuiteReport{"martingale", {property("expected_z_equals_previous", checks, worst,
                                             worst < 1e-9)}};
}

SuiteReport verify_dp_vs_bruteforce(std::size_t instances, std::uint64_t seed) {
  // Same stream as verify_lemma1, so both suites see the same instances.
  Rng rng(split_seed(seed, 0, "instances"));
  double worst = 0.0;
  std::size_t mismatched = 0;
  for (std::size_t i = 0; i < instances; ++i) {
    const RandomInstance inst = random_instance(rng);
    const Expedition brute = best_expedition_bruteforce(*inst.cls, inst.belief, inst.state,
                                                        inst.depth);
    const Expedition dp = best_expedition_dp(*inst.cls, inst.belief, inst.state, inst.depth,
                                             inst.depth);
    worst = std::max(worst, std::abs(brute.value - dp.value));
    if (!same_prescriptions(brute.tree, dp.tree, *inst.cls, inst.belief, inst.state))
      ++mismatched;
  }
  return SuiteReport{"dp-vs-bruteforce",
                     {property("value_agreement", instances, worst, worst < 1e-9),
                      property("argmax_agreement", instances, static_cast<double>(mismatched),
                               mismatched == 0)}};
}

SuiteReport verify_rho_beta_bounds(std::size_t states, std::uint64_t seed) {
  Rng rng(split_seed(seed, 0, "rho-beta"));
  constexpr std::size_t kSteps = 5;
  double worst_rho = 0.0;   // max of rho - cap
  double worst_beta = 0.0;  // max of beta - 1
  double worst_shift = 0.0;
  std::size_t shift_mismatches = 0;
  std::size_t checked = 0;

  while (checked < states) {
    InstanceLimits shape;
    shape.max_depth = 1;
    shape.max_trees = ~std::uint64_t{0};
    RandomInstance inst = random_instance(rng, shape);
    const std::size_t m_max = uniform_int(rng, 1, 3);
    const double eta = std::exp(std::uniform_real_distribution<double>(-3.0, 3.0)(rng));
    const auto& al = inst.cls->alphabets();
    ExpeditionRegistry registry(m_max);
    std::map<std::pair<std::size_t, std::size_t>, double> rho_at_start;  // (t, m) -> rho(t,m,0)

    for (std::size_t t = 1; t <= kSteps && checked < states; ++t, ++checked) {
      registry.step(*inst.cls, inst.belief, inst.state, t);
      for (std::size_t m = 1; m <= m_max; ++m) {
        rho_at_start[{t, m}] = rho(registry, t, m, 0, eta);
        for (std::size_t k = 0; k < std::min(m, t); ++k) {
          const double r = rho(registry, t, m, k, eta);
          worst_rho = std::max(worst_rho, r - rho_cap(m));
          if (r < 0.0) worst_rho = std::max(worst_rho, -r);
          const double shifted = rho_at_start.at({t - k, m});
          if (r != shifted) {
            ++shift_mismatches;
            worst_shift = std::max(worst_shift, std::abs(r - shifted));
          }
        }
      }
      const double b = beta(registry, t, m_max, eta);
      worst_beta = std::max(worst_beta, b - 1.0);

      const auto a = static_cast<ActionId>(uniform_int(rng, 0, al.num_actions() - 1));
      const auto xi = mixture_predict(inst.belief, *inst.cls, inst.state, a);
      const auto p = static_cast<PerceptId>(sample_index(xi, rng));
      inst.belief = posterior_update(inst.belief, *inst.cls, inst.state, a, p);
      inst.cls->advance(inst.state, a, p);
    }
  }
  return SuiteReport{"rho-beta-bounds",
                     {property("rho_within_cap", checked, std::max(0.0, worst_rho),
                               worst_rho <= 0.0),
                      property("beta_at_most_one", checked, std::max(0.0, worst_beta),
                               worst_beta <= 0.0),
                      property("rho_time_shift_exact", checked, worst_shift,
                               shift_mismatches == 0)}};
}

SuiteReport verify_planner_consistency(std::size_t trials, std::size_t samples,
                                       std::uint64_t seed) {
  const auto cls = make_planner_toy();
  const BeliefState belief(cls->prior());
  const ClassState state = cls->initial_state();
  constexpr std::size_t kHorizon = 2;
  constexpr double kGamma = 0.99;
  const PlanResult oracle = expectimax(*cls, belief, state, kHorizon, kGamma);

  std::size_t agree = 0;
  double value_sum = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng(split_seed(seed, i, "planner-consistency"));
    const PlanResult r = rho_uct(*cls, state, {ObjectiveKind::ExternalReward, &belief}, samples,
                                 kHorizon, kGamma, rng);
    if (r.action == oracle.action) ++agree;
    value_sum += r.value;
  }
  const double mean_gap = std::abs(value_sum / static_cast<double>(trials) - oracle.value);
  const std::size_t needed = (trials * 95 + 99) / 100;
  return SuiteReport{"planner-consistency",
                     {property("root_action_agreement", trials,
                               static_cast<double>(trials - agree), agree >= needed),
                      property("mean_value_gap", trials, mean_gap, mean_gap <= 0.02)}};
}

SuiteReport verify_convergence(std::size_t seeds, std::size_t steps, std::uint64_t seed) {
  ExperimentConfig config;
  config.environment.type = EnvironmentType::Bandit;
  config.environment.arms = convergence_bandit_arms();
  config.environment.true_index = 0;
  config.agent.kind = AgentKind::Inq;
  config.agent.eta = 1.0;
  config.agent.gamma = 0.99;
  config.agent.m_max = 3;
  config.agent.planner.kind = PlannerKind::Exact;
  config.agent.planner.horizon = 3;
  config.runs = seeds;
  config.steps = steps;
  config.seed = seed;
  config.pred_error_m = 2;
  config.validate();

  const ExperimentSetup setup = make_setup(config.environment);
  std::vector<std::size_t> indices(seeds);
  std::iota(indices.begin(), indices.end(), 0);
  const auto runs = run_batch(config, setup, indices, Execution::Parallel);
  const MetricsSeries m = aggregate(runs);

  const std::size_t tail = std::min<std::size_t>(1000, steps);
  double beta_max = 0.0, err_max = 0.0;
  for (std::size_t i = steps - tail; i < steps; ++i) {
    beta_max = std::max(beta_max, m.beta[i]);
    err_max = std::max(err_max, m.pred_error[i]);
  }
  std::size_t identified = 0;
  for (const auto& r : runs)
    if (r.steps.back().w_true > 0.9) ++identified;
  const std::size_t needed = (seeds * 18 + 19) / 20;
  return SuiteReport{"convergence",
                     {property("beta_tail_below_0.05", tail, beta_max, beta_max < 0.05),
                      property("pred_error_tail_below_0.02", tail, err_max, err_max < 0.02),
                      property("w_true_final_above_0.9", seeds,
                               static_cast<double>(seeds - identified), identified >= needed)}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"lemma1",          "martingale",
                                                 "dp-vs-bruteforce", "rho-beta-bounds",
                                                 "planner-consistency", "convergence"};
  return names;
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "lemma1") return verify_lemma1(200, seed);
  if (name == "martingale") return verify_martingale();
  if (name == "dp-vs-bruteforce") return verify_dp_vs_bruteforce(200, seed);
  if (name == "rho-beta-bounds") return verify_rho_beta_bounds(10000, seed);
  if (name == "planner-consistency") return verify_planner_consistency(100, 100000, seed);
  if (name == "convergence") return verify_convergence(20, 10000, seed);
  throw ConfigError("unknown suite '" + name + "'");
}

}  // namespace inqlab
