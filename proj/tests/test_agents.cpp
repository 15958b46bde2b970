#include "doctest.h"

#include <cmath>

#include "inqlab/agents.hpp"
#include "inqlab/baselines.hpp"
#include "inqlab/errors.hpp"
#include "inqlab/verify.hpp"

using namespace inqlab;

namespace {

PlannerSettings exact_planner(std::size_t horizon) {
  PlannerSettings s;
  s.kind = PlannerKind::Exact;
  s.horizon = horizon;
  return s;
}

InqConfig exact_inq(std::size_t m_max, std::size_t horizon, std::uint64_t seed) {
  InqConfig c;
  c.m_max = m_max;
  c.planner = exact_planner(horizon);
  c.rng_seed = seed;
  return c;
}

// Arm 0 pays 0.9 under both members; arm 1 is a certain win or a certain loss.
// The informative arm is myopically worse, and stays worse up to horizon 6.
std::shared_ptr<const EnvironmentClass> trap_bandit() {
  return make_bandit_class({{0.9, 1.0}, {0.9, 0.0}});
}

// Plays the agent against member `truth` of its own class.
void step_against(Agent& agent, const Environment& truth, StateId& state, Rng& rng,
                  ActionId action) {
  std::vector<double> d(truth.alphabets().num_percepts());
  truth.percept_distribution(state, action, d);
  const auto p = static_cast<PerceptId>(sample_index(d, rng));
  state = truth.transition(state, action, p);
  agent.observe(action, p);
}

}  // namespace

TEST_CASE("agents keep time, history and belief in step") {
  const auto cls = make_bandit_class({{0.2, 0.8}, {0.8, 0.2}});
  GreedyAgent agent(cls, BaselineConfig{});
  CHECK(agent.time() == 1);
  const PerceptId win = cls->alphabets().percept(kWin, 1);
  agent.observe(1, win);
  CHECK(agent.time() == 2);
  CHECK(agent.history().length() == 1);
  CHECK(agent.belief().weight(0) == doctest::Approx(0.8));
}

TEST_CASE("exact inq samples from its analytic distribution") {
  const auto cls = make_bandit_class({{1.0, 0.5}, {0.0, 0.5}});
  InqAgent agent(cls, exact_inq(2, 2, 0));
  const Decision d = agent.act();
  const auto& dist = agent.last_distribution();
  CHECK(dist.total() == doctest::Approx(1.0));
  CHECK(d.beta == doctest::Approx(0.5 + 1.0 / 12));
  CHECK(d.rho_max == 0.5);
  CHECK(dist.probability_of(d.action) > 0.0);
  CHECK(agent.registry().size() == 2);
}

TEST_CASE("inq matches greedy when there is nothing to learn") {
  const auto cls = make_bandit_class({{0.3, 0.6, 0.5}});
  for (PlannerKind kind : {PlannerKind::Exact, PlannerKind::Mcts}) {
    InqConfig ic;
    ic.m_max = 3;
    ic.planner.kind = kind;
    ic.planner.horizon = 3;
    ic.planner.samples = 200;
    ic.rng_seed = 42;
    BaselineConfig bc;
    bc.planner = ic.planner;
    bc.rng_seed = 42;
    InqAgent inq(cls, ic);
    GreedyAgent greedy(cls, bc);
    Rng r1(1), r2(1);
    StateId s1 = 0, s2 = 0;
    for (int t = 0; t < 50; ++t) {
      const Decision a = inq.act();
      const Decision b = greedy.act();
      CHECK(a.action == b.action);
      CHECK(a.beta == 0.0);
      CHECK(a.provenance == "exploit");
      step_against(inq, cls->member(0), s1, r1, a.action);
      step_against(greedy, cls->member(0), s2, r2, b.action);
    }
  }
}

TEST_CASE("greedy never identifies the trap bandit but inq does") {
  const auto cls = trap_bandit();
  BaselineConfig bc;
  bc.planner = exact_planner(6);
  GreedyAgent greedy(cls, bc);
  InqAgent inq(cls, exact_inq(3, 6, 5));
  Rng r1(2), r2(2);
  StateId s1 = 0, s2 = 0;
  for (int t = 0; t < 60; ++t) {
    const Decision g = greedy.act();
    CHECK(g.action == 0);
    step_against(greedy, cls->member(0), s1, r1, g.action);
    step_against(inq, cls->member(0), s2, r2, inq.act().action);
  }
  CHECK(greedy.belief().weight(0) == 0.5);
  CHECK(inq.belief().weight(0) == 1.0);
}

TEST_CASE("sampled inq explores and then settles") {
  const auto cls = trap_bandit();
  InqConfig c;
  c.m_max = 3;
  c.planner.horizon = 3;
  c.planner.samples = 300;
  c.rng_seed = 9;
  InqAgent agent(cls, c);
  Rng rng(4);
  StateId s = 0;
  bool explored = false;
  for (int t = 0; t < 60; ++t) {
    const Decision d = agent.act();
    CHECK(d.beta <= 1.0);
    CHECK(d.rho_max <= 0.5);
    if (d.explored) {
      explored = true;
      CHECK(d.k < d.m);
      CHECK(d.provenance == std::to_string(d.m) + "-" + std::to_string(d.k));
    }
    step_against(agent, cls->member(0), s, rng, d.action);
  }
  CHECK(explored);
  CHECK(agent.belief().is_point_mass());
  CHECK(agent.act().beta == 0.0);
}

TEST_CASE("bayesexp explores the informative arm first") {
  const auto cls = make_bandit_class({{0.5, 1.0}, {0.5, 0.0}});
  BaselineConfig c;
  c.kind = BaselineKind::BayesExp;
  c.planner = exact_planner(1);
  c.ig_threshold = 0.1;
  BayesExpAgent agent(cls, c);
  const Decision d = agent.act();
  CHECK(d.action == 1);
  CHECK(d.provenance == "bayesexp(burst)");

  // Identified: only exploitation remains.
  Rng rng(0);
  StateId s = 0;
  step_against(agent, cls->member(0), s, rng, d.action);
  for (int t = 0; t < 10; ++t) {
    const Decision e = agent.act();
    CHECK(e.provenance == "bayesexp(exploit)");
    CHECK(e.action == 1);
    step_against(agent, cls->member(0), s, rng, e.action);
  }
}

TEST_CASE("bayesexp bursts last exactly one horizon") {
  const auto cls = make_bandit_class({{0.3, 0.7}, {0.7, 0.3}, {0.5, 0.5}});
  BaselineConfig c;
  c.kind = BaselineKind::BayesExp;
  c.planner.horizon = 4;
  c.planner.samples = 100;
  c.ig_threshold = 1e-6;
  BayesExpAgent agent(cls, c);
  Rng rng(6);
  StateId s = 0;
  std::vector<std::string> provenance;
  for (int t = 0; t < 40; ++t) {
    const Decision d = agent.act();
    provenance.push_back(d.provenance);
    step_against(agent, cls->member(2), s, rng, d.action);
  }
  // With a tiny threshold every step belongs to a burst; bursts start every 4 steps.
  for (std::size_t i = 0; i < provenance.size(); ++i) CHECK(provenance[i] == "bayesexp(burst)");

  BaselineConfig never = c;
  never.ig_threshold = 100.0;
  BayesExpAgent lazy(cls, never);
  for (int t = 0; t < 5; ++t) CHECK(lazy.act().provenance == "bayesexp(exploit)");
}

TEST_CASE("bayesexp burst bookkeeping") {
  const auto cls = make_bandit_class({{0.3, 0.7}, {0.7, 0.3}});
  BaselineConfig c;
  c.kind = BaselineKind::BayesExp;
  c.planner.horizon = 5;
  c.planner.samples = 100;
  c.ig_threshold = 1e-6;
  BayesExpAgent agent(cls, c);
  Rng rng(1);
  StateId s = 0;
  std::vector<std::size_t> remaining;
  for (int t = 0; t < 10; ++t) {
    const Decision d = agent.act();
    remaining.push_back(agent.burst_remaining());
    step_against(agent, cls->member(0), s, rng, d.action);
  }
  CHECK(remaining == std::vector<std::size_t>{4, 3, 2, 1, 0, 4, 3, 2, 1, 0});
}

TEST_CASE("thompson with a degenerate posterior plans against that member") {
  const auto cls = make_bandit_class({{1.0, 0.0}, {0.0, 1.0}});
  BaselineConfig c;
  c.kind = BaselineKind::Thompson;
  c.planner = exact_planner(2);
  c.resample_horizon = 1;
  ThompsonAgent agent(cls, c);
  const PerceptId win = cls->alphabets().percept(kWin, 1);
  agent.observe(0, win);  // falsifies member 1
  for (int t = 0; t < 20; ++t) {
    const Decision d = agent.act();
    CHECK(agent.sampled_member() == 0u);
    CHECK(d.action == 0);
    CHECK(d.provenance == "thompson(0)");
  }
}

TEST_CASE("thompson samples members in proportion to the posterior") {
  const auto cls = make_bandit_class({{0.2, 0.8}, {0.8, 0.2}});
  BaselineConfig c;
  c.kind = BaselineKind::Thompson;
  c.planner = exact_planner(1);
  c.resample_horizon = 1;
  ThompsonAgent agent(cls, c);
  const int n = 10000;
  int first = 0;
  for (int i = 0; i < n; ++i) {
    agent.act();
    if (agent.sampled_member() == 0u) ++first;
  }
  CHECK(std::abs(first - 5000) <= 3 * 50);
}

TEST_CASE("thompson holds its sample for the resample horizon") {
  const auto cls = make_bandit_class({{0.2, 0.8}, {0.8, 0.2}, {0.5, 0.5}});
  BaselineConfig c;
  c.kind = BaselineKind::Thompson;
  c.planner = exact_planner(1);
  c.resample_horizon = 4;
  ThompsonAgent agent(cls, c);
  std::vector<std::size_t> samples;
  for (int i = 0; i < 40; ++i) {
    agent.act();
    samples.push_back(*agent.sampled_member());
  }
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (i % 4 != 0) CHECK(samples[i] == samples[i - 1]);
}

TEST_CASE("baseline config validation") {
  BaselineConfig c;
  c.ig_threshold = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = BaselineConfig{};
  c.gamma = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK(exploit_horizon(0.99, 0.05, PlannerSettings{}) == 6);
}
