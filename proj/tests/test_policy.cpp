#include "doctest.h"

#include <cmath>

#include "inqlab/errors.hpp"
#include "inqlab/policy.hpp"
#include "inqlab/verify.hpp"

using namespace inqlab;

TEST_CASE("rho caps") {
  CHECK(rho_cap(1) == 0.5);
  CHECK(rho_cap(2) == doctest::Approx(1.0 / 12));
  CHECK(rho_cap(3) == doctest::Approx(1.0 / 36));
  CHECK(rho_value(1, 0.0, 1.0) == 0.0);
  CHECK(rho_value(1, 0.6931471805599453, 1.0) == 0.5);
  CHECK(rho_value(2, 0.01, 1.0) == 0.01);
  CHECK(rho_value(2, 0.01, 2.0) == 0.02);
}

TEST_CASE("beta bounds") {
  // The full sum over all m is 1; truncation leaves the tail to exploitation.
  double total = 0.0;
  for (std::size_t m = 1; m <= 100000; ++m) total += static_cast<double>(m) * rho_cap(m);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(beta_bound(6, 100) == doctest::Approx(0.8571428571428572));
  CHECK(beta_bound(6, 1) == doctest::Approx(0.6342460317460318));
  CHECK(beta_bound(6, 1) < beta_bound(6, 2));
}

TEST_CASE("effective horizon") {
  CHECK(effective_horizon(0.99, 0.05) == 299);
  CHECK(effective_horizon(0.5, 0.5) == 1);
  CHECK(effective_horizon(0.0, 0.05) == 1);
  CHECK(std::pow(0.99, 299) <= 0.05);
  CHECK(std::pow(0.99, 298) > 0.05);
  CHECK_THROWS_AS(effective_horizon(1.0, 0.05), ConfigError);
}

TEST_CASE("exploitation examples") {
  const auto dominant = make_bandit_class({{0.0, 1.0}});
  const auto r = exploit_action(*dominant, BeliefState(dominant->prior()),
                                dominant->initial_state(), 0.99, 0.05, 4);
  CHECK(r.action == 1);
  CHECK(r.value == doctest::Approx(1.0));

  const auto nothing = make_bandit_class({{0.0, 0.0, 0.0}});
  const auto z = exploit_action(*nothing, BeliefState(nothing->prior()), nothing->initial_state(),
                                0.99, 0.05, 3);
  CHECK(z.action == 0);
  CHECK(z.value == 0.0);
}

TEST_CASE("expectimax matches the hand-computed toy") {
  const auto toy = make_planner_toy();
  const BeliefState b(toy->prior());
  const auto two = expectimax(*toy, b, toy->initial_state(), 2, 0.99);
  CHECK(two.action == 1);
  CHECK(two.value == doctest::Approx(0.39798994974874374).epsilon(1e-12));
  // Myopically the paying arm looks better.
  const auto one = expectimax(*toy, b, toy->initial_state(), 1, 0.99);
  CHECK(one.action == 0);
  CHECK(one.value == doctest::Approx(0.3));
}

TEST_CASE("inq config validation") {
  InqConfig c;
  CHECK_NOTHROW(c.validate());
  c.eta = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = InqConfig{};
  c.gamma = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = InqConfig{};
  c.m_max = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = InqConfig{};
  c.epsilon_trunc = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = InqConfig{};
  c.m_max = 7;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.planner.kind = PlannerKind::Exact;
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("action distributions lay intervals out in (m, k) order") {
  const auto cls = make_bandit_class({{1.0, 0.5}, {0.0, 0.5}});
  ExpeditionRegistry reg(2);
  BeliefState b(cls->prior());
  reg.step(*cls, b, cls->initial_state(), 1);
  History h;
  const auto dist = inq_action_distribution(reg, h, cls->alphabets(), 1, 1.0, 1);
  // (1,0) carries ln 2 capped at 1/2, (2,0) carries ln 2 capped at 1/12.
  REQUIRE(dist.choices.size() == 3);
  CHECK(dist.choices[0].provenance == Provenance::expedition(1, 0));
  CHECK(dist.choices[0].probability == 0.5);
  CHECK(dist.choices[0].action == 0);
  CHECK(dist.choices[1].provenance == Provenance::expedition(2, 0));
  CHECK(dist.choices[1].probability == doctest::Approx(1.0 / 12));
  CHECK(dist.choices[2].provenance.exploit);
  CHECK(dist.total() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dist.select(0.0).provenance == Provenance::expedition(1, 0));
  CHECK(dist.select(0.49).provenance == Provenance::expedition(1, 0));
  CHECK(dist.select(0.5).provenance == Provenance::expedition(2, 0));
  CHECK(dist.select(0.99).provenance.exploit);
  CHECK(dist.probability_of(0) == doctest::Approx(0.5 + 1.0 / 12));
  CHECK(dist.probability_of(1) == doctest::Approx(1.0 - 0.5 - 1.0 / 12));
  CHECK(dist.select(0.0).provenance.label() == "1-0");
  CHECK(dist.choices[2].provenance.label() == "exploit");
}

TEST_CASE("no information means pure exploitation") {
  const auto cls = make_bandit_class({{0.4, 0.6}});
  ExpeditionRegistry reg(3);
  reg.step(*cls, BeliefState(cls->prior()), cls->initial_state(), 1);
  const auto dist = inq_action_distribution(reg, History{}, cls->alphabets(), 1, 1.0, 1);
  REQUIRE(dist.choices.size() == 1);
  CHECK(dist.choices[0].probability == 1.0);
  CHECK(dist.choices[0].action == 1);
  CHECK(beta(reg, 1, 3, 1.0) == 0.0);
}

TEST_CASE("sampled actions follow the analytic distribution") {
  Rng rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const RandomInstance inst = random_instance(rng);
    const auto& al = inst.cls->alphabets();
    ExpeditionRegistry reg(3);
    reg.step(*inst.cls, inst.belief, inst.state, 1);
    const auto dist = inq_action_distribution(reg, History{}, al, 1, 5.0, 0);
    CHECK(dist.total() == doctest::Approx(1.0).epsilon(1e-12));

    const int n = 100000;
    std::vector<int> counts(al.num_actions(), 0);
    for (int i = 0; i < n; ++i) ++counts[dist.select(uniform01(rng)).action];
    for (ActionId a = 0; a < al.num_actions(); ++a) {
      const double p = dist.probability_of(a);
      const double sd = std::sqrt(n * p * (1 - p));
      CHECK(std::abs(counts[a] - n * p) <= 3 * sd + 1e-9);
    }
  }
}

TEST_CASE("rho and beta stay in bounds and shift exactly") {
  const auto report = verify_rho_beta_bounds(1500, 4);
  for (const auto& p : report.properties) {
    INFO(p.name);
    CHECK(p.pass);
  }
}
