// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include <fmt/format.h>

#include "inqlab/config.hpp"
#include "inqlab/harness.hpp"
#include "inqlab/plot.hpp"
#include "inqlab/verify.hpp"

using namespace inqlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome from_report(const SuiteReport& r) {
  std::string detail;
  for (const auto& p : r.properties)
    detail += fmt::format("{}={:.3g}{} ", p.name, p.max_error, p.pass ? "" : "(!)");
  return {r.passed(), detail};
}

bool criterion(int number, const std::string& title, double budget_seconds,
               const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs <= budget_seconds;
  const bool pass = out.pass && in_time;
  fmt::print("criterion {} [{}]: {} | {}| {:.1f}s of {:.0f}s{}\n", number, title,
             pass ? "PASS" : "FAIL", out.detail, secs, budget_seconds,
             in_time ? "" : " (over budget)");
  std::fflush(stdout);
  return pass;
}

ExperimentConfig grid_experiment(int size, Cell dispenser, AgentKind agent) {
  ExperimentConfig c;
  c.environment.type = EnvironmentType::Gridworld;
  c.environment.grid.width = size;
  c.environment.grid.height = size;
  c.environment.grid.dispense_probability = 0.75;
  c.environment.grid.start = Cell{0, 0};
  c.environment.grid.dispenser = dispenser;
  c.agent.kind = agent;
  c.agent.eta = 1.0;
  c.agent.gamma = 0.99;
  c.agent.planner.kind = PlannerKind::Mcts;
  c.agent.planner.samples = 600;
  c.agent.planner.horizon = 6;
  c.runs = 20;
  c.steps = 5000;
  c.seed = 2024;
  c.out = fmt::format("acceptance_out/grid{}/{}", size, to_string(agent));
  return c;
}

struct Final {
  double mean;
  double sd;
};

Final final_reward(const ExperimentConfig& c) {
  const auto r = run_experiment(c);
  return {r.metrics.mean_cum_avg_reward.back(), r.metrics.sd_cum_avg_reward.back()};
}

}  // namespace

int main() {
  constexpr std::uint64_t kSeed = 0;
  int failures = 0;

  failures += !criterion(1, "expedition value equals its KL form", 30,
                         [] { return from_report(verify_lemma1(200, kSeed)); });
  failures += !criterion(2, "reciprocal true weight is a martingale", 10,
                         [] { return from_report(verify_martingale()); });
  failures += !criterion(3, "dynamic programming matches brute force", 60,
                         [] { return from_report(verify_dp_vs_bruteforce(200, kSeed)); });
  failures += !criterion(4, "rho and beta bounds", 30,
                         [] { return from_report(verify_rho_beta_bounds(10000, kSeed)); });
  failures += !criterion(5, "exploration vanishes and predictions converge", 300,
                         [] { return from_report(verify_convergence(20, 10000, kSeed)); });
  failures += !criterion(6, "rhoUCT agrees with expectimax", 300, [] {
    return from_report(verify_planner_consistency(100, 100000, kSeed));
  });
  failures += !criterion(7, "grid-world comparison", 3600, [] {
    const Final inq10 = final_reward(grid_experiment(10, {7, 7}, AgentKind::Inq));
    const Final be10 = final_reward(grid_experiment(10, {7, 7}, AgentKind::BayesExp));
    const Final inq20 = final_reward(grid_experiment(20, {15, 15}, AgentKind::Inq));
    const Final th20 = final_reward(grid_experiment(20, {15, 15}, AgentKind::Thompson));

    std::vector<Curve> curves;
    for (const char* dir : {"acceptance_out/grid20/inq", "acceptance_out/grid20/thompson"})
      curves.push_back(load_metrics_curve(std::string(dir) + "/metrics.csv"));
    save_reward_svg("acceptance_out/grid20/reward_curve.svg", curves);

    const bool comparable = std::abs(inq10.mean - be10.mean) <= 2.0 * be10.sd;
    const double gap = inq20.mean - th20.mean;
    const bool ahead = gap > 0.0 && gap > th20.sd;
    return Outcome{comparable && ahead,
                   fmt::format("10x10 inq={:.4f} bayesexp={:.4f}+-{:.4f} (within 2sd: {}); "
                               "20x20 inq={:.4f} thompson={:.4f}+-{:.4f} gap={:.4f} "
                               "(exceeds 1sd: {}) ",
                               inq10.mean, be10.mean, be10.sd, comparable ? "yes" : "no",
                               inq20.mean, th20.mean, th20.sd, gap, ahead ? "yes" : "no")};
  });

  fmt::print("acceptance: {} of 7 criteria passed\n", 7 - failures);
  return failures == 0 ? 0 : 1;
}
