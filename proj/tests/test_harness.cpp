#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

#include "inqlab/config.hpp"
#include "inqlab/errors.hpp"
#include "inqlab/harness.hpp"
#include "inqlab/plot.hpp"

using namespace inqlab;

namespace {

ExperimentConfig small_grid(AgentKind agent) {
  ExperimentConfig c;
  c.environment.type = EnvironmentType::Gridworld;
  c.environment.grid.width = 4;
  c.environment.grid.height = 4;
  c.environment.grid.dispenser = Cell{2, 2};
  c.agent.kind = agent;
  c.agent.planner.samples = 60;
  c.agent.planner.horizon = 4;
  c.runs = 4;
  c.steps = 30;
  c.seed = 123;
  return c;
}

std::string trajectory_text(const std::vector<RunResult>& runs) {
  std::ostringstream out;
  write_trajectory_csv(out, runs);
  write_diagnostics_csv(out, runs);
  return out.str();
}

std::vector<std::size_t> indices(std::size_t from, std::size_t to) {
  std::vector<std::size_t> v(to - from);
  std::iota(v.begin(), v.end(), from);
  return v;
}

std::string temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("inqlab_test_" + name);
  std::filesystem::remove_all(dir);
  return dir.string();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("one step gives one row") {
  auto c = small_grid(AgentKind::Greedy);
  c.steps = 1;
  c.runs = 1;
  const auto setup = make_setup(c.environment);
  const auto runs = run_batch(c, setup, indices(0, 1), Execution::Serial);
  std::ostringstream out;
  write_trajectory_csv(out, runs);
  const std::string text = out.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(text.rfind("run_id,t,action_idx,obs_idx,reward,explored_flag,m,k,provenance,beta,rho_max\n",
                   0) == 0);
}

TEST_CASE("runs are reproducible and independent of the thread pool") {
  for (AgentKind agent : {AgentKind::Inq, AgentKind::Thompson, AgentKind::BayesExp}) {
    const auto c = small_grid(agent);
    const auto setup = make_setup(c.environment);
    const auto serial = run_batch(c, setup, indices(0, c.runs), Execution::Serial);
    const auto again = run_batch(c, setup, indices(0, c.runs), Execution::Serial);
    const auto parallel = run_batch(c, setup, indices(0, c.runs), Execution::Parallel);
    CHECK(trajectory_text(serial) == trajectory_text(again));
    CHECK(trajectory_text(serial) == trajectory_text(parallel));
    // A run does not depend on which other runs are in the batch.
    const auto alone = run_batch(c, setup, indices(2, 3), Execution::Serial);
    CHECK(trajectory_text(alone) == trajectory_text({serial[2]}));
  }
}

TEST_CASE("different seeds give different runs") {
  const auto c = small_grid(AgentKind::Thompson);
  const auto setup = make_setup(c.environment);
  const auto runs = run_batch(c, setup, indices(0, 2), Execution::Serial);
  CHECK(run_seed(c.seed, 0) != run_seed(c.seed, 1));
  CHECK(trajectory_text({runs[0]}).substr(100) != trajectory_text({runs[1]}).substr(100));
}

TEST_CASE("aggregation identities") {
  auto c = small_grid(AgentKind::Thompson);
  c.runs = 6;
  const auto setup = make_setup(c.environment);
  const auto runs = run_batch(c, setup, indices(0, 6), Execution::Parallel);

  const MetricsSeries single = aggregate(std::span(runs).subspan(0, 1));
  double cum = 0.0;
  for (std::size_t i = 0; i < c.steps; ++i) {
    cum += runs[0].steps[i].reward;
    CHECK(single.mean_reward[i] == runs[0].steps[i].reward);
    CHECK(single.mean_cum_avg_reward[i] == doctest::Approx(cum / (i + 1)).epsilon(1e-15));
    CHECK(single.sd_cum_avg_reward[i] == 0.0);
    CHECK(single.w_true[i] == runs[0].steps[i].w_true);
  }

  const MetricsSeries all = aggregate(runs);
  const MetricsSeries first = aggregate(std::span(runs).subspan(0, 3));
  const MetricsSeries second = aggregate(std::span(runs).subspan(3, 3));
  CHECK(all.length() == c.steps);
  for (std::size_t i = 0; i < c.steps; ++i) {
    CHECK(std::abs((first.mean_reward[i] + second.mean_reward[i]) / 2 - all.mean_reward[i]) <
          1e-12);
    CHECK(std::abs((first.mean_cum_avg_reward[i] + second.mean_cum_avg_reward[i]) / 2 -
                   all.mean_cum_avg_reward[i]) < 1e-12);
    CHECK(all.mean_reward[i] >= 0.0);
    CHECK(all.mean_reward[i] <= 1.0);
  }
}

TEST_CASE("greedy on a known dispenser earns the dispense rate") {
  ExperimentConfig c;
  c.environment.type = EnvironmentType::Gridworld;
  c.environment.grid.width = 1;
  c.environment.grid.height = 1;
  c.environment.grid.dispenser = Cell{0, 0};
  c.agent.kind = AgentKind::Greedy;
  c.agent.planner.samples = 20;
  c.runs = 1;
  c.steps = 10000;
  c.seed = 8;
  const auto setup = make_setup(c.environment);
  const auto runs = run_batch(c, setup, indices(0, 1), Execution::Serial);
  const auto m = aggregate(runs);
  CHECK(std::abs(m.mean_cum_avg_reward.back() - 0.75) < 0.02);
}

TEST_CASE("resampled truths follow the prior") {
  auto c = small_grid(AgentKind::Greedy);
  c.resample_truth = true;
  c.steps = 1;
  c.runs = 64;
  const auto setup = make_setup(c.environment);
  const auto runs = run_batch(c, setup, indices(0, c.runs), Execution::Parallel);
  std::set<std::size_t> truths;
  for (const auto& r : runs) truths.insert(r.true_index);
  CHECK(truths.size() > 8);
}

TEST_CASE("experiment outputs") {
  auto c = small_grid(AgentKind::Inq);
  c.out = temp_dir("experiment");
  const auto result = run_experiment(c);
  const std::filesystem::path dir(c.out);
  for (const char* f : {"trajectory.csv", "diagnostics.csv", "metrics.csv", "reward_curve.svg"})
    CHECK(std::filesystem::exists(dir / f));
  const std::string metrics = slurp(dir / "metrics.csv");
  CHECK(metrics.rfind("t,mean_reward,mean_cum_avg_reward,sd_cum_avg_reward,beta,w_true,pred_error\n",
                      0) == 0);
  CHECK(slurp(dir / "diagnostics.csv").rfind("run_id,t,w_true,beta,pred_error_m\n", 0) == 0);

  // Running again reproduces every byte.
  const std::string first = slurp(dir / "trajectory.csv") + metrics;
  run_experiment(c, Execution::Serial);
  CHECK(slurp(dir / "trajectory.csv") + slurp(dir / "metrics.csv") == first);
}

TEST_CASE("sweeps write one directory per agent and a combined plot") {
  auto c = small_grid(AgentKind::Inq);
  c.runs = 2;
  c.steps = 10;
  c.out = temp_dir("sweep");
  const auto results = run_sweep(c, {AgentKind::Inq, AgentKind::Thompson, AgentKind::BayesExp});
  CHECK(results.size() == 3);
  const std::filesystem::path dir(c.out);
  for (const char* a : {"inq", "thompson", "bayesexp"})
    CHECK(std::filesystem::exists(dir / a / "metrics.csv"));
  const std::string svg = slurp(dir / "reward_curve.svg");
  std::size_t lines = 0;
  for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos) ++lines;
  CHECK(lines == 3);
  CHECK(svg.find(">thompson<") != std::string::npos);
}

TEST_CASE("config files parse into experiments") {
  std::istringstream in(R"([environment]
type = bandit
arms = 0.1,0.9; 0.9,0.1
true_index = 1

[agent]
kind = bayesexp
planner = exact
horizon = 2
ig_threshold = 0.2

[experiment]
runs = 3
steps = 7
seed = 5
pred_error_m = 1
)");
  const auto c = parse_experiment_config(in);
  CHECK(c.environment.type == EnvironmentType::Bandit);
  CHECK(c.environment.arms.size() == 2);
  CHECK(c.environment.true_index == 1);
  CHECK(c.agent.kind == AgentKind::BayesExp);
  CHECK(c.agent.planner.kind == PlannerKind::Exact);
  CHECK(c.agent.ig_threshold == 0.2);
  CHECK(c.runs == 3);
  CHECK(c.steps == 7);
  CHECK(c.pred_error_m == 1);

  const auto setup = make_setup(c.environment);
  const auto runs = run_batch(c, setup, indices(0, 1), Execution::Serial);
  CHECK(runs[0].steps.size() == 7);
  CHECK(std::isfinite(runs[0].steps[0].pred_error));
}

TEST_CASE("bad configs are rejected") {
  const auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_experiment_config(in);
  };
  CHECK_THROWS_AS(parse("[experiment]\nruns = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("[experiment]\nsteps = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("[environment]\ntype = maze\n"), ConfigError);
  CHECK_THROWS_AS(parse("[environment]\ntype = bandit\n"), ConfigError);
  CHECK_THROWS_AS(parse("[environment]\ntype = bandit\narms = 0.5,x\n"), ConfigError);
  CHECK_THROWS_AS(parse("[environment]\ntype = bandit\narms = 0.5\ntrue_index = 3\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse("[agent]\nkind = oracle\n"), ConfigError);
  CHECK_THROWS_AS(parse("[agent]\neta = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("[agent]\nplanner = magic\n"), ConfigError);
  CHECK_THROWS_AS(parse("[environment\n"), ConfigError);
  CHECK_THROWS_AS(load_experiment_config("/nonexistent/inqlab.ini"), ConfigError);
}

TEST_CASE("shipped configs load") {
  for (const char* name : {"gridworld10.ini", "gridworld20.ini", "bandit.ini"}) {
    INFO(name);
    CHECK_NOTHROW(load_experiment_config(std::string(INQLAB_CONFIG_DIR) + "/" + name));
  }
  const auto g20 = load_experiment_config(std::string(INQLAB_CONFIG_DIR) + "/gridworld20.ini");
  CHECK(g20.environment.grid.width == 20);
  CHECK(g20.agent.planner.samples == 600);
  CHECK(g20.agent.planner.horizon == 6);
}

TEST_CASE("plots: one polyline per curve, constant series is flat") {
  Curve flat{"flat", {}, {}};
  for (int t = 1; t <= 50; ++t) {
    flat.t.push_back(t);
    flat.value.push_back(0.75);
  }
  std::ostringstream out;
  write_reward_svg(out, {flat});
  const std::string svg = out.str();
  const std::regex poly("points=\"([^\"]*)\"");
  std::smatch m;
  REQUIRE(std::regex_search(svg, m, poly));
  std::istringstream pts(m[1].str());
  std::string pt;
  std::set<std::string> ys;
  while (pts >> pt) ys.insert(pt.substr(pt.find(',') + 1));
  CHECK(ys.size() == 1);
  // 0.75 sits a quarter of the way down the plot area.
  std::ostringstream zero_one;
  Curve bounds{"b", {1, 2}, {0.0, 1.0}};
  write_reward_svg(zero_one, {bounds});
  std::smatch b;
  const std::string bsvg = zero_one.str();
  REQUIRE(std::regex_search(bsvg, b, poly));
  std::istringstream bp(b[1].str());
  std::string p0, p1;
  bp >> p0 >> p1;
  const double y0 = std::stod(p0.substr(p0.find(',') + 1));
  const double y1 = std::stod(p1.substr(p1.find(',') + 1));
  CHECK(std::stod(*ys.begin()) == doctest::Approx(y1 + 0.25 * (y0 - y1)).epsilon(1e-3));
  CHECK(svg.find("timestep") != std::string::npos);
  CHECK(svg.find("mean cumulative average reward") != std::string::npos);
}

TEST_CASE("malformed metrics report the line") {
  std::istringstream bad("t,mean_cum_avg_reward\n1,0.5\n2,abc\n");
  try {
    read_metrics_curve(bad, "x");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::istringstream ragged("t,mean_cum_avg_reward\n1,0.5,9\n");
  CHECK_THROWS_AS(read_metrics_curve(ragged, "x"), ParseError);
  std::istringstream no_column("t,reward\n1,0.5\n");
  CHECK_THROWS_AS(read_metrics_curve(no_column, "x"), ParseError);
  CHECK(curve_label("out/inq/metrics.csv") == "inq");
  CHECK(curve_label("runs/thompson20.csv") == "thompson20");
}
