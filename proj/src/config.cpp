#include "inqlab/config.hpp"

#include <fstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "inqlab/errors.hpp"

namespace inqlab {
namespace {

namespace pt = boost::property_tree;

std::vector<std::vector<double>> parse_arms(const std::string& text) {
  std::vector<std::vector<double>> arms;
  std::vector<std::string> members;
  boost::split(members, text, boost::is_any_of(";"));
  for (auto& member : members) {
    boost::trim(member);
    if (member.empty()) continue;
    std::vector<std::string> fields;
    boost::split(fields, member, boost::is_any_of(","));
    std::vector<double> probs;
    for (auto& f : fields) {
      boost::trim(f);
      try {
        std::size_t used = 0;
        probs.push_back(std::stod(f, &used));
        if (used != f.size()) throw std::invalid_argument(f);
      } catch (const std::exception&) {
        throw ConfigError("arms: bad probability '" + f + "'");
      }
    }
    arms.push_back(std::move(probs));
  }
  return arms;
}

bool parse_bool(const std::string& text) {
  const std::string v = boost::to_lower_copy(boost::trim_copy(text));
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("expected a boolean, got '" + text + "'");
}

PlannerKind parse_planner_kind(const std::string& text) {
  if (text == "mcts") return PlannerKind::Mcts;
  if (text == "exact") return PlannerKind::Exact;
  throw ConfigError("planner must be mcts or exact, got '" + text + "'");
}

EnvironmentConfig read_environment(const pt::ptree& section) {
  EnvironmentConfig env;
  const std::string type = section.get<std::string>("type", "gridworld");
  if (type == "gridworld") {
    env.type = EnvironmentType::Gridworld;
    GridWorldSpec& g = env.grid;
    g.width = section.get<int>("width", g.width);
    g.height = section.get<int>("height", g.height);
    g.dispense_probability = section.get<double>("dispense_probability", g.dispense_probability);
    g.walls = parse_cells(section.get<std::string>("walls", ""));
    if (auto s = section.get_optional<std::string>("start")) g.start = parse_cell(*s);
    if (auto d = section.get_optional<std::string>("dispenser"))
      g.dispenser = parse_cell(*d);
    else
      g.dispenser = Cell{g.width - 3, g.height - 3};
    g.validate();
  } else if (type == "bandit") {
    env.type = EnvironmentType::Bandit;
    env.arms = parse_arms(section.get<std::string>("arms", ""));
    if (env.arms.empty()) throw ConfigError("bandit environment needs arms");
    env.true_index = section.get<std::size_t>("true_index", 0);
    if (env.true_index >= env.arms.size()) throw ConfigError("true_index out of range");
  } else {
    throw ConfigError("environment type must be gridworld or bandit, got '" + type + "'");
  }
  return env;
}

AgentConfig read_agent(const pt::ptree& section) {
  AgentConfig a;
  a.kind = parse_agent_kind(section.get<std::string>("kind", "inq"));
  a.eta = section.get<double>("eta", a.eta);
  a.gamma = section.get<double>("gamma", a.gamma);
  a.m_max = section.get<std::size_t>("m_max", a.m_max);
  a.epsilon_trunc = section.get<double>("epsilon_trunc", a.epsilon_trunc);
  a.planner.kind = parse_planner_kind(section.get<std::string>("planner", "mcts"));
  a.planner.samples = section.get<std::size_t>("samples", a.planner.samples);
  a.planner.horizon = section.get<std::size_t>("horizon", a.planner.horizon);
  a.planner.exploration = section.get<double>("exploration", a.planner.exploration);
  a.resample_horizon = section.get<std::size_t>("resample_horizon", a.resample_horizon);
  if (auto th = section.get_optional<double>("ig_threshold")) a.ig_threshold = *th;
  return a;
}

}  // namespace

AgentKind parse_agent_kind(const std::string& name) {
  if (name == "inq") return AgentKind::Inq;
  if (name == "thompson") return AgentKind::Thompson;
  if (name == "bayesexp") return AgentKind::BayesExp;
  if (name == "greedy") return AgentKind::Greedy;
  throw ConfigError("unknown agent '" + name + "' (expected inq, thompson, bayesexp, greedy)");
}

std::string to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::Inq: return "inq";
    case AgentKind::Thompson: return "thompson";
    case AgentKind::BayesExp: return "bayesexp";
    case AgentKind::Greedy: return "greedy";
  }
  return "?";
}

InqConfig AgentConfig::inq_config(std::uint64_t seed) const {
  InqConfig c;
  c.eta = eta;
  c.gamma = gamma;
  c.m_max = m_max == 0 ? planner.horizon : m_max;
  c.epsilon_trunc = epsilon_trunc;
  c.rng_seed = seed;
  c.planner = planner;
  return c;
}

BaselineConfig AgentConfig::baseline_config(std::uint64_t seed) const {
  BaselineConfig c;
  switch (kind) {
    case AgentKind::Thompson: c.kind = BaselineKind::Thompson; break;
    case AgentKind::BayesExp: c.kind = BaselineKind::BayesExp; break;
    default: c.kind = BaselineKind::Greedy; break;
  }
  c.resample_horizon = resample_horizon;
  c.ig_threshold = ig_threshold;
  c.gamma = gamma;
  c.epsilon_trunc = epsilon_trunc;
  c.rng_seed = seed;
  c.planner = planner;
  return c;
}

void ExperimentConfig::validate() const {
  if (runs < 1) throw ConfigError("runs must be at least 1");
  if (steps < 1) throw ConfigError("steps must be at least 1");
  if (agent.kind == AgentKind::Inq)
    agent.inq_config(seed).validate();
  else
    agent.baseline_config(seed).validate();
}

ExperimentConfig parse_experiment_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  try {
    c.environment = read_environment(tree.get_child("environment", pt::ptree{}));
    c.agent = read_agent(tree.get_child("agent", pt::ptree{}));
    const pt::ptree exp = tree.get_child("experiment", pt::ptree{});
    c.runs = exp.get<std::size_t>("runs", c.runs);
    c.steps = exp.get<std::size_t>("steps", c.steps);
    c.seed = exp.get<std::uint64_t>("seed", c.seed);
    c.out = exp.get<std::string>("out", c.out);
    c.resample_truth = parse_bool(exp.get<std::string>("resample_truth", "false"));
    c.pred_error_m = exp.get<std::size_t>("pred_error_m", c.pred_error_m);
  } catch (const pt::ptree_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_experiment_config(in);
}

ExperimentSetup make_setup(const EnvironmentConfig& env) {
  if (env.type == EnvironmentType::Bandit)
    return ExperimentSetup{make_bandit_class(env.arms), env.true_index};
  auto cls = make_gridworld_class(env.grid);
  if (!env.grid.dispenser) throw ConfigError("grid-world experiment needs a dispenser cell");
  const std::size_t truth = cls->member_for(*env.grid.dispenser);
  return ExperimentSetup{std::move(cls), truth};
}

std::unique_ptr<Agent> make_agent(const AgentConfig& config,
                                  std::shared_ptr<const EnvironmentClass> cls,
                                  std::uint64_t seed) {
  if (config.kind == AgentKind::Inq)
    return std::make_unique<InqAgent>(std::move(cls), config.inq_config(seed));
  return make_baseline(std::move(cls), config.baseline_config(seed));
}

}  // namespace inqlab
