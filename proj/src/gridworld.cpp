#include "inqlab/gridworld.hpp"

#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "inqlab/errors.hpp"

namespace inqlab {

void GridWorldSpec::validate() const {
  if (width < 1 || height < 1) throw ConfigError("grid dimensions must be positive");
  if (!(dispense_probability >= 0.0 && dispense_probability <= 1.0))
    throw ConfigError("dispense_probability must lie in [0,1]");
  for (const Cell& w : walls)
    if (!in_bounds(w)) throw ConfigError("wall outside the grid");
  if (!is_free(start)) throw ConfigError("agent start must be an in-bounds non-wall cell");
  if (dispenser && !is_free(*dispenser))
    throw ConfigError("dispenser must be an in-bounds non-wall cell");
}

GridLayout::GridLayout(const GridWorldSpec& spec)
    : width_(spec.width), height_(spec.height) {
  spec.validate();
  const auto n = static_cast<std::size_t>(width_ * height_);
  free_.resize(n);
  moves_.resize(n * 5);
  masks_.resize(n);
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x) free_[index({x, y})] = spec.is_free({x, y});
  const Cell deltas[5] = {{0, -1}, {0, 1}, {-1, 0}, {1, 0}, {0, 0}};
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const StateId s = index({x, y});
      ObservationId mask = 0;
      for (ActionId a = 0; a < 5; ++a) {
        const Cell to{x + deltas[a].x, y + deltas[a].y};
        const bool open = spec.is_free(to);
        moves_[s * 5 + a] = open ? index(to) : s;
        if (a < 4 && !open) mask |= ObservationId{1} << a;
      }
      masks_[s] = mask;
    }
  }
  start_ = index(spec.start);
  alphabets_ = std::make_shared<const Alphabets>(
      std::vector<std::string>{"up", "down", "left", "right", "stay"}, 32,
      std::vector<Rational>{Rational::of(0), Rational::of(1)});
}

GridWorldEnvironment::GridWorldEnvironment(std::shared_ptr<const GridLayout> layout,
                                           Cell dispenser, double dispense_probability)
    : Environment("dispenser@" + std::to_string(dispenser.x) + "," + std::to_string(dispenser.y),
                  layout->alphabets()),
      layout_(std::move(layout)),
      dispenser_(layout_->index(dispenser)),
      p_(dispense_probability) {}

StateId GridWorldEnvironment::transition(StateId state, ActionId action, PerceptId) const {
  return layout_->move(state, action);
}

void GridWorldEnvironment::percept_distribution(StateId state, ActionId action,
                                                std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  const StateId to = layout_->move(state, action);
  const ObservationId mask = layout_->wall_mask(to);
  const auto& a = alphabets();
  if (to == dispenser_) {
    out[a.percept(mask | kDispensed, 1)] += p_;
    out[a.percept(mask, 0)] += 1.0 - p_;
  } else {
    out[a.percept(mask, 0)] = 1.0;
  }
}

GridWorldClass::GridWorldClass(std::shared_ptr<const GridLayout> layout,
                               std::vector<std::shared_ptr<const Environment>> members,
                               std::vector<StateId> member_cells, double dispense_probability)
    : EnvironmentClass(std::move(members), uniform_prior(member_cells.size())),
      layout_(std::move(layout)),
      member_cells_(std::move(member_cells)),
      member_of_cell_(static_cast<std::size_t>(layout_->width() * layout_->height()), -1),
      p_(dispense_probability) {
  for (std::size_t i = 0; i < member_cells_.size(); ++i)
    member_of_cell_[member_cells_[i]] = static_cast<std::int64_t>(i);
}

ClassState GridWorldClass::initial_state() const { return ClassState{layout_->start()}; }

void GridWorldClass::advance(ClassState& state, ActionId action, PerceptId) const {
  state[0] = layout_->move(state[0], action);
}

StateId GridWorldClass::member_state(const ClassState& state, std::size_t) const {
  return state[0];
}

void GridWorldClass::likelihoods(const ClassState& state, ActionId action,
                                 LikelihoodTable& out) const {
  out.clear();
  const StateId to = layout_->move(state[0], action);
  const ObservationId mask = layout_->wall_mask(to);
  const auto& a = alphabets();
  const std::int64_t member = member_of_cell_[to];
  out.add_row(a.percept(mask, 0), 1.0);
  if (member < 0) return;
  out.add_exception(static_cast<std::uint32_t>(member), 1.0 - p_);
  if (p_ > 0.0) {
    out.add_row(a.percept(mask | kDispensed, 1), 0.0);
    out.add_exception(static_cast<std::uint32_t>(member), p_);
  }
}

std::size_t GridWorldClass::member_for(Cell c) const {
  if (c.x < 0 || c.y < 0 || c.x >= layout_->width() || c.y >= layout_->height() ||
      member_of_cell_[layout_->index(c)] < 0)
    throw ConfigError("no class member has its dispenser at that cell");
  return static_cast<std::size_t>(member_of_cell_[layout_->index(c)]);
}

std::shared_ptr<const GridWorldClass> make_gridworld_class(const GridWorldSpec& spec_template) {
  GridWorldSpec spec = spec_template;
  spec.dispenser.reset();
  auto layout = std::make_shared<const GridLayout>(spec);
  std::vector<std::shared_ptr<const Environment>> members;
  std::vector<StateId> cells;
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      if (!spec.is_free({x, y})) continue;
      members.push_back(
          std::make_shared<GridWorldEnvironment>(layout, Cell{x, y}, spec.dispense_probability));
      cells.push_back(layout->index({x, y}));
    }
  }
  if (members.empty()) throw ConfigError("grid-world has no free cell for a dispenser");
  return std::make_shared<const GridWorldClass>(std::move(layout), std::move(members),
                                                std::move(cells), spec.dispense_probability);
}

std::shared_ptr<const GridWorldEnvironment> make_gridworld(const GridWorldSpec& spec) {
  spec.validate();
  if (!spec.dispenser) throw ConfigError("grid-world needs a dispenser cell");
  auto layout = std::make_shared<const GridLayout>(spec);
  return std::make_shared<const GridWorldEnvironment>(std::move(layout), *spec.dispenser,
                                                      spec.dispense_probability);
}

Cell parse_cell(const std::string& text) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(","));
  if (parts.size() != 2) throw ConfigError("expected a cell 'x,y', got '" + text + "'");
  try {
    return Cell{std::stoi(boost::trim_copy(parts[0])), std::stoi(boost::trim_copy(parts[1]))};
  } catch (const std::exception&) {
    throw ConfigError("expected a cell 'x,y', got '" + text + "'");
  }
}

std::set<Cell> parse_cells(const std::string& text) {
  std::set<Cell> cells;
  std::vector<std::string> items;
  boost::split(items, text, boost::is_any_of(";"));
  for (const auto& item : items) {
    const auto trimmed = boost::trim_copy(item);
    if (!trimmed.empty()) cells.insert(parse_cell(trimmed));
  }
  return cells;
}

GridWorldSpec parse_gridworld_spec(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("grid-world spec: ") + e.what());
  }
  GridWorldSpec spec;
  try {
    spec.width = tree.get<int>("width", spec.width);
    spec.height = tree.get<int>("height", spec.height);
    spec.dispense_probability = tree.get<double>("dispense_probability", spec.dispense_probability);
  } catch (const boost::property_tree::ptree_error& e) {
    throw ConfigError(std::string("grid-world spec: ") + e.what());
  }
  spec.walls = parse_cells(tree.get<std::string>("walls", ""));
  if (auto s = tree.get_optional<std::string>("start")) spec.start = parse_cell(*s);
  if (auto d = tree.get_optional<std::string>("dispenser")) spec.dispenser = parse_cell(*d);
  spec.validate();
  return spec;
}

GridWorldSpec load_gridworld_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open grid-world spec '" + path + "'");
  return parse_gridworld_spec(in);
}

}  // namespace inqlab
