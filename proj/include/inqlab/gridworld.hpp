#pragma once

#include <compare>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "inqlab/environment.hpp"

namespace inqlab {

struct Cell {
  int x = 0;
  int y = 0;
  auto operator<=>(const Cell&) const = default;
};

/// Dispenser grid-world. Without a dispenser cell this is a template for the
/// hypothesis class (one member per candidate dispenser location).
struct GridWorldSpec {
  int width = 10;
  int height = 10;
  std::optional<Cell> dispenser;
  double dispense_probability = 0.75;
  std::set<Cell> walls;
  Cell start;

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
  bool is_free(Cell c) const { return in_bounds(c) && !walls.contains(c); }
  /// Throws ConfigError on a violated invariant.
  void validate() const;
};

namespace grid_action {
inline constexpr ActionId kUp = 0;
inline constexpr ActionId kDown = 1;
inline constexpr ActionId kLeft = 2;
inline constexpr ActionId kRight = 3;
inline constexpr ActionId kStay = 4;
}  // namespace grid_action

/// Observation bits: blocked up/down/left/right, then whether a reward was
/// dispensed this step.
inline constexpr ObservationId kBlockedUp = 1;
inline constexpr ObservationId kBlockedDown = 2;
inline constexpr ObservationId kBlockedLeft = 4;
inline constexpr ObservationId kBlockedRight = 8;
inline constexpr ObservationId kDispensed = 16;

/// Geometry shared by every member of a grid-world class. Cells are indexed
/// row-major (y * width + x).
class GridLayout {
 public:
  explicit GridLayout(const GridWorldSpec& spec);

  int width() const { return width_; }
  int height() const { return height_; }
  StateId index(Cell c) const { return static_cast<StateId>(c.y * width_ + c.x); }
  Cell cell(StateId s) const {
    return Cell{static_cast<int>(s % width_), static_cast<int>(s / width_)};
  }
  StateId start() const { return start_; }
  bool is_free(StateId s) const { return free_[s]; }
  StateId move(StateId s, ActionId a) const { return moves_[s * 5 + a]; }
  ObservationId wall_mask(StateId s) const { return masks_[s]; }
  const std::shared_ptr<const Alphabets>& alphabets() const { return alphabets_; }

 private:
  int width_;
  int height_;
  StateId start_;
  std::vector<bool> free_;
  std::vector<StateId> moves_;
  std::vector<ObservationId> masks_;
  std::shared_ptr<const Alphabets> alphabets_;
};

class GridWorldEnvironment final : public Environment {
 public:
  GridWorldEnvironment(std::shared_ptr<const GridLayout> layout, Cell dispenser,
                       double dispense_probability);

  StateId initial_state() const override { return layout_->start(); }
  StateId transition(StateId state, ActionId action, PerceptId percept) const override;
  void percept_distribution(StateId state, ActionId action, std::span<double> out) const override;
  using Environment::percept_distribution;

  StateId dispenser() const { return dispenser_; }
  const GridLayout& layout() const { return *layout_; }

 private:
  std::shared_ptr<const GridLayout> layout_;
  StateId dispenser_;
  double p_;
};

/// Hypothesis class over dispenser locations. Members share the agent's
/// position, so the class state is that single cell and likelihood rows have
/// at most one exception.
class GridWorldClass final : public EnvironmentClass {
 public:
  GridWorldClass(std::shared_ptr<const GridLayout> layout,
                 std::vector<std::shared_ptr<const Environment>> members,
                 std::vector<StateId> member_cells, double dispense_probability);

  ClassState initial_state() const override;
  void advance(ClassState& state, ActionId action, PerceptId percept) const override;
  StateId member_state(const ClassState& state, std::size_t i) const override;
  void likelihoods(const ClassState& state, ActionId action, LikelihoodTable& out) const override;

  const GridLayout& layout() const { return *layout_; }
  /// Member whose dispenser sits at `c`; throws ConfigError if none.
  std::size_t member_for(Cell c) const;

 private:
  std::shared_ptr<const GridLayout> layout_;
  std::vector<StateId> member_cells_;
  std::vector<std::int64_t> member_of_cell_;
  double p_;
};

/// One member per free cell, uniform prior. The spec's dispenser is ignored.
std::shared_ptr<const GridWorldClass> make_gridworld_class(const GridWorldSpec& spec_template);
std::shared_ptr<const GridWorldEnvironment> make_gridworld(const GridWorldSpec& spec);

/// key=value text: width, height, dispense_probability, walls=x,y;x,y, start=x,y
/// and optionally dispenser=x,y.
GridWorldSpec parse_gridworld_spec(std::istream& in);
GridWorldSpec load_gridworld_spec(const std::string& path);
Cell parse_cell(const std::string& text);
std::set<Cell> parse_cells(const std::string& text);

}  // namespace inqlab
