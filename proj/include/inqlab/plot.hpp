#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace inqlab {

struct Curve {
  std::string label;
  std::vector<double> t;
  std::vector<double> value;
};

/// Reads t and mean_cum_avg_reward from a metrics CSV. Throws ParseError
/// with the offending line number.
Curve read_metrics_curve(std::istream& in, const std::string& label);
Curve load_metrics_curve(const std::string& path);

/// Legend label for a metrics file: its stem, or the parent directory's name
/// when the stem is the generic "metrics".
std::string curve_label(const std::string& path);

/// Timestep vs mean cumulative average reward, one polyline per curve.
void write_reward_svg(std::ostream& out, const std::vector<Curve>& curves);
void save_reward_svg(const std::string& path, const std::vector<Curve>& curves);

}  // namespace inqlab
