#include "inqlab/plot.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "inqlab/errors.hpp"

namespace inqlab {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 60.0;

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

double parse_field(const std::string& text, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(fmt::format("line {}: '{}' is not a number", line, text), line);
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

Curve read_metrics_curve(std::istream& in, const std::string& label) {
  Curve curve{label, {}, {}};
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("line 1: missing header", 1);
  ++line_no;
  std::vector<std::string> header;
  boost::split(header, boost::trim_copy(line), boost::is_any_of(","));
  const auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParseError("line 1: no '" + name + "' column", 1);
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t t_col = col("t");
  const std::size_t v_col = col("mean_cum_avg_reward");

  while (std::getline(in, line)) {
    ++line_no;
    boost::trim(line);
    if (line.empty()) continue;
    std::vector<std::string> fields;
    boost::split(fields, line, boost::is_any_of(","));
    if (fields.size() != header.size())
      throw ParseError(fmt::format("line {}: expected {} fields, found {}", line_no,
                                   header.size(), fields.size()),
                       line_no);
    curve.t.push_back(parse_field(fields[t_col], line_no));
    curve.value.push_back(parse_field(fields[v_col], line_no));
  }
  if (curve.t.empty()) throw ParseError(fmt::format("line {}: no data rows", line_no), line_no);
  return curve;
}

Curve load_metrics_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return read_metrics_curve(in, curve_label(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line());
  }
}

std::string curve_label(const std::string& path) {
  const std::filesystem::path p(path);
  const std::string stem = p.stem().string();
  if (stem == "metrics" && p.has_parent_path() && !p.parent_path().filename().empty())
    return p.parent_path().filename().string();
  return stem;
}

void write_reward_svg(std::ostream& out, const std::vector<Curve>& curves) {
  double t_max = 1.0;
  for (const auto& c : curves)
    for (double t : c.t) t_max = std::max(t_max, t);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const auto x_of = [&](double t) { return kLeft + plot_w * (t_max > 1.0 ? (t - 1.0) / (t_max - 1.0) : 0.0); };
  const auto y_of = [&](double v) { return kTop + plot_h * (1.0 - std::clamp(v, 0.0, 1.0)); };

  fmt::print(out,
             "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
             "viewBox=\"0 0 {} {}\">\n",
             kWidth, kHeight, kWidth, kHeight);
  fmt::print(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
  fmt::print(out,
             "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n"
             "<line x1=\"{0}\" y1=\"{2}\" x2=\"{3}\" y2=\"{2}\" stroke=\"black\"/>\n",
             kLeft, kTop, kTop + plot_h, kLeft + plot_w);
  for (int i = 0; i <= 4; ++i) {
    const double v = i / 4.0;
    fmt::print(out,
               "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#ddd\"/>\n"
               "<text x=\"{3}\" y=\"{4}\" font-size=\"12\" text-anchor=\"end\">{5:.2f}</text>\n",
               kLeft, y_of(v), kLeft + plot_w, kLeft - 6, y_of(v) + 4, v);
    const double t = 1.0 + (t_max - 1.0) * i / 4.0;
    fmt::print(out,
               "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
               x_of(t), kTop + plot_h + 18, static_cast<long long>(t + 0.5));
  }
  fmt::print(out,
             "<text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\">timestep</text>\n",
             kLeft + plot_w / 2, kHeight - 15);
  fmt::print(out,
             "<text x=\"18\" y=\"{0}\" font-size=\"14\" text-anchor=\"middle\" "
             "transform=\"rotate(-90 18 {0})\">mean cumulative average reward</text>\n",
             kTop + plot_h / 2);

  for (std::size_t i = 0; i < curves.size(); ++i) {
    const Curve& c = curves[i];
    const char* color = kColors[i % std::size(kColors)];
    std::ostringstream points;
    for (std::size_t j = 0; j < c.t.size(); ++j) {
      if (j) points << ' ';
      points << fmt::format("{:.2f},{:.2f}", x_of(c.t[j]), y_of(c.value[j]));
    }
    fmt::print(out,
               "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
               color, points.str());
    const double ly = kTop + 10 + 20.0 * static_cast<double>(i);
    fmt::print(out,
               "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" "
               "stroke-width=\"3\"/>\n"
               "<text x=\"{4}\" y=\"{5}\" font-size=\"12\">{6}</text>\n",
               kLeft + plot_w + 15, ly, kLeft + plot_w + 35, color, kLeft + plot_w + 40, ly + 4,
               escape(c.label));
  }
  fmt::print(out, "</svg>\n");
}

void save_reward_svg(const std::string& path, const std::vector<Curve>& curves) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  write_reward_svg(out, curves);
}

}  // namespace inqlab
