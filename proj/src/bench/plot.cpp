#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "vwm/bench/bench.hpp"
#include "vwm/core/error.hpp"

namespace vwm {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf",
                                    "#7f7f7f"};

}  // namespace

std::string plot_svg(std::string_view csv_text, std::string_view metric, std::string_view perturbation) {
  std::istringstream in{std::string(csv_text)};
  std::string line;
  if (!std::getline(in, line)) throw FormatError("CSV is empty");
  const auto header = split(line, ',');
  auto column = [&](std::string_view name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw FormatError("CSV has no column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_strategy = column("strategy"), c_pert = column("perturbation"), c_param = column("parameter"),
                    c_metric = column(metric);

  std::map<std::string, std::vector<std::pair<double, double>>> series;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) throw FormatError("CSV row " + std::to_string(row) + " has wrong arity");
    if (!perturbation.empty() && cells[c_pert] != perturbation) continue;
    if (cells[c_pert] == "none" && perturbation.empty()) continue;
    double x = 0.0, y = 0.0;
    try {
      x = std::stod(cells[c_param]);
      y = std::stod(cells[c_metric]);
    } catch (const std::exception&) {
      throw FormatError("CSV row " + std::to_string(row) + " has a non-numeric value");
    }
    if (!std::isfinite(x) || !std::isfinite(y)) continue;
    series[cells[c_strategy] + " / " + cells[c_pert]].emplace_back(x, y);
  }

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (auto& [name, pts] : series) {
    std::sort(pts.begin(), pts.end());
    for (auto [x, y] : pts) {
      if (first) {
        xmin = xmax = x;
        ymin = ymax = y;
        first = false;
      }
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;

  constexpr double W = 640, H = 400, L = 60, R = 200, T = 20, B = 50;
  const double pw = W - L - R, ph = H - T - B;
  auto sx = [&](double x) { return L + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return T + ph - (y - ymin) / (ymax - ymin) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << L << "\" y1=\"" << T + ph << "\" x2=\"" << L + pw << "\" y2=\"" << T + ph
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << T + ph << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << L << "\" y=\"" << H - 30 << "\" font-size=\"11\">" << fmt(xmin) << "</text>\n";
  svg << "<text x=\"" << L + pw << "\" y=\"" << H - 30 << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(xmax)
      << "</text>\n";
  svg << "<text x=\"" << L - 5 << "\" y=\"" << T + ph << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(ymin)
      << "</text>\n";
  svg << "<text x=\"" << L - 5 << "\" y=\"" << T + 10 << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(ymax)
      << "</text>\n";
  svg << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 10 << "\" font-size=\"12\" text-anchor=\"middle\">parameter</text>\n";
  svg << "<text x=\"15\" y=\"" << T + ph / 2 << "\" font-size=\"12\" transform=\"rotate(-90 15 " << T + ph / 2
      << ")\" text-anchor=\"middle\">" << escape(std::string(metric)) << "</text>\n";
  std::size_t idx = 0;
  for (const auto& [name, pts] : series) {
    const char* color = kPalette[idx % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      svg << (i ? " " : "") << fmt(sx(pts[i].first)) << "," << fmt(sy(pts[i].second));
    }
    svg << "\"/>\n";
    const double ly = T + 12 + 16 * static_cast<double>(idx);
    svg << "<line x1=\"" << L + pw + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << L + pw + 30 << "\" y2=\"" << ly - 4
        << "\" stroke=\"" << color << "\"/>\n";
    svg << "<text x=\"" << L + pw + 35 << "\" y=\"" << ly << "\" font-size=\"11\">" << escape(name) << "</text>\n";
    ++idx;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace vwm
