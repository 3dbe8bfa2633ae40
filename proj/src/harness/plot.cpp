#include "convgp/harness/plot.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

namespace convgp::harness {

namespace {

std::optional<double> parse_cell(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

double aggregate_values(std::vector<double>& vals, const std::string& how) {
  if (how == "mean") {
    double acc = 0.0;
    for (double v : vals) acc += v;
    return acc / static_cast<double>(vals.size());
  }
  // lower median
  std::sort(vals.begin(), vals.end());
  return vals[(vals.size() - 1) / 2];
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

struct Tick {
  double value;
  std::string label;
};

std::vector<Tick> make_ticks(double lo, double hi) {
  std::vector<Tick> ticks;
  for (int i = 0; i <= 4; ++i) {
    const double v = lo + (hi - lo) * i / 4.0;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    ticks.push_back({v, buf});
  }
  return ticks;
}

std::string escape_xml(const std::string& s) {
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

std::string render_svg(const CsvTable& table, const PlotSpec& spec) {
  const int xi = table.column_index(spec.x_column);
  const int yi = table.column_index(spec.y_column);
  if (xi < 0) throw SchemaMismatch("plot: missing x column `" + spec.x_column + "`");
  if (yi < 0) throw SchemaMismatch("plot: missing y column `" + spec.y_column + "`");
  std::vector<int> gi;
  for (const auto& g : spec.group_columns) {
    const int idx = table.column_index(g);
    if (idx < 0) throw SchemaMismatch("plot: missing group column `" + g + "`");
    gi.push_back(idx);
  }
  if (table.rows.empty()) throw SchemaMismatch("plot: CSV has no data rows");

  // group key -> x -> y values
  std::map<std::string, std::map<double, std::vector<double>>> series;
  for (const auto& row : table.rows) {
    const auto x = parse_cell(row[xi]);
    const auto y = parse_cell(row[yi]);
    if (!x || !y) continue;
    std::string key;
    for (std::size_t k = 0; k < gi.size(); ++k) {
      if (k) key += ", ";
      key += spec.group_columns[k] + "=" + row[gi[k]];
    }
    if (key.empty()) key = spec.y_column;
    series[key][*x].push_back(*y);
  }
  if (series.empty()) throw SchemaMismatch("plot: no numeric (x, y) pairs to draw");

  struct Curve {
    std::string key;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Curve> curves;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (auto& [key, byx] : series) {
    Curve c;
    c.key = key;
    for (auto& [x, ys] : byx) {
      if (spec.aggregate == "none") {
        for (double y : ys) c.pts.emplace_back(x, y);
      } else {
        c.pts.emplace_back(x, aggregate_values(ys, spec.aggregate));
      }
    }
    for (const auto& [x, y] : c.pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
    curves.push_back(std::move(c));
  }
  if (xmin == xmax) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymin == ymax) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double xpad = 0.04 * (xmax - xmin), ypad = 0.06 * (ymax - ymin);
  xmin -= xpad;
  xmax += xpad;
  ymin -= ypad;
  ymax += ypad;

  const double width = 800, height = 560;
  const double left = 80, right = width - 190, top = 46, bottom = height - 56;
  const auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (right - left); };
  const auto sy = [&](double y) { return bottom - (y - ymin) / (ymax - ymin) * (bottom - top); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  if (!spec.title.empty())
    svg << "<text x=\"" << (left + right) / 2 << "\" y=\"24\" font-size=\"16\" "
        << "text-anchor=\"middle\" font-family=\"sans-serif\">" << escape_xml(spec.title)
        << "</text>\n";

  // axes
  svg << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
      << bottom << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom
      << "\" stroke=\"black\"/>\n";
  for (const Tick& t : make_ticks(xmin, xmax)) {
    const double px = sx(t.value);
    svg << "<line x1=\"" << format_double(px) << "\" y1=\"" << bottom << "\" x2=\""
        << format_double(px) << "\" y2=\"" << bottom + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << format_double(px) << "\" y=\"" << bottom + 20
        << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">" << t.label
        << "</text>\n";
  }
  for (const Tick& t : make_ticks(ymin, ymax)) {
    const double py = sy(t.value);
    svg << "<line x1=\"" << left - 5 << "\" y1=\"" << format_double(py) << "\" x2=\"" << left
        << "\" y2=\"" << format_double(py) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << left - 9 << "\" y=\"" << format_double(py + 4)
        << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">" << t.label
        << "</text>\n";
  }
  svg << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 14
      << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">"
      << escape_xml(spec.x_column) << "</text>\n";
  svg << "<text x=\"20\" y=\"" << (top + bottom) / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "transform=\"rotate(-90 20 " << (top + bottom) / 2 << ")\">" << escape_xml(spec.y_column)
      << "</text>\n";

  // curves + legend
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* color = kPalette[c % (sizeof(kPalette) / sizeof(kPalette[0]))];
    if (curves[c].pts.size() > 1 && spec.aggregate != "none") {
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : curves[c].pts)
        svg << format_double(sx(x)) << "," << format_double(sy(y)) << " ";
      svg << "\"/>\n";
    }
    for (const auto& [x, y] : curves[c].pts)
      svg << "<circle cx=\"" << format_double(sx(x)) << "\" cy=\"" << format_double(sy(y))
          << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    const double ly = top + 16.0 * static_cast<double>(c);
    svg << "<line x1=\"" << right + 12 << "\" y1=\"" << format_double(ly) << "\" x2=\""
        << right + 32 << "\" y2=\"" << format_double(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << right + 37 << "\" y=\"" << format_double(ly + 4)
        << "\" font-size=\"11\" font-family=\"sans-serif\">" << escape_xml(curves[c].key)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace convgp::harness
