#include "qsurr/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qsurr {

namespace {

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void take(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

void write_svg_plot(const std::filesystem::path& path, const PlotSpec& spec,
                    const std::vector<PlotSeries>& series) {
  const double ml = 70, mr = 20, mt = 40, mb = 55;
  const double pw = spec.width - ml - mr, ph = spec.height - mt - mb;

  Range xr, yr;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double x = s.x[i];
      if (spec.log_x) {
        if (x <= 0) continue;
        x = std::log10(x);
      }
      xr.take(x);
      const double e = s.yerr.empty() ? 0.0 : s.yerr[i];
      yr.take(s.y[i] - e);
      yr.take(s.y[i] + e);
    }
  if (!(xr.lo <= xr.hi) || !(yr.lo <= yr.hi))
    throw std::invalid_argument("svg plot needs at least one finite point");
  if (xr.hi == xr.lo) xr.hi = xr.lo + 1;
  if (yr.hi == yr.lo) yr.hi = yr.lo + 1;
  const double ypad = 0.05 * (yr.hi - yr.lo);
  yr.lo -= ypad;
  yr.hi += ypad;

  auto px = [&](double x) {
    if (spec.log_x) x = std::log10(x);
    return ml + pw * (x - xr.lo) / (xr.hi - xr.lo);
  };
  auto py = [&](double y) { return mt + ph * (yr.hi - y) / (yr.hi - yr.lo); };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width
      << "\" height=\"" << spec.height << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << spec.width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-size=\"15\">" << spec.title << "</text>\n";

  // frame
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#444\"/>\n";

  // x ticks: decades when log, else 5 evenly spaced
  if (spec.log_x) {
    for (int d = static_cast<int>(std::ceil(xr.lo));
         d <= static_cast<int>(std::floor(xr.hi)); ++d) {
      const double X = ml + pw * (d - xr.lo) / (xr.hi - xr.lo);
      out << "<line x1=\"" << X << "\" y1=\"" << mt + ph << "\" x2=\"" << X
          << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"#444\"/>\n";
      out << "<text x=\"" << X << "\" y=\"" << mt + ph + 20
          << "\" text-anchor=\"middle\" font-size=\"12\">1e" << d << "</text>\n";
    }
  } else {
    for (int t = 0; t <= 4; ++t) {
      const double x = xr.lo + (xr.hi - xr.lo) * t / 4;
      const double X = ml + pw * t / 4.0;
      out << "<line x1=\"" << X << "\" y1=\"" << mt + ph << "\" x2=\"" << X
          << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"#444\"/>\n";
      out << "<text x=\"" << X << "\" y=\"" << mt + ph + 20
          << "\" text-anchor=\"middle\" font-size=\"12\">" << fmt(x)
          << "</text>\n";
    }
  }
  for (int t = 0; t <= 4; ++t) {
    const double y = yr.lo + (yr.hi - yr.lo) * t / 4;
    const double Y = py(y);
    out << "<line x1=\"" << ml - 5 << "\" y1=\"" << Y << "\" x2=\"" << ml
        << "\" y2=\"" << Y << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << Y + 4
        << "\" text-anchor=\"end\" font-size=\"12\">" << fmt(y) << "</text>\n";
  }
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << spec.height - 10
      << "\" text-anchor=\"middle\" font-size=\"13\">" << spec.x_label
      << "</text>\n";
  out << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
      << mt + ph / 2 << ")\">" << spec.y_label << "</text>\n";

  int legend_row = 0;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (spec.log_x && s.x[i] <= 0) continue;
      out << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
    }
    out << "\"/>\n";
    if (!s.yerr.empty()) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (spec.log_x && s.x[i] <= 0) continue;
        const double X = px(s.x[i]);
        out << "<line x1=\"" << fmt(X) << "\" y1=\"" << fmt(py(s.y[i] - s.yerr[i]))
            << "\" x2=\"" << fmt(X) << "\" y2=\"" << fmt(py(s.y[i] + s.yerr[i]))
            << "\" stroke=\"" << s.color << "\" stroke-width=\"1\"/>\n";
      }
    }
    const double ly = mt + 14 + 16 * legend_row++;
    out << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly << "\" x2=\""
        << ml + pw - 125 << "\" y2=\"" << ly << "\" stroke=\"" << s.color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << ml + pw - 120 << "\" y=\"" << ly + 4
        << "\" font-size=\"12\">" << s.label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace qsurr
