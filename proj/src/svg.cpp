#include "wavekin/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace wavekin {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::string& xlabel, const std::string& ylabel,
                      const std::vector<PlotSeries>& series) {
  const double width = 640, height = 480;
  const double ml = 70, mr = 20, mt = 40, mb = 50;

  double lxmin = 1e300, lxmax = -1e300, lymin = 1e300, lymax = -1e300;
  for (const auto& s : series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (s.x[i] <= 0.0 || s.y[i] <= 0.0) continue;
      lxmin = std::min(lxmin, std::log10(s.x[i]));
      lxmax = std::max(lxmax, std::log10(s.x[i]));
      lymin = std::min(lymin, std::log10(s.y[i]));
      lymax = std::max(lymax, std::log10(s.y[i]));
    }
  if (lxmin > lxmax) {  // nothing plottable
    lxmin = lymin = 0.0;
    lxmax = lymax = 1.0;
  }
  if (lxmax - lxmin < 1e-12) lxmax = lxmin + 1.0;
  if (lymax - lymin < 1e-12) lymax = lymin + 1.0;
  const double padx = 0.05 * (lxmax - lxmin), pady = 0.08 * (lymax - lymin);
  lxmin -= padx;
  lxmax += padx;
  lymin -= pady;
  lymax += pady;

  auto px = [&](double lx) { return ml + (lx - lxmin) / (lxmax - lxmin) * (width - ml - mr); };
  auto py = [&](double ly) {
    return height - mb - (ly - lymin) / (lymax - lymin) * (height - mt - mb);
  };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write SVG file: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << title << "</text>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << xlabel << " (log)</text>\n";
  out << "<text x=\"16\" y=\"" << height / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
      << "transform=\"rotate(-90 16 " << height / 2 << ")\">" << ylabel << " (log)</text>\n";
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << width - ml - mr
      << "\" height=\"" << height - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";

  // Decade grid lines and tick labels.
  for (int e = static_cast<int>(std::ceil(lxmin)); e <= static_cast<int>(std::floor(lxmax));
       ++e) {
    double x = px(e);
    out << "<line x1=\"" << x << "\" y1=\"" << mt << "\" x2=\"" << x << "\" y2=\""
        << height - mb << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << height - mb + 16
        << "\" text-anchor=\"middle\" font-size=\"11\">1e" << e << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(lymin)); e <= static_cast<int>(std::floor(lymax));
       ++e) {
    double y = py(e);
    out << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << width - mr << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-size=\"11\">1e" << e << "</text>\n";
  }

  int ci = 0;
  double legend_y = mt + 16;
  for (const auto& s : series) {
    const char* color = kColors[ci % 6];
    ++ci;
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (s.x[i] <= 0.0 || s.y[i] <= 0.0) continue;
      double cx = px(std::log10(s.x[i])), cy = py(std::log10(s.y[i]));
      if (i < s.yerr.size() && s.yerr[i] > 0.0 && s.y[i] - s.yerr[i] > 0.0) {
        double y1 = py(std::log10(s.y[i] + s.yerr[i]));
        double y2 = py(std::log10(s.y[i] - s.yerr[i]));
        out << "<line x1=\"" << cx << "\" y1=\"" << y1 << "\" x2=\"" << cx << "\" y2=\"" << y2
            << "\" stroke=\"" << color << "\"/>\n";
      }
      out << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"4\" fill=\"" << color
          << "\"/>\n";
    }
    std::string legend = s.label;
    if (s.fitted_line && s.x.size() >= 2) {
      // Line in natural-log space: ln y = slope * ln x + intercept.
      double lx1 = lxmin + 0.02, lx2 = lxmax - 0.02;
      auto liny = [&](double lx10) {
        double lnx = lx10 * std::log(10.0);
        return (s.slope * lnx + s.intercept) / std::log(10.0);
      };
      out << "<line x1=\"" << px(lx1) << "\" y1=\"" << py(liny(lx1)) << "\" x2=\"" << px(lx2)
          << "\" y2=\"" << py(liny(lx2)) << "\" stroke=\"" << color
          << "\" stroke-dasharray=\"6 3\"/>\n";
      char buf[64];
      std::snprintf(buf, sizeof(buf), " (slope %.3f)", s.slope);
      legend += buf;
    }
    out << "<circle cx=\"" << ml + 12 << "\" cy=\"" << legend_y - 4 << "\" r=\"4\" fill=\""
        << color << "\"/>\n";
    out << "<text x=\"" << ml + 22 << "\" y=\"" << legend_y << "\" font-size=\"12\">" << legend
        << "</text>\n";
    legend_y += 16;
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace wavekin
