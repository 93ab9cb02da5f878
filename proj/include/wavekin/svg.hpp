#pragma once

#include <string>
#include <vector>

namespace wavekin {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> yerr;  // optional, same length as y
  bool fitted_line = false;  // draw the least-squares log-log line
  double slope = 0.0;        // used in the legend when fitted_line is set
  double intercept = 0.0;    // log-space intercept
};

// Log-log scatter plot with one circle marker per point, optional error bars,
// optional fitted lines, and a legend giving each fitted slope.
void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::string& xlabel, const std::string& ylabel,
                      const std::vector<PlotSeries>& series);

}  // namespace wavekin
