#ifndef MAGNL_PLOT_HPP
#define MAGNL_PLOT_HPP

#include <string>
#include <utility>
#include <vector>

namespace magnl {

struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (x, y), both positive
};

/// Static log-log line chart. Throws on nonpositive coordinates.
std::string loglog_svg(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<PlotSeries>& series);

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<PlotSeries>& series);

}  // namespace magnl

#endif  // MAGNL_PLOT_HPP
