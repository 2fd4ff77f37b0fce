#include "magnl/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "magnl/errors.hpp"

namespace magnl {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string loglog_svg(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<PlotSeries>& series) {
  const double width = 640, height = 480;
  const double ml = 70, mr = 20, mt = 40, mb = 50;

  double lx0 = 0, lx1 = 0, ly0 = 0, ly1 = 0;
  bool first = true;
  for (const PlotSeries& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!(x > 0) || !(y > 0))
        throw InvalidSpecError("log-log plot requires positive coordinates");
      const double gx = std::log10(x), gy = std::log10(y);
      if (first) {
        lx0 = lx1 = gx;
        ly0 = ly1 = gy;
        first = false;
      } else {
        lx0 = std::min(lx0, gx);
        lx1 = std::max(lx1, gx);
        ly0 = std::min(ly0, gy);
        ly1 = std::max(ly1, gy);
      }
    }
  }
  if (first) throw InvalidSpecError("log-log plot has no data");
  if (lx1 - lx0 < 1e-9) lx1 = lx0 + 1;
  if (ly1 - ly0 < 1e-9) ly1 = ly0 + 1;
  const double padx = 0.05 * (lx1 - lx0), pady = 0.05 * (ly1 - ly0);
  lx0 -= padx;
  lx1 += padx;
  ly0 -= pady;
  ly1 += pady;

  auto px = [&](double x) { return ml + (std::log10(x) - lx0) / (lx1 - lx0) * (width - ml - mr); };
  auto py = [&](double y) {
    return height - mb - (std::log10(y) - ly0) / (ly1 - ly0) * (height - mt - mb);
  };

  std::string svg;
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
                "viewBox=\"0 0 %g %g\" font-family=\"sans-serif\" font-size=\"12\">\n",
                width, height, width, height);
  svg += buf;
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"%g\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">%s</text>\n",
                width / 2, title.c_str());
  svg += buf;

  // Axes box and decade ticks.
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" "
                "stroke=\"black\"/>\n",
                ml, mt, width - ml - mr, height - mt - mb);
  svg += buf;
  for (int d = static_cast<int>(std::floor(lx0)); d <= static_cast<int>(std::ceil(lx1)); ++d) {
    const double x = std::pow(10.0, d);
    if (std::log10(x) < lx0 || std::log10(x) > lx1) continue;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"#cccccc\"/>"
                  "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">1e%d</text>\n",
                  px(x), mt, px(x), height - mb, px(x), height - mb + 18, d);
    svg += buf;
  }
  for (int d = static_cast<int>(std::floor(ly0)); d <= static_cast<int>(std::ceil(ly1)); ++d) {
    const double y = std::pow(10.0, d);
    if (std::log10(y) < ly0 || std::log10(y) > ly1) continue;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"#cccccc\"/>"
                  "<text x=\"%g\" y=\"%g\" text-anchor=\"end\">1e%d</text>\n",
                  ml, py(y), width - mr, py(y), ml - 6, py(y) + 4, d);
    svg += buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%s</text>\n", width / 2,
                height - 12, x_label.c_str());
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"16\" y=\"%g\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
                "%g)\">%s</text>\n",
                height / 2, height / 2, y_label.c_str());
  svg += buf;

  int ci = 0;
  double legend_y = mt + 16;
  for (const PlotSeries& s : series) {
    const char* color = kColors[ci % 6];
    std::string path;
    bool start = true;
    for (const auto& [x, y] : s.points) {
      std::snprintf(buf, sizeof buf, "%s%g %g", start ? "M" : " L", px(x), py(y));
      path += buf;
      start = false;
    }
    std::snprintf(buf, sizeof buf,
                  "<path d=\"%s\" fill=\"none\" stroke=\"%s\" stroke-width=\"1.8\"/>\n",
                  path.c_str(), color);
    svg += buf;
    for (const auto& [x, y] : s.points) {
      std::snprintf(buf, sizeof buf, "<circle cx=\"%g\" cy=\"%g\" r=\"3\" fill=\"%s\"/>\n",
                    px(x), py(y), color);
      svg += buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%g\" y=\"%g\" width=\"10\" height=\"10\" fill=\"%s\"/>"
                  "<text x=\"%g\" y=\"%g\">%s</text>\n",
                  width - mr - 150.0, legend_y - 9, color, width - mr - 135.0, legend_y,
                  s.name.c_str());
    svg += buf;
    legend_y += 18;
    ++ci;
  }
  svg += "</svg>\n";
  return svg;
}

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<PlotSeries>& series) {
  std::ofstream f(path);
  if (!f) throw InvalidSpecError("cannot write " + path);
  f << loglog_svg(title, x_label, y_label, series);
}

}  // namespace magnl
