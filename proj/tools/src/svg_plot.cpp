#include "svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

namespace windfarm::cli {
namespace {

constexpr double kWidth = 900.0;
constexpr double kPanelHeight = 260.0;
constexpr double kLeft = 80.0, kRight = 20.0, kTop = 30.0, kBottom = 40.0;
constexpr std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c",
                                             "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
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

}  // namespace

std::string render_svg(const std::vector<Panel>& panels) {
  const double height = kPanelHeight * static_cast<double>(panels.size());
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(kWidth) +
                    "\" height=\"" + px(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const Panel& panel = panels[p];
    double t0 = std::numeric_limits<double>::infinity(), t1 = -t0;
    double y0 = t0, y1 = -t0;
    for (const auto& s : panel.series) {
      for (std::size_t k = 0; k < s.t.size(); ++k) {
        if (!std::isfinite(s.y[k])) continue;
        t0 = std::min(t0, s.t[k]);
        t1 = std::max(t1, s.t[k]);
        y0 = std::min(y0, s.y[k]);
        y1 = std::max(y1, s.y[k]);
      }
    }
    if (!(t1 > t0)) t1 = t0 + 1.0;
    if (!(y1 > y0)) {
      const double pad = std::max(1e-12, std::abs(y0) * 1e-3);
      y0 -= pad;
      y1 += pad;
    }
    const double ox = kLeft, oy = kPanelHeight * static_cast<double>(p) + kTop;
    const double w = kWidth - kLeft - kRight, h = kPanelHeight - kTop - kBottom;
    auto X = [&](double t) { return ox + (t - t0) / (t1 - t0) * w; };
    auto Y = [&](double y) { return oy + h - (y - y0) / (y1 - y0) * h; };

    svg += "<rect x=\"" + px(ox) + "\" y=\"" + px(oy) + "\" width=\"" + px(w) + "\" height=\"" +
           px(h) + "\" fill=\"none\" stroke=\"#444\"/>\n";
    svg += "<text x=\"" + px(ox) + "\" y=\"" + px(oy - 10) + "\" font-size=\"13\">" +
           escape(panel.title) + "</text>\n";
    svg += "<text x=\"" + px(ox - 6) + "\" y=\"" + px(oy + 4) + "\" text-anchor=\"end\">" + num(y1) +
           "</text>\n";
    svg += "<text x=\"" + px(ox - 6) + "\" y=\"" + px(oy + h) + "\" text-anchor=\"end\">" +
           num(y0) + "</text>\n";
    svg += "<text x=\"" + px(ox) + "\" y=\"" + px(oy + h + 16) + "\">" + num(t0) + "</text>\n";
    svg += "<text x=\"" + px(ox + w) + "\" y=\"" + px(oy + h + 16) + "\" text-anchor=\"end\">" +
           num(t1) + " s</text>\n";

    for (std::size_t s = 0; s < panel.series.size(); ++s) {
      const Series& ser = panel.series[s];
      const char* color = kColors[s % kColors.size()];
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"1.2\" points=\"";
      for (std::size_t k = 0; k < ser.t.size(); ++k) {
        if (!std::isfinite(ser.y[k])) continue;
        svg += px(X(ser.t[k])) + "," + px(Y(ser.y[k])) + " ";
      }
      svg += "\"/>\n";
      const double ly = oy + 14.0 + 14.0 * static_cast<double>(s);
      svg += "<text x=\"" + px(ox + w - 6) + "\" y=\"" + px(ly) + "\" text-anchor=\"end\" fill=\"" +
             color + "\">" + escape(ser.label) + "</text>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace windfarm::cli
