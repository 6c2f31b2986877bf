#include "unclab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "unclab/csv.hpp"
#include "unclab/errors.hpp"

namespace unclab {

namespace {

constexpr double kWidth = 720.0;
constexpr double kPanelHeight = 300.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 34.0;
constexpr double kMarginBottom = 46.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", v);
  return buffer;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (lo > hi) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi == lo) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double margin = 0.04 * (hi - lo);
    lo -= margin;
    hi += margin;
  }
};

void validate_series(const SvgPanel& panel) {
  if (panel.series.empty()) throw validation_error("svg: panel needs at least one series");
  for (const auto& s : panel.series) {
    if (s.x.empty() || s.x.size() != s.y.size()) {
      throw validation_error("svg: series '" + s.name + "' needs equal-length nonempty x and y");
    }
    if (!s.y_err.empty() && s.y_err.size() != s.y.size()) {
      throw validation_error("svg: series '" + s.name + "' y_err length mismatch");
    }
    std::string bad;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const bool err_bad = !s.y_err.empty() && !std::isfinite(s.y_err[i]);
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || err_bad) {
        if (!bad.empty()) bad += ", ";
        bad += std::to_string(i);
      }
    }
    if (!bad.empty()) {
      throw validation_error("svg: series '" + s.name + "' has non-finite values at indices " +
                             bad);
    }
  }
}

void render_panel(std::string& out, const SvgPanel& panel, double y_offset) {
  Range xr, yr;
  for (const auto& s : panel.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xr.include(s.x[i]);
      const double e = s.y_err.empty() ? 0.0 : s.y_err[i];
      yr.include(s.y[i] - e);
      yr.include(s.y[i] + e);
    }
  }
  xr.pad();
  yr.pad();

  const double plot_left = kMarginLeft;
  const double plot_right = kWidth - kMarginRight;
  const double plot_top = y_offset + kMarginTop;
  const double plot_bottom = y_offset + kPanelHeight - kMarginBottom;
  const auto sx = [&](double v) {
    return plot_left + (v - xr.lo) / (xr.hi - xr.lo) * (plot_right - plot_left);
  };
  const auto sy = [&](double v) {
    return plot_bottom - (v - yr.lo) / (yr.hi - yr.lo) * (plot_bottom - plot_top);
  };

  out += "<rect x=\"" + fmt(plot_left) + "\" y=\"" + fmt(plot_top) + "\" width=\"" +
         fmt(plot_right - plot_left) + "\" height=\"" + fmt(plot_bottom - plot_top) +
         "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
  out += "<text x=\"" + fmt(0.5 * (plot_left + plot_right)) + "\" y=\"" + fmt(y_offset + 20.0) +
         "\" text-anchor=\"middle\" font-size=\"14\" font-family=\"sans-serif\">" + panel.title +
         "</text>\n";
  out += "<text x=\"" + fmt(0.5 * (plot_left + plot_right)) + "\" y=\"" +
         fmt(y_offset + kPanelHeight - 10.0) +
         "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" +
         panel.x_label + "</text>\n";
  out += "<text x=\"16\" y=\"" + fmt(0.5 * (plot_top + plot_bottom)) +
         "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\" transform=\"rotate(-90 16 " +
         fmt(0.5 * (plot_top + plot_bottom)) + ")\">" + panel.y_label + "</text>\n";

  // axis ticks: min and max on both axes
  out += "<text x=\"" + fmt(plot_left) + "\" y=\"" + fmt(plot_bottom + 16.0) +
         "\" text-anchor=\"middle\" font-size=\"10\" font-family=\"sans-serif\">" + fmt(xr.lo) +
         "</text>\n";
  out += "<text x=\"" + fmt(plot_right) + "\" y=\"" + fmt(plot_bottom + 16.0) +
         "\" text-anchor=\"middle\" font-size=\"10\" font-family=\"sans-serif\">" + fmt(xr.hi) +
         "</text>\n";
  out += "<text x=\"" + fmt(plot_left - 6.0) + "\" y=\"" + fmt(plot_bottom + 4.0) +
         "\" text-anchor=\"end\" font-size=\"10\" font-family=\"sans-serif\">" + fmt(yr.lo) +
         "</text>\n";
  out += "<text x=\"" + fmt(plot_left - 6.0) + "\" y=\"" + fmt(plot_top + 4.0) +
         "\" text-anchor=\"end\" font-size=\"10\" font-family=\"sans-serif\">" + fmt(yr.hi) +
         "</text>\n";

  for (std::size_t si = 0; si < panel.series.size(); ++si) {
    const auto& s = panel.series[si];
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
    if (!s.y_err.empty()) {
      std::string points;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        points += fmt(sx(s.x[i])) + "," + fmt(sy(s.y[i] + s.y_err[i])) + " ";
      }
      for (std::size_t i = s.x.size(); i-- > 0;) {
        points += fmt(sx(s.x[i])) + "," + fmt(sy(s.y[i] - s.y_err[i])) + " ";
      }
      points.pop_back();
      out += "<polygon points=\"" + points + "\" fill=\"" + color +
             "\" fill-opacity=\"0.18\" stroke=\"none\"/>\n";
    }
    if (s.markers) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        out += "<circle cx=\"" + fmt(sx(s.x[i])) + "\" cy=\"" + fmt(sy(s.y[i])) +
               "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
      }
    } else {
      std::string points;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        points += fmt(sx(s.x[i])) + "," + fmt(sy(s.y[i]));
        if (i + 1 < s.x.size()) points += " ";
      }
      out += "<polyline points=\"" + points + "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-width=\"1.5\"/>\n";
    }
    // legend entry
    const double lx = plot_left + 10.0;
    const double ly = plot_top + 14.0 + 16.0 * static_cast<double>(si);
    out += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly - 4.0) + "\" x2=\"" + fmt(lx + 18.0) +
           "\" y2=\"" + fmt(ly - 4.0) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + fmt(lx + 24.0) + "\" y=\"" + fmt(ly) +
           "\" font-size=\"11\" font-family=\"sans-serif\">" + s.name + "</text>\n";
  }
}

}  // namespace

std::string render_line_chart(const std::vector<SvgPanel>& panels) {
  if (panels.empty()) throw validation_error("svg: need at least one panel");
  for (const auto& panel : panels) validate_series(panel);

  const double height = kPanelHeight * static_cast<double>(panels.size());
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
         fmt(height) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i) {
    render_panel(out, panels[i], kPanelHeight * static_cast<double>(i));
  }
  out += "</svg>\n";
  return out;
}

void emit_svg_line_chart(const std::vector<SvgPanel>& panels, const std::filesystem::path& path) {
  write_file_atomic(path, render_line_chart(panels));
}

}  // namespace unclab
