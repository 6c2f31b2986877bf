#ifndef UNCLAB_SVG_HPP
#define UNCLAB_SVG_HPP

/**
 * Minimal deterministic SVG line charts: one polyline per series, optional
 * shaded error band, optional point markers, panels stacked vertically.
 * Identical input renders to identical bytes.
 */

#include <filesystem>
#include <string>
#include <vector>

namespace unclab {

struct SvgSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> y_err;  // optional; same length as y when present
  bool markers = false;       // draw circles at the points instead of connecting them
};

struct SvgPanel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<SvgSeries> series;
};

/// Renders the panels to a standalone SVG document string.
std::string render_line_chart(const std::vector<SvgPanel>& panels);

/// Renders and writes atomically. Throws validation_error listing the
/// offending indices on non-finite coordinates.
void emit_svg_line_chart(const std::vector<SvgPanel>& panels, const std::filesystem::path& path);

}  // namespace unclab

#endif  // UNCLAB_SVG_HPP
