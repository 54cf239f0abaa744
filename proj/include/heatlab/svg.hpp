#pragma once

#include <string>
#include <utility>
#include <vector>

namespace heatlab {

// Minimal self-contained SVG emitters; no plotting dependency.

struct SvgSeries {
  std::string name;
  std::vector<double> x, y;
};

void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::string& x_label,
                          const std::string& y_label,
                          const std::vector<SvgSeries>& series,
                          bool log_y = false);

// Phase diagram over (p, amplitude) cells. outcome codes: 0 = blowup,
// 1 = global, 2 = inconclusive, row-major with amplitude as the row index.
// vlines annotates reaction exponents (e.g. predicted range boundaries).
struct PhasePlotData {
  std::vector<double> p_values;
  std::vector<double> amplitudes;
  std::vector<int> outcome;
  std::vector<std::pair<double, std::string>> vlines;
};

void write_phase_svg(const std::string& path, const std::string& title,
                     const PhasePlotData& data);

}  // namespace heatlab
