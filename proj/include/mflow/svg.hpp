#pragma once

#include <string>
#include <vector>

namespace mflow {

struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
};

/// Minimal static line plot: polylines plus axes and tick labels, no styling
/// dependencies. Output is deterministic for identical inputs.
std::string render_line_plot(const std::string& title, const std::vector<PlotSeries>& series,
                             int width = 720, int height = 440);

}  // namespace mflow
