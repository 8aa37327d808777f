#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace lagwait::experiment {

/// A polyline in data coordinates. Points with a non-finite coordinate (or a
/// nonpositive one on a log axis) break the line.
struct Series {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    std::string label;
    double width = 1.2;
    bool dashed = false;
    bool markers = false;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    int width = 640;
    int height = 480;
    /// Data range; computed from the series when lo >= hi.
    double x_lo = 0.0, x_hi = 0.0;
    double y_lo = 0.0, y_hi = 0.0;
};

/// Single-panel line plot with axes, ticks and an optional legend.
std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series);
void write_svg(const std::filesystem::path& path, const PlotSpec& spec, const std::vector<Series>& series);

/// Colour i of n along a blue-to-red ramp.
std::string ramp_color(int i, int n);

}  // namespace lagwait::experiment
