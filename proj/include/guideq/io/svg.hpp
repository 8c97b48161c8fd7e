#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace guideq::io {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
};

/// Minimal SVG line plot. Non-finite points (and non-positive ones on a log
/// axis) break the line. Output is deterministic for identical input.
std::string render_line_plot(const PlotSpec& spec, const std::vector<Series>& series);
void write_line_plot(const std::filesystem::path& path, const PlotSpec& spec, const std::vector<Series>& series);

/// Tick positions covering [lo, hi] with a 1-2-5 step.
std::vector<double> nice_ticks(double lo, double hi, int target = 6);

}  // namespace guideq::io
