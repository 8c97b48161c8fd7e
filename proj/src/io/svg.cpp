#include "guideq/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "guideq/errors.hpp"

namespace guideq::io {

namespace {

constexpr double width = 720.0;
constexpr double height = 440.0;
constexpr double left = 80.0;
constexpr double right = 24.0;
constexpr double top = 40.0;
constexpr double bottom = 56.0;

const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string num(double v, const char* fmt = "%.2f")
{
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::string label(double v)
{
    if (std::abs(v) < 1e-300) {
        return "0";
    }
    return num(v, "%.4g");
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v)
    {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    bool empty() const { return !(lo <= hi); }
    void widen()
    {
        if (empty()) {
            lo = 0.0;
            hi = 1.0;
        } else if (hi == lo) {
            const double pad = lo == 0.0 ? 1.0 : 0.1 * std::abs(lo);
            lo -= pad;
            hi += pad;
        }
    }
};

}  // namespace

std::vector<double> nice_ticks(double lo, double hi, int target)
{
    std::vector<double> ticks;
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
        return ticks;
    }
    const double raw = (hi - lo) / std::max(1, target);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) {
            break;
        }
    }
    const double first = std::ceil(lo / step - 1e-9) * step;
    for (double t = first; t <= hi + 1e-9 * step; t += step) {
        ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    }
    return ticks;
}

std::string render_line_plot(const PlotSpec& spec, const std::vector<Series>& series)
{
    auto ty = [&](double y) { return spec.log_y ? std::log10(y) : y; };
    auto usable = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!spec.log_y || y > 0.0);
    };
    Range xr;
    Range yr;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (usable(s.x[i], s.y[i])) {
                xr.add(s.x[i]);
                yr.add(ty(s.y[i]));
            }
        }
    }
    xr.widen();
    yr.widen();
    const double pad = 0.04 * (yr.hi - yr.lo);
    yr.lo -= pad;
    yr.hi += pad;
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) { return top + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width, "%.0f") + "\" height=\"" +
           num(height, "%.0f") + "\" viewBox=\"0 0 " + num(width, "%.0f") + " " + num(height, "%.0f") +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + num(width / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
           escape(spec.title) + "</text>\n";
    svg += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
           "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (double t : nice_ticks(xr.lo, xr.hi)) {
        const double x = px(t);
        svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(x) + "\" y2=\"" +
               num(top + ph + 5) + "\" stroke=\"#333\"/>\n";
        svg += "<text x=\"" + num(x) + "\" y=\"" + num(top + ph + 19) + "\" text-anchor=\"middle\">" + label(t) +
               "</text>\n";
    }
    for (double t : nice_ticks(yr.lo, yr.hi)) {
        const double y = py(t);
        svg += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(left) + "\" y2=\"" + num(y) +
               "\" stroke=\"#333\"/>\n";
        const std::string text = spec.log_y ? "1e" + label(t) : label(t);
        svg += "<text x=\"" + num(left - 8) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" + text +
               "</text>\n";
    }
    svg += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(height - 12) + "\" text-anchor=\"middle\">" +
           escape(spec.x_label) + "</text>\n";
    svg += "<text x=\"16\" y=\"" + num(top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           num(top + ph / 2) + ")\">" + escape(spec.y_label) + "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const std::string color = palette[k % std::size(palette)];
        std::string points;
        auto flush = [&] {
            if (!points.empty()) {
                svg += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" + points +
                       "\"/>\n";
                points.clear();
            }
        };
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!usable(s.x[i], s.y[i])) {
                flush();
                continue;
            }
            if (!points.empty()) {
                points += ' ';
            }
            points += num(px(s.x[i])) + "," + num(py(ty(s.y[i])));
        }
        flush();
        const double ly = top + 16.0 + 16.0 * static_cast<double>(k);
        svg += "<line x1=\"" + num(left + pw - 150) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" +
               num(left + pw - 128) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + num(left + pw - 122) + "\" y=\"" + num(ly) + "\">" + escape(s.name) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

void write_line_plot(const std::filesystem::path& path, const PlotSpec& spec, const std::vector<Series>& series)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << render_line_plot(spec, series);
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

}  // namespace guideq::io
