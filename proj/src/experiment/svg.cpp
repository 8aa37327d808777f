#include "lagwait/experiment/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "lagwait/error.hpp"

namespace lagwait::experiment {

namespace {

constexpr double kLeft = 72.0, kRight = 24.0, kTop = 36.0, kBottom = 52.0;

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;
    double pixel_lo = 0.0, pixel_hi = 1.0;

    bool accepts(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
    double transform(double v) const { return log ? std::log10(v) : v; }
    double map(double v) const {
        const double a = transform(lo), b = transform(hi);
        return pixel_lo + (transform(v) - a) / (b - a) * (pixel_hi - pixel_lo);
    }

    std::vector<double> ticks() const {
        std::vector<double> out;
        if (log) {
            for (double e = std::floor(std::log10(lo)); e <= std::ceil(std::log10(hi)); e += 1.0) {
                const double v = std::pow(10.0, e);
                if (v >= lo * (1 - 1e-9) && v <= hi * (1 + 1e-9)) out.push_back(v);
            }
            return out;
        }
        const double raw = (hi - lo) / 6.0;
        const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
        double step = magnitude;
        for (double f : {1.0, 2.0, 5.0, 10.0}) {
            step = f * magnitude;
            if (step >= raw) break;
        }
        for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) {
            out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
        }
        return out;
    }
};

void fit_range(Axis& axis, double lo, double hi, const std::vector<Series>& series, bool use_x) {
    if (lo < hi) {
        axis.lo = lo;
        axis.hi = hi;
        return;
    }
    double a = std::numeric_limits<double>::infinity(), b = -a;
    for (const auto& s : series) {
        for (double v : use_x ? s.x : s.y) {
            if (!axis.accepts(v)) continue;
            a = std::min(a, v);
            b = std::max(b, v);
        }
    }
    if (!(a <= b)) {
        a = axis.log ? 1.0 : 0.0;
        b = axis.log ? 10.0 : 1.0;
    }
    if (axis.log) {
        if (a == b) {
            a /= 2.0;
            b *= 2.0;
        }
        axis.lo = std::pow(10.0, std::floor(std::log10(a) * 10.0) / 10.0);
        axis.hi = std::pow(10.0, std::ceil(std::log10(b) * 10.0) / 10.0);
        return;
    }
    if (a == b) {
        const double pad = a == 0.0 ? 1.0 : 0.05 * std::abs(a);
        a -= pad;
        b += pad;
    }
    const double pad = 0.03 * (b - a);
    axis.lo = a - pad;
    axis.hi = b + pad;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string label_of(double v) { return fmt::format("{:.4g}", v); }

}  // namespace

std::string ramp_color(int i, int n) {
    const double t = n <= 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    const int r = static_cast<int>(std::lround(30 + 200 * t));
    const int g = static_cast<int>(std::lround(80 + 40 * std::sin(3.14159265358979 * t)));
    const int b = static_cast<int>(std::lround(220 - 190 * t));
    return fmt::format("#{:02x}{:02x}{:02x}", r, g, b);
}

std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series) {
    Axis x{0, 1, spec.log_x, kLeft, spec.width - kRight};
    Axis y{0, 1, spec.log_y, spec.height - kBottom, kTop};
    fit_range(x, spec.x_lo, spec.x_hi, series, true);
    fit_range(y, spec.y_lo, spec.y_hi, series, false);

    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\" font-size=\"11\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        spec.width, spec.height);
    out += fmt::format("<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">{}</text>\n", spec.width / 2,
                       escape(spec.title));

    const double x0 = x.pixel_lo, x1 = x.pixel_hi, y0 = y.pixel_lo, y1 = y.pixel_hi;
    out += "<g stroke=\"#ccc\" stroke-width=\"0.5\">\n";
    for (double t : x.ticks()) {
        const double px = x.map(t);
        out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n", px, y0, px, y1);
    }
    for (double t : y.ticks()) {
        const double py = y.map(t);
        out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n", x0, py, x1, py);
    }
    out += "</g>\n";
    out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" stroke=\"black\"/>\n",
                       x0, y1, x1 - x0, y0 - y1);
    for (double t : x.ticks()) {
        out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", x.map(t), y0 + 16,
                           label_of(t));
    }
    for (double t : y.ticks()) {
        out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n", x0 - 6, y.map(t) + 4,
                           label_of(t));
    }
    out += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", 0.5 * (x0 + x1),
                       spec.height - 12, escape(spec.x_label));
    out += fmt::format(
        "<text x=\"16\" y=\"{:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2f})\">{}</text>\n",
        0.5 * (y0 + y1), 0.5 * (y0 + y1), escape(spec.y_label));

    out += fmt::format("<clipPath id=\"plot\"><rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\"/></clipPath>\n",
                       x0, y1, x1 - x0, y0 - y1);
    out += "<g clip-path=\"url(#plot)\" fill=\"none\">\n";
    for (const auto& s : series) {
        const std::string style = fmt::format("stroke=\"{}\" stroke-width=\"{}\"{}", s.color, s.width,
                                              s.dashed ? " stroke-dasharray=\"5 3\"" : "");
        std::string points;
        auto flush = [&] {
            if (!points.empty()) out += fmt::format("<polyline {} points=\"{}\"/>\n", style, points);
            points.clear();
        };
        const std::size_t n = std::min(s.x.size(), s.y.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (!x.accepts(s.x[i]) || !y.accepts(s.y[i])) {
                flush();
                continue;
            }
            if (!points.empty()) points += ' ';
            points += fmt::format("{:.2f},{:.2f}", x.map(s.x[i]), y.map(s.y[i]));
            if (s.markers) {
                out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" fill=\"{}\" stroke=\"none\"/>\n",
                                   x.map(s.x[i]), y.map(s.y[i]), s.color);
            }
        }
        flush();
    }
    out += "</g>\n";

    double legend_y = y1 + 14;
    for (const auto& s : series) {
        if (s.label.empty()) continue;
        out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" stroke-width=\"2\"{}/>\n",
                           x1 - 120, legend_y - 4, x1 - 100, legend_y - 4, s.color,
                           s.dashed ? " stroke-dasharray=\"5 3\"" : "");
        out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", x1 - 95, legend_y, escape(s.label));
        legend_y += 14;
    }
    out += "</svg>\n";
    return out;
}

void write_svg(const std::filesystem::path& path, const PlotSpec& spec, const std::vector<Series>& series) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::IoError, "cannot write " + path.string());
    out << render_svg(spec, series);
    if (!out) fail(ErrorKind::IoError, "failed writing " + path.string());
}

}  // namespace lagwait::experiment
