#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "weakslit/scenario.hpp"

namespace weakslit {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 80, kRight = 20, kTop = 60, kBottom = 60;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
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

double nice_step(double span) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) return m * mag;
    }
    return 10.0 * mag;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void settle() {
        if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
        if (hi - lo < 1e-300) lo -= 0.5, hi += 0.5;
    }
};

}  // namespace

std::string render_svg(const Plot& plot) {
    Range xr, yr;
    for (const auto& s : plot.series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (std::isfinite(s.y[i])) {
                xr.add(s.x[i]);
                yr.add(s.y[i]);
            }
        }
    }
    xr.settle();
    yr.settle();
    const double pad = 0.05 * (yr.hi - yr.lo);
    yr.lo -= pad;
    yr.hi += pad;

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto sy = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

    std::string o = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
        "font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        kWidth, kHeight);
    o += fmt::format("<text x=\"{}\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n", kWidth / 2,
                     escape(plot.title));
    o += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", kLeft,
                     kTop, pw, ph);

    const double xs = nice_step(xr.hi - xr.lo);
    for (double t = std::ceil(xr.lo / xs) * xs; t <= xr.hi + 1e-9 * xs; t += xs) {
        o += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"black\"/>"
                         "<text x=\"{0:.2f}\" y=\"{3}\" text-anchor=\"middle\">{4:.4g}</text>\n",
                         sx(t), kTop + ph, kTop + ph + 5, kTop + ph + 18, std::abs(t) < 1e-12 * xs ? 0.0 : t);
    }
    const double ys = nice_step(yr.hi - yr.lo);
    for (double t = std::ceil(yr.lo / ys) * ys; t <= yr.hi + 1e-9 * ys; t += ys) {
        o += fmt::format("<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"black\"/>"
                         "<text x=\"{3}\" y=\"{1:.2f}\" text-anchor=\"end\" dy=\"4\">{4:.4g}</text>\n",
                         kLeft - 5, sy(t), kLeft, kLeft - 8, std::abs(t) < 1e-12 * ys ? 0.0 : t);
    }
    if (yr.lo < 0.0 && yr.hi > 0.0) {
        o += fmt::format("<line x1=\"{}\" y1=\"{:.2f}\" x2=\"{}\" y2=\"{:.2f}\" stroke=\"#999\"/>\n", kLeft, sy(0.0),
                         kLeft + pw, sy(0.0));
    }
    if (plot.mm_per_unit > 0.0) {
        const double lo = xr.lo * plot.mm_per_unit, hi = xr.hi * plot.mm_per_unit;
        const double ms = nice_step(hi - lo);
        for (double t = std::ceil(lo / ms) * ms; t <= hi + 1e-9 * ms; t += ms) {
            const double x = sx(t / plot.mm_per_unit);
            o += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"black\"/>"
                             "<text x=\"{0:.2f}\" y=\"{3}\" text-anchor=\"middle\">{4:.4g}</text>\n",
                             x, kTop - 5, kTop, kTop - 8, std::abs(t) < 1e-12 * ms ? 0.0 : t);
        }
        o += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">focal-plane position [mm]</text>\n",
                         kLeft + pw / 2, kTop - 24);
    }
    o += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", kLeft + pw / 2, kHeight - 15,
                     escape(plot.x_label));
    o += fmt::format("<text transform=\"translate(18,{}) rotate(-90)\" text-anchor=\"middle\">{}</text>\n",
                     kTop + ph / 2, escape(plot.y_label));

    for (double m : plot.markers) {
        if (m < xr.lo || m > xr.hi) continue;
        o += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"#888\" "
                         "stroke-dasharray=\"4 3\"/>\n",
                         sx(m), kTop, kTop + ph);
    }

    for (std::size_t si = 0; si < plot.series.size(); ++si) {
        const auto& s = plot.series[si];
        const char* color = kColors[si % std::size(kColors)];
        std::string pts;
        auto flush = [&] {
            if (!pts.empty()) {
                o += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" points=\"{}\"/>\n",
                                 color, pts);
            }
            pts.clear();
        };
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.y[i]) || !std::isfinite(s.x[i])) {
                flush();
                continue;
            }
            pts += fmt::format("{:.2f},{:.2f} ", sx(s.x[i]), sy(s.y[i]));
        }
        flush();
        o += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>"
                         "<text x=\"{4}\" y=\"{1}\" dy=\"4\">{5}</text>\n",
                         kLeft + 10, kTop + 14 + 14 * si, kLeft + 30, color, kLeft + 35, escape(s.label));
    }
    o += "</svg>\n";
    return o;
}

}  // namespace weakslit
