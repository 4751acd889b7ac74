#include "edgesync/svg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace edgesync {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

// Round step in {1, 2, 5} x 10^k giving about `target` intervals.
double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    return (r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0) * mag;
}

std::string tick_label(double v, double step) {
    if (std::abs(v) < step * 1e-9) v = 0.0;
    return fmt::format("{:.6g}", v);
}

}  // namespace

std::string render_line_plot(const PlotSpec& spec, std::span<const double> times, std::span<const PlotSeries> series) {
    if (times.empty()) throw std::invalid_argument("render_line_plot: no samples");
    for (const auto& s : series)
        if (s.values.size() != times.size()) throw std::invalid_argument("render_line_plot: series length mismatch");

    double x0 = times.front();
    double x1 = times.back();
    if (!(x1 > x0)) x1 = x0 + 1.0;
    double y0 = 0.0;
    double y1 = 0.0;
    bool first = true;
    for (const auto& s : series)
        for (double v : s.values) {
            if (!std::isfinite(v)) continue;
            y0 = first ? v : std::min(y0, v);
            y1 = first ? v : std::max(y1, v);
            first = false;
        }
    if (!(y1 > y0)) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
                       kWidth, kHeight);
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += fmt::format("<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
                       kLeft + pw / 2, escape(spec.title));
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", kLeft, kTop,
                       pw, ph);

    out += "<g font-family=\"sans-serif\" font-size=\"11\" stroke=\"none\" fill=\"black\">\n";
    const double xs = nice_step(x1 - x0, 8);
    for (double v = std::ceil(x0 / xs) * xs; v <= x1 + xs * 1e-9; v += xs) {
        const double x = px(v);
        out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n", x,
                           kTop + ph, kTop + ph + 5);
        out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", x, kTop + ph + 18,
                           tick_label(v, xs));
    }
    const double ys = nice_step(y1 - y0, 6);
    for (double v = std::ceil(y0 / ys) * ys; v <= y1 + ys * 1e-9; v += ys) {
        const double y = py(v);
        out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>\n",
                           kLeft - 5, y, kLeft);
        out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n", kLeft - 8, y + 4,
                           tick_label(v, ys));
    }
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", kLeft + pw / 2,
                       kHeight - 18, escape(spec.x_label));
    out += fmt::format("<text x=\"20\" y=\"{0:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {0:.2f})\">{1}</text>\n",
                       kTop + ph / 2, escape(spec.y_label));
    out += "</g>\n";

    const std::size_t n = times.size();
    const std::size_t stride = std::max<std::size_t>(1, (n + spec.max_points - 1) / std::max<std::size_t>(1, spec.max_points));
    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& ser = series[s];
        out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\"{} points=\"", kPalette[s % 10],
                           ser.dashed ? " stroke-dasharray=\"4 3\"" : "");
        bool sep = false;
        for (std::size_t i = 0; i < n; i += stride) {
            if (!std::isfinite(ser.values[i])) continue;
            out += fmt::format("{}{:.2f},{:.2f}", sep ? " " : "", px(times[i]), py(ser.values[i]));
            sep = true;
        }
        if ((n - 1) % stride != 0 && std::isfinite(ser.values[n - 1]))
            out += fmt::format("{}{:.2f},{:.2f}", sep ? " " : "", px(times[n - 1]), py(ser.values[n - 1]));
        out += "\"><title>" + escape(ser.label) + "</title></polyline>\n";
    }

    if (series.size() <= 12) {
        out += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
        for (std::size_t s = 0; s < series.size(); ++s) {
            const double y = kTop + 10 + 16.0 * static_cast<double>(s);
            const double x = kLeft + pw + 12;
            out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\"/>\n", x, y,
                               x + 20, y, kPalette[s % 10]);
            out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", x + 26, y + 4, escape(series[s].label));
        }
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace edgesync
