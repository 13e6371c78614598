// svg.hpp - minimal line-plot emitter (axes, ticks, legend, optional log y).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace wqed::svg {

struct Series {
    std::string label;
    std::vector<double> x, y;
};

struct Plot {
    std::string title;
    std::string x_label, y_label;
    bool log_y{false};
    std::vector<Series> series;
    double reference_y{std::numeric_limits<double>::quiet_NaN()};  // dashed horizontal line, e.g. g2 = 1
};

namespace detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

inline constexpr const char* kColours[] = {"#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad"};

}  // namespace detail

/// Writes the plot. On a log axis, zeros, negatives and infinities are drawn
/// at a sentinel just outside the plotted range instead of being dropped.
inline void write(std::ostream& os, const Plot& p) {
    constexpr double W = 720, H = 440, ml = 70, mr = 20, mt = 40, mb = 55;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : p.series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double y = s.y[i];
            if (!std::isfinite(s.x[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            if (!std::isfinite(y) || (p.log_y && !(y > 0.0))) continue;
            const double v = p.log_y ? std::log10(y) : y;
            y0 = std::min(y0, v);
            y1 = std::max(y1, v);
        }
    }
    if (!(x1 > x0)) { x0 -= 0.5; x1 += 0.5; }
    if (!(y1 > y0)) { y0 -= 0.5; y1 += 0.5; }
    if (!p.log_y) y0 = std::min(y0, 0.0);
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
    auto py = [&](double v) { return H - mb - (v - y0) / (y1 - y0) * (H - mt - mb); };
    auto value = [&](double y) {
        if (p.log_y) {
            if (y == std::numeric_limits<double>::infinity()) return y1;
            if (!(y > 0.0)) return y0;   // sentinel below the axis range
            return std::log10(y);
        }
        if (y == std::numeric_limits<double>::infinity()) return y1;
        if (y == -std::numeric_limits<double>::infinity()) return y0;
        return y;
    };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << detail::escape(p.title)
       << "</text>\n";
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\"" << H - mt - mb
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 5; ++i) {
        const double xv = x0 + (x1 - x0) * i / 5.0;
        const double yv = y0 + (y1 - y0) * i / 5.0;
        os << "<text x=\"" << detail::num(px(xv)) << "\" y=\"" << H - mb + 18 << "\" text-anchor=\"middle\">"
           << detail::num(xv) << "</text>\n";
        os << "<text x=\"" << ml - 6 << "\" y=\"" << detail::num(py(yv) + 4) << "\" text-anchor=\"end\">"
           << detail::num(p.log_y ? std::pow(10.0, yv) : yv) << "</text>\n";
    }
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << detail::escape(p.x_label)
       << "</text>\n";
    os << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << H / 2 << ")\">"
       << detail::escape(p.y_label) << "</text>\n";

    if (std::isfinite(p.reference_y) && (!p.log_y || p.reference_y > 0.0)) {
        const double v = p.log_y ? std::log10(p.reference_y) : p.reference_y;
        if (v >= y0 && v <= y1) {
            os << "<line x1=\"" << ml << "\" x2=\"" << W - mr << "\" y1=\"" << detail::num(py(v)) << "\" y2=\""
               << detail::num(py(v)) << "\" stroke=\"black\" stroke-dasharray=\"6 4\"/>\n";
        }
    }

    for (std::size_t k = 0; k < p.series.size(); ++k) {
        const auto& s = p.series[k];
        const char* colour = detail::kColours[k % 4];
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (std::isnan(s.y[i])) continue;
            os << detail::num(px(s.x[i])) << ',' << detail::num(py(value(s.y[i]))) << ' ';
        }
        os << "\"/>\n";
        os << "<text x=\"" << W - mr - 8 << "\" y=\"" << mt + 16 + 16 * static_cast<double>(k)
           << "\" text-anchor=\"end\" fill=\"" << colour << "\">" << detail::escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
}

}  // namespace wqed::svg
