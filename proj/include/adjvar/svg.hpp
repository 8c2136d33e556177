#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace adjvar::svg {

struct Series {
    std::string label;
    std::vector<double> y;  // NaN breaks the line
    std::string color = "#1f77b4";
    bool points = false;  // scatter instead of a line
};

namespace detail {

inline std::string escape(const std::string& s) {
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

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace detail

// Static line chart over a shared x axis; x_labels (same length as x) tag the first and last ticks.
inline void line_chart(std::ostream& out, const std::string& title, const std::vector<double>& x,
                       const std::vector<Series>& series, const std::string& x_first = "",
                       const std::string& x_last = "", int width = 900, int height = 360) {
    const double left = 60, right = 20, top = 36, bottom = 40;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (double v : x) {
        xmin = std::min(xmin, v);
        xmax = std::max(xmax, v);
    }
    for (const auto& s : series)
        for (double v : s.y)
            if (std::isfinite(v)) {
                ymin = std::min(ymin, v);
                ymax = std::max(ymax, v);
            }
    if (!std::isfinite(xmin)) xmin = 0, xmax = 1;
    if (!std::isfinite(ymin)) ymin = 0, ymax = 1;
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const double pw = width - left - right, ph = height - top - bottom;
    const auto px = [&](double v) { return left + (v - xmin) / (xmax - xmin) * pw; };
    const auto py = [&](double v) { return top + (1 - (v - ymin) / (ymax - ymin)) * ph; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << detail::escape(title)
        << "</text>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = ymin + (ymax - ymin) * i / 4.0;
        out << "<text x=\"" << left - 6 << "\" y=\"" << detail::num(py(v) + 4) << "\" text-anchor=\"end\">"
            << detail::num(v) << "</text>\n";
    }
    out << "<text x=\"" << left << "\" y=\"" << height - 12 << "\">" << detail::escape(x_first) << "</text>\n";
    out << "<text x=\"" << left + pw << "\" y=\"" << height - 12 << "\" text-anchor=\"end\">"
        << detail::escape(x_last) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const std::size_t n = std::min(x.size(), s.y.size());
        if (s.points) {
            for (std::size_t i = 0; i < n; ++i)
                if (std::isfinite(s.y[i])) {
                    out << "<circle cx=\"" << detail::num(px(x[i])) << "\" cy=\"" << detail::num(py(s.y[i]))
                        << "\" r=\"1.5\" fill=\"" << s.color << "\"/>\n";
                }
        } else {
            std::string path;
            bool pen = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::isfinite(s.y[i])) {
                    pen = false;
                    continue;
                }
                path += (pen ? " L" : " M") + detail::num(px(x[i])) + "," + detail::num(py(s.y[i]));
                pen = true;
            }
            out << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"/>\n";
        }
        out << "<text x=\"" << left + 10 << "\" y=\"" << top + 14 + 14 * static_cast<double>(k) << "\" fill=\""
            << s.color << "\">" << detail::escape(s.label) << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace adjvar::svg
