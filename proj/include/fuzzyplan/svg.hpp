#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "documents.hpp"
#include "world.hpp"

namespace fuzzyplan::svg {

struct Style {
    double width_px = 600.0;
    double margin_px = 24.0;
};

namespace detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    if (s == "-0.00") {
        s = "0.00";
    }
    return s;
}

inline std::string escape(const std::string& text) {
    std::string out;
    for (const char c : text) {
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

} // namespace detail

/// Gray level (0-255) for an obstacle: darker the harder it is to traverse.
/// Degree 1 gets the lightest level.
inline int obstacle_gray(double degree) {
    const double d = std::clamp(degree, 0.0, 1.0);
    return static_cast<int>(std::lround(235.0 - 200.0 * (1.0 - d)));
}

/// Workspace frame, obstacles shaded by degree, A/B markers and, when given,
/// candidate paths: the chosen one solid, the others dashed.
inline std::string render(const Scenario& s, const std::optional<document::ResultOverlay>& result = std::nullopt,
                          const Style& style = {}) {
    using detail::num;
    const double scale = style.width_px / s.bounds.width();
    const double m = style.margin_px;
    const double width = style.width_px + 2 * m;
    const double height = s.bounds.height() * scale + 2 * m;
    const auto px = [&](double x) { return m + (x - s.bounds.xmin) * scale; };
    const auto py = [&](double y) { return m + (s.bounds.ymax - y) * scale; };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(width) + "\" height=\"" +
           num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
    out += "  <defs><clipPath id=\"workspace\"><rect x=\"" + num(m) + "\" y=\"" + num(m) + "\" width=\"" +
           num(style.width_px) + "\" height=\"" + num(s.bounds.height() * scale) + "\"/></clipPath></defs>\n";
    out += "  <rect class=\"frame\" x=\"" + num(m) + "\" y=\"" + num(m) + "\" width=\"" + num(style.width_px) +
           "\" height=\"" + num(s.bounds.height() * scale) + "\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";

    out += "  <g clip-path=\"url(#workspace)\">\n";
    for (const auto& o : s.obstacles) {
        char fill[8];
        const int g = obstacle_gray(o.degree);
        std::snprintf(fill, sizeof fill, "#%02x%02x%02x", g, g, g);
        const std::string common = " fill=\"" + std::string(fill) + "\" stroke=\"#404040\" stroke-width=\"1\"";
        char degree[32];
        std::snprintf(degree, sizeof degree, "%.12g", o.degree);
        const std::string title = "<title>" + detail::escape(o.id) + " (degree " + degree + ")</title>";
        if (const auto* r = std::get_if<Rect>(&o.shape)) {
            out += "    <rect class=\"obstacle\" x=\"" + num(px(r->xmin)) + "\" y=\"" + num(py(r->ymax)) +
                   "\" width=\"" + num(r->width() * scale) + "\" height=\"" + num(r->height() * scale) + "\"" +
                   common + ">" + title + "</rect>\n";
        } else {
            const auto& c = std::get<Circle>(o.shape);
            out += "    <circle class=\"obstacle\" cx=\"" + num(px(c.cx)) + "\" cy=\"" + num(py(c.cy)) + "\" r=\"" +
                   num(c.radius * scale) + "\"" + common + ">" + title + "</circle>\n";
        }
    }

    if (result) {
        const auto polyline = [&](const std::vector<Configuration>& path, bool chosen) {
            std::string points;
            for (const auto& q : path) {
                if (!points.empty()) {
                    points += ' ';
                }
                points += num(px(q.x)) + "," + num(py(q.y));
            }
            std::string line = "    <polyline class=\"" + std::string(chosen ? "chosen" : "candidate") +
                               "\" points=\"" + points + "\" fill=\"none\"";
            line += chosen ? " stroke=\"#c0392b\" stroke-width=\"2.5\"" : " stroke=\"#1f4e9c\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"";
            return line + "/>\n";
        };
        for (std::size_t i = 0; i < result->paths.size(); ++i) {
            if (result->chosen != i) {
                out += polyline(result->paths[i], false);
            }
        }
        if (result->chosen) {
            out += polyline(result->paths[*result->chosen], true);
        }
    }
    out += "  </g>\n";

    const auto marker = [&](const Configuration& q, const char* label) {
        return "  <circle class=\"endpoint\" cx=\"" + num(px(q.x)) + "\" cy=\"" + num(py(q.y)) +
               "\" r=\"4.00\" fill=\"#000000\"/>\n  <text x=\"" + num(px(q.x) + 6) + "\" y=\"" + num(py(q.y) - 6) +
               "\" font-family=\"sans-serif\" font-size=\"14\">" + label + "</text>\n";
    };
    out += marker(s.start, "A");
    out += marker(s.goal, "B");
    out += "</svg>\n";
    return out;
}

} // namespace fuzzyplan::svg
