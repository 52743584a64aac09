#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "wentzell/csv.hpp"
#include "wentzell/errors.hpp"

namespace wentzell {

struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
};

struct PlotAxes {
    std::string title, xlabel, ylabel;
    bool logx = false;
    bool logy = false;
};

/// Writes a standalone SVG line plot. Output is a pure function of the
/// inputs (fixed layout, 17-digit coordinates), so identical data gives
/// byte-identical files. Points with non-positive coordinates on a log
/// axis are skipped.
inline void emit_svg_plot(const std::vector<PlotSeries>& series, const PlotAxes& axes,
                          const std::filesystem::path& path) {
    if (series.empty()) throw ConfigError("svg plot: empty series list");
    for (const auto& s : series)
        if (s.x.empty() || s.x.size() != s.y.size())
            throw ConfigError("svg plot: series '" + s.label +
                              "' is empty or has mismatched lengths");

    auto usable = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!axes.logx || x > 0.0) &&
               (!axes.logy || y > 0.0);
    };
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    bool any = false;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!usable(s.x[i], s.y[i])) continue;
            const double tx = axes.logx ? std::log10(s.x[i]) : s.x[i];
            const double ty = axes.logy ? std::log10(s.y[i]) : s.y[i];
            if (!any) {
                xmin = xmax = tx;
                ymin = ymax = ty;
                any = true;
            } else {
                xmin = std::min(xmin, tx);
                xmax = std::max(xmax, tx);
                ymin = std::min(ymin, ty);
                ymax = std::max(ymax, ty);
            }
        }
    if (!any) throw ConfigError("svg plot: no drawable points");
    if (xmax == xmin) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax == ymin) {
        ymin -= 0.5;
        ymax += 0.5;
    }

    const double W = 720, H = 480;
    const double L = 80, R = 30, T = 40, B = 60;
    auto px = [&](double tx) { return L + (tx - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double ty) { return H - B - (ty - ymin) / (ymax - ymin) * (H - T - B); };

    static const char* palette[] = {"#1f6fb2", "#c23b22", "#3a923a", "#8a5fbf",
                                    "#b8860b", "#2b2b2b"};

    std::ofstream out(path);
    if (!out) throw ConfigError("svg plot: cannot open " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
        << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << axes.title << "</text>\n";

    // axes box + 5 ticks per axis
    out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R
        << "\" height=\"" << H - T - B
        << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    char lbl[64];
    for (int i = 0; i <= 4; ++i) {
        const double tx = xmin + (xmax - xmin) * i / 4.0;
        const double vx = axes.logx ? std::pow(10.0, tx) : tx;
        std::snprintf(lbl, sizeof(lbl), "%.4g", vx);
        out << "<line x1=\"" << format_g17(px(tx)) << "\" y1=\"" << H - B << "\" x2=\""
            << format_g17(px(tx)) << "\" y2=\"" << H - B + 5
            << "\" stroke=\"#444444\"/>\n";
        out << "<text x=\"" << format_g17(px(tx)) << "\" y=\"" << H - B + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << lbl << "</text>\n";
        const double ty = ymin + (ymax - ymin) * i / 4.0;
        const double vy = axes.logy ? std::pow(10.0, ty) : ty;
        std::snprintf(lbl, sizeof(lbl), "%.4g", vy);
        out << "<line x1=\"" << L - 5 << "\" y1=\"" << format_g17(py(ty)) << "\" x2=\""
            << L << "\" y2=\"" << format_g17(py(ty)) << "\" stroke=\"#444444\"/>\n";
        out << "<text x=\"" << L - 8 << "\" y=\"" << format_g17(py(ty) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << lbl << "</text>\n";
    }
    out << "<text x=\"" << W / 2 << "\" y=\"" << H - 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << axes.xlabel << (axes.logx ? " (log)" : "") << "</text>\n";
    out << "<text x=\"20\" y=\"" << H / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 20 " << H / 2 << ")\">" << axes.ylabel
        << (axes.logy ? " (log)" : "") << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        out << "<polyline fill=\"none\" stroke=\"" << palette[si % 6]
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!usable(s.x[i], s.y[i])) continue;
            const double tx = axes.logx ? std::log10(s.x[i]) : s.x[i];
            const double ty = axes.logy ? std::log10(s.y[i]) : s.y[i];
            out << format_g17(px(tx)) << ',' << format_g17(py(ty)) << ' ';
        }
        out << "\"/>\n";
        out << "<text x=\"" << W - R - 8 << "\" y=\"" << T + 18 + 16 * si
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
            << "fill=\"" << palette[si % 6] << "\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace wentzell
