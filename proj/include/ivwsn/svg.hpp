#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ivwsn/types.hpp"

namespace ivwsn {

/// One plotted series: scatter markers or a polyline.
struct SvgSeries {
    std::string label;
    std::string color;
    bool line = false;
    std::vector<std::pair<double, double>> points;
};

/// Minimal self-contained SVG chart: fixed viewBox, linear axes with "nice"
/// ticks, legend. No timestamps or external references, so identical inputs
/// render byte-identical files.
class SvgChart {
  public:
    SvgChart(std::string title, std::string x_label, std::string y_label)
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

    void add_series(SvgSeries series) { series_.push_back(std::move(series)); }

    void render(std::ostream& out) const {
        const double width = 900, height = 560;
        const double ml = 72, mr = 160, mt = 48, mb = 56;  // margins; legend on the right
        const double pw = width - ml - mr, ph = height - mt - mb;

        double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
        bool any = false;
        for (const auto& s : series_)
            for (const auto& [x, y] : s.points) {
                if (!any) {
                    xmin = xmax = x;
                    ymin = ymax = y;
                    any = true;
                } else {
                    xmin = std::min(xmin, x);
                    xmax = std::max(xmax, x);
                    ymin = std::min(ymin, y);
                    ymax = std::max(ymax, y);
                }
            }
        if (xmax == xmin) xmax = xmin + 1;
        if (ymax == ymin) ymax = ymin + 1;
        const double xpad = 0.04 * (xmax - xmin), ypad = 0.06 * (ymax - ymin);
        xmin -= xpad;
        xmax += xpad;
        ymin -= ypad;
        ymax += ypad;

        auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
        auto py = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << fmt(width) << ' '
            << fmt(height) << "\" font-family=\"sans-serif\">\n";
        out << "<rect width=\"" << fmt(width) << "\" height=\"" << fmt(height)
            << "\" fill=\"white\"/>\n";
        out << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"28\" text-anchor=\"middle\" "
               "font-size=\"18\">"
            << escape(title_) << "</text>\n";

        for (double tick : ticks(xmin, xmax)) {
            const double x = px(tick);
            out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(mt) << "\" x2=\"" << fmt(x)
                << "\" y2=\"" << fmt(mt + ph) << "\" stroke=\"#e0e0e0\"/>\n";
            out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(mt + ph + 20)
                << "\" text-anchor=\"middle\" font-size=\"12\">" << fmt(tick) << "</text>\n";
        }
        for (double tick : ticks(ymin, ymax)) {
            const double y = py(tick);
            out << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(ml + pw)
                << "\" y2=\"" << fmt(y) << "\" stroke=\"#e0e0e0\"/>\n";
            out << "<text x=\"" << fmt(ml - 8) << "\" y=\"" << fmt(y + 4)
                << "\" text-anchor=\"end\" font-size=\"12\">" << fmt(tick) << "</text>\n";
        }
        out << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\"" << fmt(pw)
            << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"#404040\"/>\n";
        out << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"" << fmt(height - 12)
            << "\" text-anchor=\"middle\" font-size=\"14\">" << escape(x_label_) << "</text>\n";
        out << "<text x=\"20\" y=\"" << fmt(mt + ph / 2)
            << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 "
            << fmt(mt + ph / 2) << ")\">" << escape(y_label_) << "</text>\n";

        for (const auto& s : series_) {
            if (s.line && s.points.size() > 1) {
                out << "<polyline fill=\"none\" stroke=\"" << s.color
                    << "\" stroke-width=\"1.5\" points=\"";
                for (const auto& [x, y] : s.points) out << fmt(px(x)) << ',' << fmt(py(y)) << ' ';
                out << "\"/>\n";
            } else {
                for (const auto& [x, y] : s.points)
                    out << "<circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y))
                        << "\" r=\"3.5\" fill=\"" << s.color << "\" fill-opacity=\"0.85\"/>\n";
            }
        }

        double ly = mt + 10;
        for (const auto& s : series_) {
            out << "<rect x=\"" << fmt(ml + pw + 16) << "\" y=\"" << fmt(ly - 9)
                << "\" width=\"12\" height=\"12\" fill=\"" << s.color << "\"/>\n";
            out << "<text x=\"" << fmt(ml + pw + 34) << "\" y=\"" << fmt(ly + 2)
                << "\" font-size=\"13\">" << escape(s.label) << "</text>\n";
            ly += 20;
        }
        out << "</svg>\n";
    }

  private:
    static std::string fmt(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return buf;
    }

    static std::string escape(const std::string& s) {
        std::string out;
        for (char c : s) {
            switch (c) {
                case '&': out += "&amp;"; break;
                case '<': out += "&lt;"; break;
                case '>': out += "&gt;"; break;
                default: out += c;
            }
        }
        return out;
    }

    /// Round tick spacing to 1/2/5 decades, at most ~8 ticks.
    static std::vector<double> ticks(double lo, double hi) {
        const double raw = (hi - lo) / 6.0;
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        double step = mag;
        for (double m : {1.0, 2.0, 5.0, 10.0}) {
            if (raw <= m * mag) {
                step = m * mag;
                break;
            }
        }
        std::vector<double> out;
        double t = std::ceil(lo / step) * step;
        for (; t <= hi + step * 1e-9; t += step) out.push_back(t == 0.0 ? 0.0 : t);
        return out;
    }

    std::string title_, x_label_, y_label_;
    std::vector<SvgSeries> series_;
};

/// Series colors keyed by technology, consistent across all charts.
inline const char* tech_color(Technology t) {
    switch (t) {
        case Technology::Band2_4GHz: return "#1f77b4";
        case Technology::Uwb: return "#2ca02c";
        case Technology::MmWave: return "#d62728";
    }
    return "#000000";
}

}  // namespace ivwsn
