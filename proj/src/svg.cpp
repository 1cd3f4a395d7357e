#include "projsq/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "projsq/fock.hpp"

namespace projsq {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 72;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 56;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
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

}  // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<SvgSeries>& series) {
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    bool any = false;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw InvalidArgument("svg_line_chart: x/y length mismatch in '" +
                                  s.label + "'");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (!any) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                any = true;
            } else {
                xmin = std::min(xmin, s.x[i]);
                xmax = std::max(xmax, s.x[i]);
                ymin = std::min(ymin, s.y[i]);
                ymax = std::max(ymax, s.y[i]);
            }
        }
    }
    if (!any) throw InvalidArgument("svg_line_chart: no finite data points");
    if (xmax == xmin) { xmax += 0.5; xmin -= 0.5; }
    if (ymax == ymin) { ymax += 0.5; ymin -= 0.5; }
    const double xpad = 0.05 * (xmax - xmin), ypad = 0.08 * (ymax - ymin);
    xmin -= xpad; xmax += xpad;
    ymin -= ypad; ymax += ypad;

    const double px0 = kMarginLeft, px1 = kWidth - kMarginRight;
    const double py0 = kHeight - kMarginBottom, py1 = kMarginTop;
    const auto sx = [&](double x) {
        return px0 + (x - xmin) / (xmax - xmin) * (px1 - px0);
    };
    const auto sy = [&](double y) {
        return py0 + (y - ymin) / (ymax - ymin) * (py1 - py0);
    };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
    o << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
    o << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << escape(title) << "</text>\n";

    // Axes with five ticks per side.
    o << "<g stroke=\"#444\" stroke-width=\"1\">\n";
    o << "<line x1=\"" << num(px0) << "\" y1=\"" << num(py0) << "\" x2=\""
      << num(px1) << "\" y2=\"" << num(py0) << "\"/>\n";
    o << "<line x1=\"" << num(px0) << "\" y1=\"" << num(py0) << "\" x2=\""
      << num(px0) << "\" y2=\"" << num(py1) << "\"/>\n";
    o << "</g>\n";
    o << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#222\">\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = xmin + (xmax - xmin) * t / 4.0;
        const double fy = ymin + (ymax - ymin) * t / 4.0;
        o << "<line x1=\"" << num(sx(fx)) << "\" y1=\"" << num(py0)
          << "\" x2=\"" << num(sx(fx)) << "\" y2=\"" << num(py0 + 5)
          << "\" stroke=\"#444\"/>\n";
        o << "<text x=\"" << num(sx(fx)) << "\" y=\"" << num(py0 + 18)
          << "\" text-anchor=\"middle\">" << num(fx) << "</text>\n";
        o << "<line x1=\"" << num(px0 - 5) << "\" y1=\"" << num(sy(fy))
          << "\" x2=\"" << num(px0) << "\" y2=\"" << num(sy(fy))
          << "\" stroke=\"#444\"/>\n";
        o << "<text x=\"" << num(px0 - 8) << "\" y=\"" << num(sy(fy) + 4)
          << "\" text-anchor=\"end\">" << num(fy) << "</text>\n";
    }
    o << "<text x=\"" << (px0 + px1) / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(x_label)
      << "</text>\n";
    o << "<text x=\"18\" y=\"" << (py0 + py1) / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
      << (py0 + py1) / 2 << ")\">" << escape(y_label) << "</text>\n";
    o << "</g>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* color = kPalette[k % (sizeof(kPalette) / sizeof(*kPalette))];
        std::ostringstream pts;
        for (std::size_t i = 0; i < series[k].x.size(); ++i) {
            if (!std::isfinite(series[k].x[i]) || !std::isfinite(series[k].y[i]))
                continue;
            if (pts.tellp() > 0) pts << ' ';
            pts << num(sx(series[k].x[i])) << ',' << num(sy(series[k].y[i]));
        }
        o << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"2\" points=\"" << pts.str() << "\"/>\n";
        for (std::size_t i = 0; i < series[k].x.size(); ++i) {
            if (!std::isfinite(series[k].x[i]) || !std::isfinite(series[k].y[i]))
                continue;
            o << "<circle cx=\"" << num(sx(series[k].x[i])) << "\" cy=\""
              << num(sy(series[k].y[i])) << "\" r=\"3\" fill=\"" << color
              << "\"/>\n";
        }
        o << "<text x=\"" << num(px1 - 8) << "\" y=\""
          << num(py1 + 16 + 16 * double(k))
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
             "font-size=\"12\" fill=\""
          << color << "\">" << escape(series[k].label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace projsq
