/// @file svgplot.cpp
/// @brief SVG emission for line plots and heatmaps.

#include "ekman/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ekman {

namespace {

// Fixed layout; leaves room for the title, tick labels, and footer.
constexpr int kMarL = 72, kMarR = 18, kMarT = 46, kMarB = 64;

const char* kPalette[] = {"#1b6ca8", "#c23b22", "#2e8540", "#8a4f9e", "#b8860b"};
constexpr int kPaletteN = 5;

std::string num(double v, const char* spec = "%.2f") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out += c;
    }
    return out;
}

struct Canvas {
    std::ostringstream os;
    int w, h;

    Canvas(const SvgOptions& opt) : w(opt.width), h(opt.height) {
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
           << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
        os << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
        if (!opt.title.empty())
            text(w / 2.0, 24, escape(opt.title), 15, "middle", "#222222");
        if (!opt.xlabel.empty())
            text(kMarL + (w - kMarL - kMarR) / 2.0, h - 28, escape(opt.xlabel), 12,
                 "middle", "#222222");
        if (!opt.ylabel.empty())
            os << "<text x=\"16\" y=\"" << kMarT + (h - kMarT - kMarB) / 2.0
               << "\" font-size=\"12\" fill=\"#222222\" text-anchor=\"middle\""
               << " transform=\"rotate(-90 16 " << kMarT + (h - kMarT - kMarB) / 2.0
               << ")\" font-family=\"sans-serif\">" << escape(opt.ylabel) << "</text>\n";
        if (!opt.footer.empty())
            text(8, h - 8, escape(opt.footer), 10, "start", "#888888");
    }

    void text(double x, double y, const std::string& s, int size,
              const char* anchor, const char* color) {
        os << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << size
           << "\" fill=\"" << color << "\" text-anchor=\"" << anchor
           << "\" font-family=\"sans-serif\">" << s << "</text>\n";
    }

    void line(double x1, double y1, double x2, double y2, const char* color,
              double width, const char* dash = nullptr) {
        os << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2)
           << "\" y2=\"" << num(y2) << "\" stroke=\"" << color << "\" stroke-width=\""
           << num(width, "%.1f") << "\"";
        if (dash) os << " stroke-dasharray=\"" << dash << "\"";
        os << "/>\n";
    }

    std::string finish() {
        os << "</svg>\n";
        return os.str();
    }
};

struct Bounds {
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool any = false;
};

}  // namespace

std::string svg_line_plot(const std::vector<PlotSeries>& series, const SvgOptions& opt) {
    Canvas cv(opt);
    const double px0 = kMarL, px1 = opt.width - kMarR;
    const double py0 = opt.height - kMarB, py1 = kMarT;  // y grows downward

    auto usable = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!opt.logy || y > 0.0);
    };

    Bounds b;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("svg_line_plot: series '" + s.label +
                                        "' has mismatched x/y lengths");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!usable(s.x[i], s.y[i])) continue;
            double yv = opt.logy ? std::log10(s.y[i]) : s.y[i];
            if (!b.any) {
                b = {s.x[i], s.x[i], yv, yv, true};
            } else {
                b.xmin = std::min(b.xmin, s.x[i]);
                b.xmax = std::max(b.xmax, s.x[i]);
                b.ymin = std::min(b.ymin, yv);
                b.ymax = std::max(b.ymax, yv);
            }
        }
    }

    if (!b.any) {
        cv.text(opt.width / 2.0, (py0 + py1) / 2.0, "no data", 16, "middle", "#999999");
        return cv.finish();
    }

    auto pad = [](double& lo, double& hi) {
        double span = hi - lo;
        if (span <= 0.0) span = std::max(1.0, std::abs(lo)) * 0.2;
        lo -= 0.05 * span;
        hi += 0.05 * span;
    };
    pad(b.xmin, b.xmax);
    pad(b.ymin, b.ymax);

    auto sx = [&](double x) { return px0 + (x - b.xmin) / (b.xmax - b.xmin) * (px1 - px0); };
    auto sy = [&](double y) { return py0 + (y - b.ymin) / (b.ymax - b.ymin) * (py1 - py0); };

    // frame, grid, and ticks
    cv.line(px0, py0, px1, py0, "#444444", 1.0);
    cv.line(px0, py0, px0, py1, "#444444", 1.0);
    for (int t = 0; t <= 4; ++t) {
        double fx = b.xmin + (b.xmax - b.xmin) * t / 4.0;
        double fy = b.ymin + (b.ymax - b.ymin) * t / 4.0;
        cv.line(sx(fx), py0, sx(fx), py1, "#e6e6e6", 0.6);
        cv.line(sy(fy) == 0 ? px0 : px0, sy(fy), px1, sy(fy), "#e6e6e6", 0.6);
        cv.text(sx(fx), py0 + 16, num(fx, "%.4g"), 10, "middle", "#444444");
        double label = opt.logy ? std::pow(10.0, fy) : fy;
        cv.text(px0 - 6, sy(fy) + 3, num(label, "%.3g"), 10, "end", "#444444");
    }

    int color_i = 0;
    double legend_y = py1 + 14;
    for (const auto& s : series) {
        const char* color = kPalette[color_i % kPaletteN];
        ++color_i;
        std::ostringstream path;
        bool pen_down = false;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!usable(s.x[i], s.y[i])) {
                pen_down = false;
                continue;
            }
            double yv = opt.logy ? std::log10(s.y[i]) : s.y[i];
            path << (pen_down ? " L" : " M") << num(sx(s.x[i])) << "," << num(sy(yv));
            pen_down = true;
        }
        cv.os << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\"" << color
              << "\" stroke-width=\"1.6\"";
        if (s.dashed) cv.os << " stroke-dasharray=\"6 4\"";
        cv.os << "/>\n";
        if (!s.label.empty()) {
            cv.line(px1 - 150, legend_y - 4, px1 - 126, legend_y - 4, color, 1.6,
                    s.dashed ? "6 4" : nullptr);
            cv.text(px1 - 120, legend_y, escape(s.label), 11, "start", "#222222");
            legend_y += 15;
        }
    }
    return cv.finish();
}

std::string svg_heatmap(const std::vector<double>& v, int nx, int ny,
                        const SvgOptions& opt) {
    if (nx < 1 || ny < 1 || v.size() != static_cast<std::size_t>(nx) * ny)
        throw std::invalid_argument("svg_heatmap: value count does not match nx*ny");
    Canvas cv(opt);
    const double px0 = kMarL, px1 = opt.width - kMarR;
    const double py0 = opt.height - kMarB, py1 = kMarT;

    double vmax = 0.0;
    for (double x : v)
        if (std::isfinite(x)) vmax = std::max(vmax, std::abs(x));

    auto channel = [](double lo, double hi, double t) {
        return static_cast<int>(std::lround(lo + (hi - lo) * t));
    };
    // symmetric diverging scale: blue for negative, white at zero, red positive
    auto color = [&](double x) {
        double t = vmax > 0.0 ? std::clamp(x / vmax, -1.0, 1.0) : 0.0;
        int r, g, bl;
        if (t < 0.0) {
            r = channel(0x21, 0xf7, 1.0 + t);
            g = channel(0x66, 0xf7, 1.0 + t);
            bl = channel(0xac, 0xf7, 1.0 + t);
        } else {
            r = channel(0xf7, 0xb2, t);
            g = channel(0xf7, 0x18, t);
            bl = channel(0xf7, 0x2b, t);
        }
        char buf[8];
        std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, bl);
        return std::string(buf);
    };

    const double cw = (px1 - px0) / nx, ch = (py0 - py1) / ny;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            double x = px0 + i * cw;
            double y = py0 - (j + 1) * ch;  // j = 0 sits at the bottom
            cv.os << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\""
                  << num(cw + 0.5) << "\" height=\"" << num(ch + 0.5) << "\" fill=\""
                  << color(v[i + static_cast<std::size_t>(nx) * j]) << "\"/>\n";
        }

    double lo = 0.0, hi = 0.0;
    for (double x : v)
        if (std::isfinite(x)) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    cv.text(px1, 38, "min " + num(lo, "%.6g") + "   max " + num(hi, "%.6g"), 11, "end",
            "#444444");
    cv.line(px0, py0, px1, py0, "#444444", 1.0);
    cv.line(px0, py0, px0, py1, "#444444", 1.0);
    return cv.finish();
}

}  // namespace ekman
