#include "rootflow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace rootflow {

namespace {

constexpr int kSize = 640;
constexpr double kMargin = 40.0;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Box {
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;

    void include(double x, double y) {
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
    }
    void pad() {
        const double dx = x1 - x0, dy = y1 - y0;
        const double p = 0.05 * std::max({dx, dy, 1e-12});
        x0 -= p; x1 += p; y0 -= p; y1 += p;
    }
};

std::string header(const std::string& title) {
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(kSize) + "\" height=\"" + std::to_string(kSize) +
                    "\" viewBox=\"0 0 " + std::to_string(kSize) + " " + std::to_string(kSize) +
                    "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty())
        s += "<text x=\"12\" y=\"20\" font-family=\"monospace\" font-size=\"13\">" + title +
             "</text>\n";
    return s;
}

} // namespace

std::string scatter_svg(const std::vector<std::complex<double>>& points,
                        const std::string& title) {
    Box box;
    if (!points.empty()) {
        box = {points[0].real(), points[0].real(), points[0].imag(), points[0].imag()};
        for (const auto& z : points) box.include(z.real(), z.imag());
    }
    box.pad();
    // equal aspect: widen the smaller span
    const double span = std::max(box.x1 - box.x0, box.y1 - box.y0);
    const double cx = 0.5 * (box.x0 + box.x1), cy = 0.5 * (box.y0 + box.y1);
    box = {cx - 0.5 * span, cx + 0.5 * span, cy - 0.5 * span, cy + 0.5 * span};

    const double scale = (kSize - 2.0 * kMargin) / span;
    std::string s = header(title);
    for (const auto& z : points) {
        const double px = kMargin + (z.real() - box.x0) * scale;
        const double py = kSize - kMargin - (z.imag() - box.y0) * scale;
        s += "<circle cx=\"" + num(px) + "\" cy=\"" + num(py) +
             "\" r=\"1.8\" fill=\"#1f6fb2\"/>\n";
    }
    s += "<text x=\"12\" y=\"" + std::to_string(kSize - 8) +
         "\" font-family=\"monospace\" font-size=\"11\">[" + num(box.x0) + ", " + num(box.x1) +
         "] x [" + num(box.y0) + ", " + num(box.y1) + "]</text>\n</svg>\n";
    return s;
}

std::string polyline_svg(const std::vector<SvgSeries>& series, const std::string& title) {
    Box box;
    bool first = true;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (first) {
                box = {s.x[i], s.x[i], s.y[i], s.y[i]};
                first = false;
            } else {
                box.include(s.x[i], s.y[i]);
            }
        }
    box.pad();
    const double sx = (kSize - 2.0 * kMargin) / std::max(box.x1 - box.x0, 1e-300);
    const double sy = (kSize - 2.0 * kMargin) / std::max(box.y1 - box.y0, 1e-300);

    std::string out = header(title);
    for (const auto& s : series) {
        out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double px = kMargin + (s.x[i] - box.x0) * sx;
            const double py = kSize - kMargin - (s.y[i] - box.y0) * sy;
            out += num(px) + "," + num(py) + " ";
        }
        out += "\"/>\n";
    }
    out += "<text x=\"12\" y=\"" + std::to_string(kSize - 8) +
           "\" font-family=\"monospace\" font-size=\"11\">x:[" + num(box.x0) + ", " +
           num(box.x1) + "] y:[" + num(box.y0) + ", " + num(box.y1) + "]</text>\n</svg>\n";
    return out;
}

} // namespace rootflow
