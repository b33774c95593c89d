#include "mflow/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace mflow {

namespace {

void num(std::string& out, double v) {
    // fixed two-decimal pixel coordinates keep the output compact and stable
    double r = std::round(v * 100.0) / 100.0;
    if (r == 0.0) r = 0.0;  // normalize -0
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), r, std::chars_format::fixed, 2);
    out.append(buf, res.ptr);
}

void gnum(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
    out.append(buf, res.ptr);
}

const char* kColors[] = {"#1f6fb2", "#c23b22", "#2c8a4b", "#8450a8", "#b07d18", "#3b3b3b"};

}  // namespace

std::string render_line_plot(const std::string& title, const std::vector<PlotSeries>& series,
                             int width, int height) {
    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, s.y[i]);
            y_hi = std::max(y_hi, s.y[i]);
        }
    if (!(x_hi > x_lo)) {
        x_lo -= 1.0;
        x_hi += 1.0;
    }
    if (!(y_hi > y_lo)) {
        y_lo -= 1.0;
        y_hi += 1.0;
    }
    const double ml = 64, mr = 16, mt = 34, mb = 40;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto px = [&](double v) { return ml + (v - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double v) { return mt + ph - (v - y_lo) / (y_hi - y_lo) * ph; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + std::to_string(width / 2) +
           "\" y=\"20\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"14\">" +
           title + "</text>\n";

    // axes
    svg += "<g stroke=\"#444\" stroke-width=\"1\">\n";
    {
        std::string l = "<line x1=\"";
        num(l, ml);
        l += "\" y1=\"";
        num(l, mt + ph);
        l += "\" x2=\"";
        num(l, ml + pw);
        l += "\" y2=\"";
        num(l, mt + ph);
        l += "\"/>\n<line x1=\"";
        num(l, ml);
        l += "\" y1=\"";
        num(l, mt);
        l += "\" x2=\"";
        num(l, ml);
        l += "\" y2=\"";
        num(l, mt + ph);
        l += "\"/>\n";
        svg += l;
    }
    svg += "</g>\n";

    // ticks
    svg += "<g font-family=\"monospace\" font-size=\"11\" fill=\"#333\">\n";
    for (int i = 0; i <= 4; ++i) {
        double xv = x_lo + (x_hi - x_lo) * i / 4.0;
        double yv = y_lo + (y_hi - y_lo) * i / 4.0;
        std::string t = "<text x=\"";
        num(t, px(xv));
        t += "\" y=\"";
        num(t, mt + ph + 16);
        t += "\" text-anchor=\"middle\">";
        gnum(t, xv);
        t += "</text>\n<text x=\"";
        num(t, ml - 6);
        t += "\" y=\"";
        num(t, py(yv) + 4);
        t += "\" text-anchor=\"end\">";
        gnum(t, yv);
        t += "</text>\n";
        svg += t;
    }
    svg += "</g>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& ser = series[s];
        std::string poly = "<polyline fill=\"none\" stroke=\"";
        poly += kColors[s % 6];
        poly += "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < ser.x.size(); ++i) {
            if (i) poly += ' ';
            num(poly, px(ser.x[i]));
            poly += ',';
            num(poly, py(ser.y[i]));
        }
        poly += "\"/>\n";
        svg += poly;
        // legend entry
        std::string leg = "<text x=\"" + std::to_string(width - 150) + "\" y=\"" +
                          std::to_string(36 + 16 * static_cast<int>(s)) +
                          "\" font-family=\"monospace\" font-size=\"12\" fill=\"";
        leg += kColors[s % 6];
        leg += "\">";
        leg += ser.label;
        leg += "</text>\n";
        svg += leg;
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace mflow
