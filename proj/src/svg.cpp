// Apache License, Version 2.0, refer to LICENSE.txt
#include "svg.hpp"

#include <algorithm>
#include <array>
#include <fstream>

#include "errors.hpp"
#include "textutil.hpp"

namespace mistweet {

namespace {

constexpr std::array<const char*, 6> kPalette = {"#4C78A8", "#F58518", "#54A24B",
                                                 "#E45756", "#79706E", "#D67195"};

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
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

std::string num(double v) { return format_fixed(v, 2); }

}  // namespace

std::string render_bar_chart(const BarChart& chart) {
    if (chart.categories.empty()) throw InputError("bar chart: no categories");
    if (chart.series.empty()) throw InputError("bar chart: no series");
    for (const auto& s : chart.series) {
        if (s.values.size() != chart.categories.size())
            throw InputError("bar chart: series '" + s.name + "' misaligned with categories");
        for (double v : s.values)
            if (v < 0.0) throw InputError("bar chart: negative value in series '" + s.name + "'");
    }

    const double width = 640.0, height = 360.0;
    const double left = 56.0, right = 16.0, top = 40.0, bottom = 56.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    double max_v = 0.0;
    for (const auto& s : chart.series)
        for (double v : s.values) max_v = std::max(max_v, v);
    if (max_v <= 0.0) max_v = 1.0;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
           num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
    svg += "<rect width=\"" + num(width) + "\" height=\"" + num(height) + "\" fill=\"#FFFFFF\"/>\n";
    svg += "<text x=\"" + num(width / 2.0) + "\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" "
           "text-anchor=\"middle\">" + escape_xml(chart.title) + "</text>\n";

    // Horizontal gridlines and tick labels at quarters of the max.
    for (int i = 0; i <= 4; ++i) {
        const double frac = static_cast<double>(i) / 4.0;
        const double y = top + plot_h * (1.0 - frac);
        svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(y) + "\" x2=\"" + num(left + plot_w) +
               "\" y2=\"" + num(y) + "\" stroke=\"#DDDDDD\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + num(left - 6.0) + "\" y=\"" + num(y + 4.0) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
               format_double(max_v * frac) + "</text>\n";
    }

    const std::size_t nc = chart.categories.size();
    const std::size_t ns = chart.series.size();
    const double group_w = plot_w / static_cast<double>(nc);
    const double bar_w = group_w * 0.8 / static_cast<double>(ns);
    for (std::size_t c = 0; c < nc; ++c) {
        for (std::size_t s = 0; s < ns; ++s) {
            const double v = chart.series[s].values[c];
            const double h = plot_h * (v / max_v);
            const double x =
                left + group_w * static_cast<double>(c) + group_w * 0.1 + bar_w * static_cast<double>(s);
            const double y = top + plot_h - h;
            svg += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(bar_w) +
                   "\" height=\"" + num(h) + "\" fill=\"" + kPalette[s % kPalette.size()] +
                   "\"/>\n";
        }
        svg += "<text x=\"" + num(left + group_w * (static_cast<double>(c) + 0.5)) + "\" y=\"" +
               num(top + plot_h + 18.0) +
               "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
               escape_xml(chart.categories[c]) + "</text>\n";
    }

    double lx = left;
    const double ly = height - 14.0;
    for (std::size_t s = 0; s < ns; ++s) {
        svg += "<rect x=\"" + num(lx) + "\" y=\"" + num(ly - 10.0) +
               "\" width=\"12\" height=\"12\" fill=\"" + kPalette[s % kPalette.size()] + "\"/>\n";
        svg += "<text x=\"" + num(lx + 16.0) + "\" y=\"" + num(ly) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + escape_xml(chart.series[s].name) +
               "</text>\n";
        lx += 24.0 + 7.0 * static_cast<double>(chart.series[s].name.size());
    }

    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" +
           num(top + plot_h) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + plot_h) + "\" x2=\"" +
           num(left + plot_w) + "\" y2=\"" + num(top + plot_h) +
           "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "</svg>\n";
    return svg;
}

void write_bar_chart(const BarChart& chart, const std::string& path) {
    const std::string svg = render_bar_chart(chart);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << svg;
    if (!out) throw InputError("cannot write " + path);
}

}  // namespace mistweet
