// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <string>
#include <vector>

namespace mistweet {

struct BarSeries {
    std::string name;
    std::vector<double> values;  // aligned with BarChart::categories
};

struct BarChart {
    std::string title;
    std::vector<std::string> categories;
    std::vector<BarSeries> series;
};

// Minimal deterministic grouped-bar SVG: bars, axis ticks, legend. Values
// must be non-negative.
std::string render_bar_chart(const BarChart& chart);
void write_bar_chart(const BarChart& chart, const std::string& path);

}  // namespace mistweet
