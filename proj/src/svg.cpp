// SPDX-License-Identifier: Apache-2.0
//
// rtdiff - toolkit for comparing ray tracing channel simulations
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rtdiff/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace rtdiff {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// light to dark blue, linear in sRGB
std::string color_for(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(247.0 + t * (8.0 - 247.0)));
    const int g = static_cast<int>(std::lround(251.0 + t * (81.0 - 251.0)));
    const int b = static_cast<int>(std::lround(255.0 + t * (156.0 - 255.0)));
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

struct ValueRange {
    double lo = 0.0;
    double hi = 0.0;
    bool any = false;
    double scale(double v) const {
        if (!any || hi - lo <= 0.0) return 0.0;
        return (v - lo) / (hi - lo);
    }
};

void write_legend(std::ofstream& out, double x, double y, double width,
                  const ValueRange& range, const std::string& label) {
    constexpr int steps = 10;
    const double bar_h = 12.0;
    const double step_w = width / steps;
    for (int i = 0; i < steps; ++i) {
        out << "<rect x=\"" << fmt(x + i * step_w) << "\" y=\"" << fmt(y) << "\" width=\""
            << fmt(step_w + 0.5) << "\" height=\"" << fmt(bar_h) << "\" fill=\""
            << color_for((i + 0.5) / steps) << "\"/>\n";
    }
    out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y + bar_h + 12.0)
        << "\" font-size=\"10\" font-family=\"sans-serif\">" << (range.any ? fmt(range.lo) : "n/a")
        << "</text>\n";
    out << "<text x=\"" << fmt(x + width) << "\" y=\"" << fmt(y + bar_h + 12.0)
        << "\" font-size=\"10\" font-family=\"sans-serif\" text-anchor=\"end\">"
        << (range.any ? fmt(range.hi) : "n/a") << "</text>\n";
    out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y - 4.0)
        << "\" font-size=\"11\" font-family=\"sans-serif\">" << label << "</text>\n";
}

}  // namespace

void write_grid_heatmap_svg(const GridMap& map, Channel channel, const std::string& path) {
    const int nx = map.layout.nx;
    const int ny = map.layout.ny;
    const double cell_px = std::clamp(800.0 / std::max(nx, ny), 2.0, 24.0);
    const double plot_w = nx * cell_px;
    const double plot_h = ny * cell_px;
    const double margin = 20.0;
    const double legend_h = 48.0;
    const double width = plot_w + 2 * margin;
    const double height = plot_h + 2 * margin + legend_h;

    ValueRange range;
    range.lo = std::numeric_limits<double>::infinity();
    range.hi = -std::numeric_limits<double>::infinity();
    for (const auto& cell : map.cells) {
        if (!cell || cell->cmp.status != CompareStatus::Ok) continue;
        const double v = channel_value(cell->cmp, channel);
        range.lo = std::min(range.lo, v);
        range.hi = std::max(range.hi, v);
        range.any = true;
    }
    if (!range.any) range.lo = range.hi = 0.0;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
        << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << " "
        << fmt(height) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // y axis points north: row 0 is drawn at the bottom
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const auto& cell = map.cells[map.cell_index(ix, iy)];
            if (!cell || cell->cmp.status != CompareStatus::Ok) continue;
            const double v = channel_value(cell->cmp, channel);
            const double x = margin + ix * cell_px;
            const double y = margin + (ny - 1 - iy) * cell_px;
            out << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\""
                << fmt(cell_px) << "\" height=\"" << fmt(cell_px) << "\" fill=\""
                << color_for(range.scale(v)) << "\"/>\n";
        }
    }

    out << "<rect x=\"" << fmt(margin) << "\" y=\"" << fmt(margin) << "\" width=\""
        << fmt(plot_w) << "\" height=\"" << fmt(plot_h)
        << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    write_legend(out, margin, margin + plot_h + 24.0, plot_w, range,
                 std::string(channel_name(channel)));
    out << "</svg>\n";
}

void write_trajectory_chart_svg(const TrajectorySeries& series, Channel channel,
                                const std::string& path) {
    const double width = 800.0;
    const double height = 300.0;
    const double margin = 40.0;
    const double plot_w = width - 2 * margin;
    const double plot_h = height - 2 * margin;

    double t_lo = 0.0, t_hi = 1.0;
    if (!series.steps.empty()) {
        t_lo = series.steps.front().t_s;
        t_hi = series.steps.back().t_s;
        if (t_hi - t_lo <= 0.0) t_hi = t_lo + 1.0;
    }
    ValueRange range;
    range.lo = std::numeric_limits<double>::infinity();
    range.hi = -std::numeric_limits<double>::infinity();
    for (const TrajectoryStep& s : series.steps) {
        if (s.cmp.status != CompareStatus::Ok) continue;
        const double v = channel_value(s.cmp, channel);
        range.lo = std::min(range.lo, v);
        range.hi = std::max(range.hi, v);
        range.any = true;
    }
    if (!range.any) range.lo = range.hi = 0.0;
    const double v_span = range.hi - range.lo > 0.0 ? range.hi - range.lo : 1.0;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
        << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << " "
        << fmt(height) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<rect x=\"" << fmt(margin) << "\" y=\"" << fmt(margin) << "\" width=\""
        << fmt(plot_w) << "\" height=\"" << fmt(plot_h)
        << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";

    // polyline segments, broken at non-ok steps
    std::string points;
    auto flush = [&]() {
        if (!points.empty()) {
            out << "<polyline fill=\"none\" stroke=\"#08519c\" stroke-width=\"1.5\" points=\""
                << points << "\"/>\n";
            points.clear();
        }
    };
    for (const TrajectoryStep& s : series.steps) {
        if (s.cmp.status != CompareStatus::Ok) {
            flush();
            continue;
        }
        const double v = channel_value(s.cmp, channel);
        const double x = margin + (s.t_s - t_lo) / (t_hi - t_lo) * plot_w;
        const double y = margin + plot_h - (v - range.lo) / v_span * plot_h;
        if (!points.empty()) points += ' ';
        points += fmt(x);
        points += ',';
        points += fmt(y);
    }
    flush();

    out << "<text x=\"" << fmt(margin) << "\" y=\"" << fmt(margin - 8.0)
        << "\" font-size=\"11\" font-family=\"sans-serif\">" << channel_name(channel)
        << " [" << (range.any ? fmt(range.lo) : "n/a") << ", "
        << (range.any ? fmt(range.hi) : "n/a") << "]</text>\n";
    out << "<text x=\"" << fmt(margin) << "\" y=\"" << fmt(height - 8.0)
        << "\" font-size=\"10\" font-family=\"sans-serif\">t = " << fmt(t_lo) << " s</text>\n";
    out << "<text x=\"" << fmt(width - margin) << "\" y=\"" << fmt(height - 8.0)
        << "\" font-size=\"10\" font-family=\"sans-serif\" text-anchor=\"end\">t = "
        << fmt(t_hi) << " s</text>\n";
    out << "</svg>\n";
}

}  // namespace rtdiff
