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

#include "rtdiff/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "rtdiff/metrics.hpp"
#include "rtdiff/parallel.hpp"

namespace rtdiff {

namespace {

constexpr double grid_tol_m = 1e-6;

// Distinct sorted coordinate values, 1e-6 apart at least.
std::vector<double> distinct_sorted(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::vector<double> out;
    for (double v : values) {
        if (out.empty() || v - out.back() > grid_tol_m) out.push_back(v);
    }
    return out;
}

int lattice_index(double v, double origin, double step, const char* axis) {
    const double raw = (v - origin) / step;
    const double rounded = std::round(raw);
    if (std::abs(raw - rounded) * step > grid_tol_m)
        throw std::invalid_argument(std::string("receiver position off the grid lattice on ") +
                                    axis);
    return static_cast<int>(rounded);
}

}  // namespace

GridLayout infer_grid_layout(const Dataset& ds) {
    if (ds.receivers.empty())
        throw std::invalid_argument("cannot infer a grid from an empty dataset");

    std::vector<double> xs, ys;
    xs.reserve(ds.receivers.size());
    ys.reserve(ds.receivers.size());
    double zmin = std::numeric_limits<double>::infinity();
    double zmax = -std::numeric_limits<double>::infinity();
    for (const ReceiverEntry& r : ds.receivers) {
        xs.push_back(r.position.x());
        ys.push_back(r.position.y());
        zmin = std::min(zmin, r.position.z());
        zmax = std::max(zmax, r.position.z());
    }
    if (zmax - zmin > grid_tol_m)
        throw std::invalid_argument("grid layout requires a single receiver height");

    const std::vector<double> ux = distinct_sorted(xs);
    const std::vector<double> uy = distinct_sorted(ys);

    auto min_gap = [](const std::vector<double>& u) {
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < u.size(); ++i) gap = std::min(gap, u[i] - u[i - 1]);
        return gap;
    };

    GridLayout g;
    g.origin_x_m = ux.front();
    g.origin_y_m = uy.front();
    g.dx_m = ux.size() > 1 ? min_gap(ux) : 1.0;
    g.dy_m = uy.size() > 1 ? min_gap(uy) : 1.0;
    g.height_m = ds.receivers.front().position.z();

    // every distinct coordinate must land on the lattice
    for (double x : ux) lattice_index(x, g.origin_x_m, g.dx_m, "x");
    for (double y : uy) lattice_index(y, g.origin_y_m, g.dy_m, "y");

    g.nx = ux.size() > 1 ? lattice_index(ux.back(), g.origin_x_m, g.dx_m, "x") + 1 : 1;
    g.ny = uy.size() > 1 ? lattice_index(uy.back(), g.origin_y_m, g.dy_m, "y") + 1 : 1;
    return g;
}

std::vector<ReceiverComparison> compare_receivers(const PairedDatasets& paired,
                                                  const MetricConfig& cfg) {
    validate_metric_config(cfg);
    std::vector<ReceiverComparison> results(paired.pairs.size());
    parallel_for(paired.pairs.size(), [&](std::size_t i) {
        const PairedReceiver& p = paired.pairs[i];
        results[i].rx_id = p.rx_id;
        results[i].position = p.position;
        results[i].t_s = p.t_s;
        results[i].cmp = compare_path_sets(*p.a, *p.b, cfg);
    });
    return results;
}

GridMap compare_grid(const Dataset& a, const Dataset& b, const MetricConfig& cfg) {
    validate_metric_config(cfg);
    const PairedDatasets paired = pair_datasets(a, b);

    GridMap map;
    map.layout = infer_grid_layout(a);
    map.cells.assign(static_cast<std::size_t>(map.layout.nx) * map.layout.ny, std::nullopt);

    std::vector<std::size_t> cell_of_pair(paired.pairs.size());
    std::vector<char> taken(map.cells.size(), 0);
    for (std::size_t i = 0; i < paired.pairs.size(); ++i) {
        const PairedReceiver& p = paired.pairs[i];
        const int ix = lattice_index(p.position.x(), map.layout.origin_x_m, map.layout.dx_m, "x");
        const int iy = lattice_index(p.position.y(), map.layout.origin_y_m, map.layout.dy_m, "y");
        const std::size_t cell = map.cell_index(ix, iy);
        if (taken[cell])
            throw std::invalid_argument("two receivers share grid cell (" +
                                        std::to_string(ix) + ", " + std::to_string(iy) + ")");
        taken[cell] = 1;
        cell_of_pair[i] = cell;
    }

    std::vector<ReceiverComparison> results = compare_receivers(paired, cfg);
    for (std::size_t i = 0; i < results.size(); ++i)
        map.cells[cell_of_pair[i]] = std::move(results[i]);
    return map;
}

TrajectorySeries compare_trajectory(const Dataset& a, const Dataset& b,
                                    const MetricConfig& cfg) {
    validate_metric_config(cfg);
    const PairedDatasets paired = pair_datasets(a, b);

    TrajectorySeries series;
    series.skipped = paired.only_in_a;
    series.skipped.insert(series.skipped.end(), paired.only_in_b.begin(),
                          paired.only_in_b.end());

    for (const PairedReceiver& p : paired.pairs) {
        if (!p.t_s)
            throw std::invalid_argument("trajectory comparison requires timestamps (rx '" +
                                        p.rx_id + "' has none)");
    }

    std::vector<ReceiverComparison> results = compare_receivers(paired, cfg);
    std::vector<TrajectoryStep> steps(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        steps[i].t_s = *results[i].t_s;
        steps[i].position = results[i].position;
        steps[i].cmp = std::move(results[i].cmp);
    }
    std::sort(steps.begin(), steps.end(),
              [](const TrajectoryStep& l, const TrajectoryStep& r) { return l.t_s < r.t_s; });
    for (std::size_t i = 1; i < steps.size(); ++i) {
        if (!(steps[i].t_s > steps[i - 1].t_s))
            throw std::invalid_argument("trajectory timestamps must be strictly increasing");
    }
    series.steps = std::move(steps);
    return series;
}

RegionSummary summarize_region(const GridMap& map, double center_x_m, double center_y_m,
                               double radius_m) {
    if (!(radius_m > 0.0)) throw std::invalid_argument("region radius must be > 0");

    std::vector<const ComparisonResult*> in_region;
    for (const auto& cell : map.cells) {
        if (!cell) continue;
        const double dx = cell->position.x() - center_x_m;
        const double dy = cell->position.y() - center_y_m;
        if (std::hypot(dx, dy) <= radius_m) in_region.push_back(&cell->cmp);
    }

    RegionSummary rs;
    rs.summary = summarize_comparisons(std::span<const ComparisonResult* const>(in_region));
    rs.cells_in_region = rs.summary.count_ok;
    return rs;
}

std::vector<ConsistencyRow> spatial_consistency(const Dataset& ds, double radius_m,
                                                const MetricConfig& cfg) {
    if (!(radius_m > 0.0)) throw std::invalid_argument("consistency radius must be > 0");
    validate_metric_config(cfg);

    const std::size_t n = ds.receivers.size();
    std::vector<std::pair<std::size_t, std::size_t>> neighbor_pairs;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = ds.receivers[i].position.x() - ds.receivers[j].position.x();
            const double dy = ds.receivers[i].position.y() - ds.receivers[j].position.y();
            if (std::hypot(dx, dy) < radius_m) neighbor_pairs.emplace_back(i, j);
        }
    }

    struct PairResult {
        double crt = 0.0;
        bool ok = false;
    };
    std::vector<PairResult> pair_results(neighbor_pairs.size());
    parallel_for(neighbor_pairs.size(), [&](std::size_t k) {
        const auto [i, j] = neighbor_pairs[k];
        const ComparisonResult r =
            compare_path_sets(ds.receivers[i].paths, ds.receivers[j].paths, cfg);
        pair_results[k].ok = r.status == CompareStatus::Ok;
        pair_results[k].crt = r.crt;
    });

    std::vector<ConsistencyRow> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        rows[i].rx_id = ds.receivers[i].rx_id;
        rows[i].position = ds.receivers[i].position;
    }
    std::vector<double> crt_sum(n, 0.0);
    for (std::size_t k = 0; k < neighbor_pairs.size(); ++k) {
        const auto [i, j] = neighbor_pairs[k];
        ++rows[i].n_neighbors;
        ++rows[j].n_neighbors;
        if (pair_results[k].ok) {
            ++rows[i].n_ok;
            ++rows[j].n_ok;
            crt_sum[i] += pair_results[k].crt;
            crt_sum[j] += pair_results[k].crt;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (rows[i].n_ok > 0) rows[i].mean_crt = crt_sum[i] / static_cast<double>(rows[i].n_ok);
    return rows;
}

namespace {

void write_channel_columns(std::ofstream& out, const ComparisonResult* cmp) {
    for (Channel c : all_channels) {
        out << ',';
        if (cmp && cmp->status == CompareStatus::Ok) out << format_g9(channel_value(*cmp, c));
    }
}

std::string channel_header() {
    std::string h;
    for (Channel c : all_channels) {
        h += ',';
        h += channel_name(c);
    }
    return h;
}

}  // namespace

void write_grid_csv(const GridMap& map, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "ix,iy,x_m,y_m,status" << channel_header() << "\n";
    for (int iy = 0; iy < map.layout.ny; ++iy) {
        for (int ix = 0; ix < map.layout.nx; ++ix) {
            const auto& cell = map.cells[map.cell_index(ix, iy)];
            out << ix << ',' << iy << ',' << format_g9(map.cell_x(ix)) << ','
                << format_g9(map.cell_y(iy)) << ','
                << (cell ? to_string(cell->cmp.status) : "no-data");
            write_channel_columns(out, cell ? &cell->cmp : nullptr);
            out << "\n";
        }
    }
}

void write_trajectory_csv(const TrajectorySeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "t_s,x_m,y_m,status" << channel_header() << "\n";
    for (const TrajectoryStep& s : series.steps) {
        out << format_g9(s.t_s) << ',' << format_g9(s.position.x()) << ','
            << format_g9(s.position.y()) << ',' << to_string(s.cmp.status);
        write_channel_columns(out, &s.cmp);
        out << "\n";
    }
}

void write_consistency_csv(const std::vector<ConsistencyRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "rx_id,x_m,y_m,z_m,n_neighbors,n_ok,mean_crt\n";
    for (const ConsistencyRow& r : rows) {
        out << r.rx_id << ',' << format_g9(r.position.x()) << ',' << format_g9(r.position.y())
            << ',' << format_g9(r.position.z()) << ',' << r.n_neighbors << ',' << r.n_ok
            << ',';
        if (r.mean_crt) out << format_g9(*r.mean_crt);
        out << "\n";
    }
}

}  // namespace rtdiff
