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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rtdiff/dataset.hpp"
#include "rtdiff/path_data.hpp"

namespace rtdiff {

/// Fingerprint map over a receiver grid. Cells are indexed iy * nx + ix;
/// cells without a paired receiver carry no data.
struct GridMap {
    GridLayout layout;
    std::vector<std::optional<ReceiverComparison>> cells;

    std::size_t cell_index(int ix, int iy) const {
        return static_cast<std::size_t>(iy) * layout.nx + ix;
    }
    double cell_x(int ix) const { return layout.origin_x_m + ix * layout.dx_m; }
    double cell_y(int iy) const { return layout.origin_y_m + iy * layout.dy_m; }
};

/// Recovers the grid lattice spanned by a dataset's receiver positions:
/// spacing from the smallest positive coordinate gap, every position on a
/// lattice point, one shared height. Throws std::invalid_argument when the
/// positions do not form a grid.
GridLayout infer_grid_layout(const Dataset& ds);

/// Compares every paired receiver in pairing order; runs in parallel with
/// per-slot writes, so results are independent of scheduling.
std::vector<ReceiverComparison> compare_receivers(const PairedDatasets& paired,
                                                  const MetricConfig& cfg);

/// Pairs the datasets and compares every shared receiver cell by cell.
/// Receivers present in only one dataset leave no-data cells. Cell
/// computations run in parallel; the result is independent of scheduling.
GridMap compare_grid(const Dataset& a, const Dataset& b, const MetricConfig& cfg);

struct TrajectoryStep {
    double t_s = 0.0;
    Eigen::Vector3d position{0.0, 0.0, 0.0};
    ComparisonResult cmp;
};

struct TrajectorySeries {
    std::vector<TrajectoryStep> steps;     ///< time-ordered
    std::vector<std::string> skipped;      ///< rx_ids present in only one dataset
};

/// Time-ordered per-step comparison of two trajectory datasets. Steps
/// missing from either dataset are excluded and reported in `skipped`.
/// Throws when timestamps are missing or not strictly increasing.
TrajectorySeries compare_trajectory(const Dataset& a, const Dataset& b,
                                    const MetricConfig& cfg);

struct RegionSummary {
    std::size_t cells_in_region = 0;  ///< ok cells within the radius
    ResultSummary summary;
};

/// Mean/max of every channel over ok cells within `radius_m` (horizontal
/// distance, inclusive) of the center. No ok cells leaves the channel stats
/// absent.
RegionSummary summarize_region(const GridMap& map, double center_x_m, double center_y_m,
                               double radius_m);

struct ConsistencyRow {
    std::string rx_id;
    Eigen::Vector3d position{0.0, 0.0, 0.0};
    std::size_t n_neighbors = 0;  ///< receivers strictly within the radius
    std::size_t n_ok = 0;         ///< neighbor comparisons with status ok
    std::optional<double> mean_crt;
};

/// CRT between every receiver and each neighbor strictly within the
/// horizontal radius. Receivers without neighbors are flagged with
/// n_neighbors = 0 and no mean. Throws on radius <= 0.
std::vector<ConsistencyRow> spatial_consistency(const Dataset& ds, double radius_m,
                                                const MetricConfig& cfg);

/// Grid CSV: ix,iy,x_m,y_m,status,<channels>; no-data cells have empty
/// channels and status "no-data".
void write_grid_csv(const GridMap& map, const std::string& path);

/// Trajectory CSV, t_s leading: t_s,x_m,y_m,status,<channels>.
void write_trajectory_csv(const TrajectorySeries& series, const std::string& path);

void write_consistency_csv(const std::vector<ConsistencyRow>& rows, const std::string& path);

}  // namespace rtdiff
