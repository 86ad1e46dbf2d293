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

#include <string>

#include "rtdiff/analysis.hpp"

namespace rtdiff {

/// Single-hue heatmap of one channel over a grid map. No-data and non-ok
/// cells stay unfilled; the legend annotates the value range. Output bytes
/// depend only on the inputs.
void write_grid_heatmap_svg(const GridMap& map, Channel channel, const std::string& path);

/// Per-channel line chart over a trajectory series; non-ok steps leave
/// gaps in the polyline.
void write_trajectory_chart_svg(const TrajectorySeries& series, Channel channel,
                                const std::string& path);

}  // namespace rtdiff
