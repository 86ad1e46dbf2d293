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

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "rtdiff/path_data.hpp"
#include "rtdiff/scene.hpp"

namespace rtdiff {

/// One traced propagation path: the channel tuple plus provenance. The face
/// sequence is empty for line of sight; delay is length / c exactly.
struct TracedPath {
    PathTuple tuple;
    std::vector<std::string> faces;  ///< ordered reflecting-face identifiers
    double length_m = 0.0;
};

struct TracedReceiver {
    std::string rx_id;
    Eigen::Vector3d position{0.0, 0.0, 0.0};
    std::optional<double> t_s;
    bool inside_geometry = false;  ///< receiver sits inside a box (or below ground)
    std::vector<TracedPath> paths; ///< sorted by descending power
};

struct TraceResult {
    std::vector<TracedReceiver> receivers;
};

/// Free-space path loss 20 log10(4 pi length f / c) in dB.
/// Throws std::invalid_argument on non-positive length or frequency.
double fspl_db(double length_m, double f_hz);

/// Direct path, or nothing when the open Tx-Rx segment hits a box or runs
/// below ground. DoD points Tx->Rx, DoA points Rx->Tx.
std::optional<TracedPath> line_of_sight(const SceneSpec& scene,
                                        const Eigen::Vector3d& tx,
                                        const Eigen::Vector3d& rx);

/// Image-method enumeration of all specular paths up to the given order
/// (1 or 2) over the ground plane and every box face: mirror the Tx across
/// each face sequence, intersect back from the Rx, and keep sequences whose
/// reflection points fall on their faces with every sub-segment unoccluded.
std::vector<TracedPath> specular_reflections(const SceneSpec& scene,
                                             const Eigen::Vector3d& tx,
                                             const Eigen::Vector3d& rx, int order);

/// Runs LOS + reflections for every receiver of the layout. Receivers
/// inside scene geometry are emitted with no paths and flagged. Paths below
/// scene.min_power_dbm are dropped; per receiver, paths are sorted by
/// descending power (ties by delay, then face sequence).
TraceResult trace(const SceneSpec& scene, const ReceiverLayout& layout);

/// Expands a layout into (rx_id, position, timestamp) rows; grid ids are
/// assigned row-major with x fastest ("r000000", "r000001", ...).
std::vector<TracedReceiver> layout_receivers(const ReceiverLayout& layout);

}  // namespace rtdiff
