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
#include <string>
#include <vector>

namespace rtdiff {

/// Scalar per-bounce reflection loss; no frequency dependence.
struct Material {
    std::string name;
    double reflection_loss_db = 0.0;
};

/// Axis-aligned box with strictly positive extent on every axis.
struct Box {
    Eigen::Vector3d min{0.0, 0.0, 0.0};
    Eigen::Vector3d max{1.0, 1.0, 1.0};
    std::string material;
};

struct Transmitter {
    Eigen::Vector3d position{0.0, 0.0, 10.0};
    double power_dbm = 30.0;
};

/// Synthetic world: an infinite ground plane at z = 0, axis-aligned boxes,
/// one transmitter, and the tracer settings. Materials default to
/// concrete 10 dB, glass 4 dB, metal 1 dB per bounce when the table is
/// left empty; these are configuration defaults, not physical ground truth.
struct SceneSpec {
    std::string ground = "concrete";
    std::vector<Box> boxes;
    Transmitter tx;
    double carrier_frequency_hz = 28e9;
    int max_reflection_order = 2;
    bool los_enabled = true;
    double min_power_dbm = -200.0;
    std::vector<Material> materials;
};

/// Default material table applied when SceneSpec.materials is empty.
std::vector<Material> default_materials();

/// Checks extents, material references, frequency and order bounds.
/// Throws std::invalid_argument.
void validate_scene(const SceneSpec& scene);

/// Reflection loss of a named material. Throws on unknown names.
double material_loss_db(const SceneSpec& scene, const std::string& name);

/// JSON scene file, field-for-field mirror of SceneSpec. Lengths in
/// meters, frequency in Hz, losses in dB. Parse errors carry position
/// diagnostics. Loading validates.
SceneSpec load_scene(const std::string& path);
void save_scene(const SceneSpec& scene, const std::string& path);
SceneSpec parse_scene_json(const std::string& text);

}  // namespace rtdiff
