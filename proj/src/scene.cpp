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

#include "rtdiff/scene.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace rtdiff {

using nlohmann::json;

std::vector<Material> default_materials() {
    return {{"concrete", 10.0}, {"glass", 4.0}, {"metal", 1.0}};
}

void validate_scene(const SceneSpec& scene) {
    if (!(scene.carrier_frequency_hz > 0.0) || !std::isfinite(scene.carrier_frequency_hz))
        throw std::invalid_argument("carrier_frequency_hz must be positive");
    if (scene.max_reflection_order < 0 || scene.max_reflection_order > 2)
        throw std::invalid_argument("max_reflection_order must be 0, 1 or 2");
    for (std::size_t i = 0; i < scene.boxes.size(); ++i) {
        const Box& b = scene.boxes[i];
        for (int a = 0; a < 3; ++a) {
            if (!(b.max[a] > b.min[a]))
                throw std::invalid_argument("box " + std::to_string(i) +
                                            " has non-positive extent on axis " +
                                            std::to_string(a));
        }
        material_loss_db(scene, b.material);  // existence check
    }
    material_loss_db(scene, scene.ground);
}

double material_loss_db(const SceneSpec& scene, const std::string& name) {
    const std::vector<Material> defaults =
        scene.materials.empty() ? default_materials() : std::vector<Material>{};
    const std::vector<Material>& table = scene.materials.empty() ? defaults : scene.materials;
    for (const Material& m : table) {
        if (m.name == name) {
            if (!std::isfinite(m.reflection_loss_db) || m.reflection_loss_db < 0.0)
                throw std::invalid_argument("material '" + name +
                                            "' has invalid reflection loss");
            return m.reflection_loss_db;
        }
    }
    throw std::invalid_argument("unknown material '" + name + "'");
}

namespace {

Eigen::Vector3d vec3_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 3)
        throw std::invalid_argument(std::string(what) + " must be an [x, y, z] array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vec3_to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

SceneSpec parse_scene_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("scene parse error: ") + e.what());
    }

    SceneSpec scene;
    try {
        if (j.contains("ground")) scene.ground = j["ground"].get<std::string>();
        if (j.contains("boxes")) {
            for (const json& jb : j["boxes"]) {
                Box b;
                b.min = vec3_from_json(jb.at("min"), "box min");
                b.max = vec3_from_json(jb.at("max"), "box max");
                b.material = jb.at("material").get<std::string>();
                scene.boxes.push_back(b);
            }
        }
        if (j.contains("tx")) {
            scene.tx.position = vec3_from_json(j["tx"].at("position"), "tx position");
            if (j["tx"].contains("power_dbm"))
                scene.tx.power_dbm = j["tx"]["power_dbm"].get<double>();
        }
        if (j.contains("carrier_frequency_hz"))
            scene.carrier_frequency_hz = j["carrier_frequency_hz"].get<double>();
        if (j.contains("max_reflection_order"))
            scene.max_reflection_order = j["max_reflection_order"].get<int>();
        if (j.contains("los_enabled")) scene.los_enabled = j["los_enabled"].get<bool>();
        if (j.contains("min_power_dbm"))
            scene.min_power_dbm = j["min_power_dbm"].get<double>();
        if (j.contains("materials")) {
            for (const json& jm : j["materials"]) {
                Material m;
                m.name = jm.at("name").get<std::string>();
                m.reflection_loss_db = jm.at("reflection_loss_db").get<double>();
                scene.materials.push_back(m);
            }
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("scene field error: ") + e.what());
    }

    validate_scene(scene);
    return scene;
}

SceneSpec load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scene file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scene_json(buf.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

void save_scene(const SceneSpec& scene, const std::string& path) {
    json j;
    j["ground"] = scene.ground;
    j["boxes"] = json::array();
    for (const Box& b : scene.boxes) {
        j["boxes"].push_back({{"min", vec3_to_json(b.min)},
                              {"max", vec3_to_json(b.max)},
                              {"material", b.material}});
    }
    j["tx"] = {{"position", vec3_to_json(scene.tx.position)},
               {"power_dbm", scene.tx.power_dbm}};
    j["carrier_frequency_hz"] = scene.carrier_frequency_hz;
    j["max_reflection_order"] = scene.max_reflection_order;
    j["los_enabled"] = scene.los_enabled;
    j["min_power_dbm"] = scene.min_power_dbm;
    j["materials"] = json::array();
    for (const Material& m :
         (scene.materials.empty() ? default_materials() : scene.materials)) {
        j["materials"].push_back(
            {{"name", m.name}, {"reflection_loss_db", m.reflection_loss_db}});
    }

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scene file '" + path + "'");
    out << j.dump(2) << "\n";
}

}  // namespace rtdiff
