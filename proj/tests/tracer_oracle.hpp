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
//
// Test-only reference tracer. Independently re-derives the specular paths
// of a scene: where the library mirrors the transmitter forward and walks
// back from the receiver, this oracle mirrors the receiver backward and
// walks forward from the transmitter, with its own face bookkeeping,
// intersection routine and occlusion test. Geometric tolerances are part of
// the tracing contract and therefore shared.

#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rtdiff/scene.hpp"

namespace tracer_oracle {

using Eigen::Vector3d;

constexpr double face_eps_m = 1e-9;
constexpr double param_eps = 1e-9;
constexpr double side_eps = 1e-12;

struct RefFace {
    int axis = 2;
    double sign = 1.0;
    double plane = 0.0;
    Vector3d rect_lo{0, 0, 0};  // bounds on the two in-plane axes; axis entry unused
    Vector3d rect_hi{0, 0, 0};
    bool infinite = false;
    std::string id;
};

inline std::vector<RefFace> reference_faces(const rtdiff::SceneSpec& scene) {
    std::vector<RefFace> faces;
    RefFace ground;
    ground.infinite = true;
    ground.id = "ground";
    faces.push_back(ground);

    const char* names[3][2] = {{"-x", "+x"}, {"-y", "+y"}, {"-z", "+z"}};
    for (std::size_t bi = 0; bi < scene.boxes.size(); ++bi) {
        const rtdiff::Box& b = scene.boxes[bi];
        for (int axis = 0; axis < 3; ++axis) {
            for (int s = 0; s < 2; ++s) {
                RefFace f;
                f.axis = axis;
                f.sign = s == 0 ? -1.0 : 1.0;
                f.plane = s == 0 ? b.min[axis] : b.max[axis];
                f.rect_lo = b.min;
                f.rect_hi = b.max;
                f.id = "b" + std::to_string(bi) + ":" + names[axis][s];
                faces.push_back(f);
            }
        }
    }
    return faces;
}

inline Vector3d reflect(const Vector3d& p, const RefFace& f) {
    Vector3d out = p;
    out[f.axis] = 2.0 * f.plane - p[f.axis];
    return out;
}

inline bool within_rect(const RefFace& f, const Vector3d& q) {
    if (f.infinite) return true;
    for (int a = 0; a < 3; ++a) {
        if (a == f.axis) continue;
        if (q[a] < f.rect_lo[a] - face_eps_m || q[a] > f.rect_hi[a] + face_eps_m)
            return false;
    }
    return true;
}

// Clips the segment parameter interval against one box; true when a piece
// of the open segment interior lies inside.
inline bool crosses_box(const rtdiff::Box& box, const Vector3d& a, const Vector3d& b) {
    double lo = param_eps, hi = 1.0 - param_eps;
    for (int axis = 0; axis < 3; ++axis) {
        const double d = b[axis] - a[axis];
        if (std::abs(d) < 1e-300) {
            if (a[axis] < box.min[axis] || a[axis] > box.max[axis]) return false;
            continue;
        }
        double t0 = (box.min[axis] - a[axis]) / d;
        double t1 = (box.max[axis] - a[axis]) / d;
        if (t0 > t1) std::swap(t0, t1);
        lo = std::max(lo, t0);
        hi = std::min(hi, t1);
        if (lo >= hi) return false;
    }
    return hi - lo > 1e-12;
}

inline bool clear_of_scene(const rtdiff::SceneSpec& scene, const Vector3d& a,
                           const Vector3d& b) {
    if (std::min(a.z(), b.z()) < -1e-12) return false;
    for (const rtdiff::Box& box : scene.boxes)
        if (crosses_box(box, a, b)) return false;
    return true;
}

struct RefPath {
    std::vector<std::string> faces;
    double length_m = 0.0;
};

// Forward construction for one face sequence: receiver images are folded
// backward through the remaining faces, then the chain is walked from the
// transmitter.
inline std::optional<RefPath> solve_sequence(const rtdiff::SceneSpec& scene,
                                             const std::vector<const RefFace*>& seq,
                                             const Vector3d& tx, const Vector3d& rx) {
    const std::size_t k = seq.size();

    // rx_image[j] = rx mirrored through faces k-1 ... j (0-based, face j included)
    std::vector<Vector3d> rx_image(k + 1);
    rx_image[k] = rx;
    for (std::size_t j = k; j >= 1; --j) rx_image[j - 1] = reflect(rx_image[j], *seq[j - 1]);

    std::vector<Vector3d> chain;
    chain.push_back(tx);
    for (std::size_t j = 0; j < k; ++j) {
        const RefFace& f = *seq[j];
        const Vector3d& from = chain.back();
        const Vector3d& toward = rx_image[j];  // aiming point: rx folded back through face j
        const double denom = toward[f.axis] - from[f.axis];
        if (std::abs(denom) < 1e-300) return std::nullopt;
        const double s = (f.plane - from[f.axis]) / denom;
        if (s <= 1e-12 || s >= 1.0 - 1e-12) return std::nullopt;
        Vector3d q = from + s * (toward - from);
        q[f.axis] = f.plane;
        if (!within_rect(f, q)) return std::nullopt;
        chain.push_back(q);
    }
    chain.push_back(rx);

    for (std::size_t j = 0; j < k; ++j) {
        const RefFace& f = *seq[j];
        if (f.sign * (chain[j][f.axis] - f.plane) <= side_eps) return std::nullopt;
        if (f.sign * (chain[j + 2][f.axis] - f.plane) <= side_eps) return std::nullopt;
    }
    for (std::size_t j = 0; j + 1 < chain.size(); ++j)
        if (!clear_of_scene(scene, chain[j], chain[j + 1])) return std::nullopt;

    RefPath path;
    for (const RefFace* f : seq) path.faces.push_back(f->id);
    for (std::size_t j = 0; j + 1 < chain.size(); ++j)
        path.length_m += (chain[j + 1] - chain[j]).norm();
    return path;
}

inline std::vector<RefPath> reference_reflections(const rtdiff::SceneSpec& scene,
                                                  const Vector3d& tx, const Vector3d& rx,
                                                  int order) {
    const std::vector<RefFace> faces = reference_faces(scene);
    std::vector<RefPath> out;
    for (std::size_t i = 0; i < faces.size(); ++i) {
        if (auto p = solve_sequence(scene, {&faces[i]}, tx, rx)) out.push_back(std::move(*p));
        if (order < 2) continue;
        for (std::size_t j = 0; j < faces.size(); ++j) {
            if (i == j) continue;
            if (auto p = solve_sequence(scene, {&faces[i], &faces[j]}, tx, rx))
                out.push_back(std::move(*p));
        }
    }
    std::sort(out.begin(), out.end(), [](const RefPath& a, const RefPath& b) {
        return a.faces != b.faces ? a.faces < b.faces : a.length_m < b.length_m;
    });
    return out;
}

// Random box-world scene with tx kept out of the geometry.
inline rtdiff::SceneSpec random_scene(std::mt19937& rng, int max_boxes) {
    std::uniform_real_distribution<double> center(-60.0, 60.0);
    std::uniform_real_distribution<double> size(2.0, 18.0);
    std::uniform_real_distribution<double> height(3.0, 25.0);
    std::uniform_int_distribution<int> nbox(1, max_boxes);

    rtdiff::SceneSpec scene;
    scene.ground = "concrete";
    scene.max_reflection_order = 2;
    const int n = nbox(rng);
    for (int i = 0; i < n; ++i) {
        rtdiff::Box b;
        const double cx = center(rng), cy = center(rng);
        const double sx = size(rng), sy = size(rng);
        b.min = {cx - sx / 2.0, cy - sy / 2.0, 0.0};
        b.max = {cx + sx / 2.0, cy + sy / 2.0, height(rng)};
        b.material = "concrete";
        scene.boxes.push_back(b);
    }
    return scene;
}

inline bool point_in_scene_box(const rtdiff::SceneSpec& scene, const Vector3d& p) {
    for (const rtdiff::Box& b : scene.boxes) {
        if (p.x() >= b.min.x() && p.x() <= b.max.x() && p.y() >= b.min.y() &&
            p.y() <= b.max.y() && p.z() >= b.min.z() && p.z() <= b.max.z())
            return true;
    }
    return false;
}

inline Vector3d random_clear_point(std::mt19937& rng, const rtdiff::SceneSpec& scene,
                                   double zmin, double zmax) {
    std::uniform_real_distribution<double> xy(-80.0, 80.0);
    std::uniform_real_distribution<double> z(zmin, zmax);
    for (;;) {
        const Vector3d p{xy(rng), xy(rng), z(rng)};
        if (!point_in_scene_box(scene, p)) return p;
    }
}

}  // namespace tracer_oracle
