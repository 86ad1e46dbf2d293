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

#include "rtdiff/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "rtdiff/parallel.hpp"

namespace rtdiff {

namespace {

// Geometric tolerances shared with the test-side oracles: a reflection
// point may sit up to face_eps outside its face rectangle, occlusion tests
// ignore the first/last param_eps of a segment (its endpoints touch the
// reflecting surfaces), and incidence sides must clear side_eps.
constexpr double face_eps_m = 1e-9;
constexpr double param_eps = 1e-9;
constexpr double side_eps = 1e-12;

struct Face {
    int axis = 2;            // normal axis
    double sign = 1.0;       // outward normal direction along that axis
    double plane = 0.0;      // coordinate of the plane on `axis`
    int u_axis = 0, v_axis = 1;
    double ulo = 0.0, uhi = 0.0, vlo = 0.0, vhi = 0.0;
    bool infinite = false;   // ground plane
    std::string id;
    double loss_db = 0.0;
};

std::vector<Face> build_faces(const SceneSpec& scene) {
    std::vector<Face> faces;
    faces.reserve(1 + 6 * scene.boxes.size());

    Face ground;
    ground.axis = 2;
    ground.sign = 1.0;
    ground.plane = 0.0;
    ground.infinite = true;
    ground.id = "ground";
    ground.loss_db = material_loss_db(scene, scene.ground);
    faces.push_back(ground);

    static constexpr const char* face_names[6] = {"-x", "+x", "-y", "+y", "-z", "+z"};
    for (std::size_t bi = 0; bi < scene.boxes.size(); ++bi) {
        const Box& b = scene.boxes[bi];
        const double loss = material_loss_db(scene, b.material);
        int fi = 0;
        for (int axis = 0; axis < 3; ++axis) {
            for (double sign : {-1.0, 1.0}) {
                Face f;
                f.axis = axis;
                f.sign = sign;
                f.plane = sign < 0 ? b.min[axis] : b.max[axis];
                f.u_axis = (axis + 1) % 3;
                f.v_axis = (axis + 2) % 3;
                f.ulo = b.min[f.u_axis];
                f.uhi = b.max[f.u_axis];
                f.vlo = b.min[f.v_axis];
                f.vhi = b.max[f.v_axis];
                f.id = "b" + std::to_string(bi) + ":" + face_names[fi];
                f.loss_db = loss;
                faces.push_back(f);
                ++fi;
            }
        }
    }
    return faces;
}

Eigen::Vector3d mirror_across(const Eigen::Vector3d& p, const Face& f) {
    Eigen::Vector3d m = p;
    m[f.axis] = 2.0 * f.plane - p[f.axis];
    return m;
}

bool on_face(const Face& f, const Eigen::Vector3d& q) {
    if (f.infinite) return true;
    return q[f.u_axis] >= f.ulo - face_eps_m && q[f.u_axis] <= f.uhi + face_eps_m &&
           q[f.v_axis] >= f.vlo - face_eps_m && q[f.v_axis] <= f.vhi + face_eps_m;
}

// True when the open segment a->b passes through a box interior. Endpoint
// contacts and surface grazes do not block.
bool segment_blocked(const SceneSpec& scene, const Eigen::Vector3d& a,
                     const Eigen::Vector3d& b) {
    const Eigen::Vector3d d = b - a;
    for (const Box& box : scene.boxes) {
        double tmin = 0.0, tmax = 1.0;
        bool miss = false;
        for (int axis = 0; axis < 3 && !miss; ++axis) {
            if (std::abs(d[axis]) < 1e-300) {
                if (a[axis] < box.min[axis] || a[axis] > box.max[axis]) miss = true;
                continue;
            }
            double t1 = (box.min[axis] - a[axis]) / d[axis];
            double t2 = (box.max[axis] - a[axis]) / d[axis];
            if (t1 > t2) std::swap(t1, t2);
            tmin = std::max(tmin, t1);
            tmax = std::min(tmax, t2);
            if (tmin > tmax) miss = true;
        }
        if (miss) continue;
        const double lo = std::max(tmin, param_eps);
        const double hi = std::min(tmax, 1.0 - param_eps);
        if (hi - lo > 1e-12) return true;
    }
    return false;
}

void direction_angles(const Eigen::Vector3d& d, double& az_deg, double& el_deg) {
    az_deg = wrap_azimuth_deg(std::atan2(d.y(), d.x()) * rad_to_deg);
    el_deg = std::clamp(std::atan2(d.z(), std::hypot(d.x(), d.y())) * rad_to_deg, -90.0, 90.0);
}

TracedPath assemble_path(const SceneSpec& scene, const std::vector<Eigen::Vector3d>& pts,
                         const std::vector<const Face*>& seq) {
    TracedPath path;
    double length = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) length += (pts[i + 1] - pts[i]).norm();
    path.length_m = length;

    double loss = 0.0;
    for (const Face* f : seq) {
        path.faces.push_back(f->id);
        loss += f->loss_db;
    }

    PathTuple& t = path.tuple;
    t.delay_s = length / speed_of_light_m_s;
    t.power_dbm = scene.tx.power_dbm - fspl_db(length, scene.carrier_frequency_hz) - loss;
    direction_angles(pts[1] - pts[0], t.dod_az_deg, t.dod_el_deg);
    direction_angles(pts[pts.size() - 2] - pts.back(), t.doa_az_deg, t.doa_el_deg);
    return path;
}

// Image-method construction for one ordered face sequence. Mirrors the Tx
// forward across the sequence, walks back from the Rx intersecting each
// face, then validates incidence sides, face membership and occlusion.
std::optional<TracedPath> construct_sequence(const SceneSpec& scene,
                                             const std::vector<const Face*>& seq,
                                             const Eigen::Vector3d& tx,
                                             const Eigen::Vector3d& rx) {
    const std::size_t k = seq.size();
    std::vector<Eigen::Vector3d> images(k + 1);
    images[0] = tx;
    for (std::size_t j = 0; j < k; ++j) images[j + 1] = mirror_across(images[j], *seq[j]);

    std::vector<Eigen::Vector3d> pts(k + 2);
    pts[0] = tx;
    pts[k + 1] = rx;
    for (std::size_t j = k; j >= 1; --j) {
        const Face& f = *seq[j - 1];
        const Eigen::Vector3d& from = pts[j + 1];
        const Eigen::Vector3d& image = images[j];
        const double denom = image[f.axis] - from[f.axis];
        if (std::abs(denom) < 1e-300) return std::nullopt;
        const double s = (f.plane - from[f.axis]) / denom;
        if (s <= 1e-12 || s >= 1.0 - 1e-12) return std::nullopt;
        Eigen::Vector3d q = from + s * (image - from);
        q[f.axis] = f.plane;
        if (!on_face(f, q)) return std::nullopt;
        pts[j] = q;
    }

    // both real neighbors of each reflection must sit strictly outward
    for (std::size_t j = 1; j <= k; ++j) {
        const Face& f = *seq[j - 1];
        if (f.sign * (pts[j - 1][f.axis] - f.plane) <= side_eps) return std::nullopt;
        if (f.sign * (pts[j + 1][f.axis] - f.plane) <= side_eps) return std::nullopt;
    }

    for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
        if (std::min(pts[j].z(), pts[j + 1].z()) < -1e-12) return std::nullopt;
        if (segment_blocked(scene, pts[j], pts[j + 1])) return std::nullopt;
    }

    return assemble_path(scene, pts, seq);
}

std::vector<TracedPath> reflections_for_faces(const SceneSpec& scene,
                                              const std::vector<Face>& faces,
                                              const Eigen::Vector3d& tx,
                                              const Eigen::Vector3d& rx, int order) {
    std::vector<TracedPath> out;
    const std::size_t nf = faces.size();
    std::vector<const Face*> seq;

    for (std::size_t i = 0; i < nf; ++i) {
        seq = {&faces[i]};
        if (auto p = construct_sequence(scene, seq, tx, rx)) out.push_back(std::move(*p));
        if (order < 2) continue;
        for (std::size_t j = 0; j < nf; ++j) {
            if (j == i) continue;  // consecutive bounces on one plane cannot happen
            seq = {&faces[i], &faces[j]};
            if (auto p = construct_sequence(scene, seq, tx, rx)) out.push_back(std::move(*p));
        }
    }
    return out;
}

bool inside_any_box(const SceneSpec& scene, const Eigen::Vector3d& p) {
    if (p.z() < 0.0) return true;
    for (const Box& b : scene.boxes) {
        if (p.x() >= b.min.x() && p.x() <= b.max.x() && p.y() >= b.min.y() &&
            p.y() <= b.max.y() && p.z() >= b.min.z() && p.z() <= b.max.z())
            return true;
    }
    return false;
}

std::string sequential_id(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "r%06zu", index);
    return buf;
}

}  // namespace

double fspl_db(double length_m, double f_hz) {
    if (!(length_m > 0.0)) throw std::invalid_argument("fspl_db: length must be > 0");
    if (!(f_hz > 0.0)) throw std::invalid_argument("fspl_db: frequency must be > 0");
    return 20.0 * std::log10(4.0 * M_PI * length_m * f_hz / speed_of_light_m_s);
}

std::optional<TracedPath> line_of_sight(const SceneSpec& scene, const Eigen::Vector3d& tx,
                                        const Eigen::Vector3d& rx) {
    if ((rx - tx).norm() < 1e-12) return std::nullopt;
    if (std::min(tx.z(), rx.z()) < -1e-12) return std::nullopt;
    if (segment_blocked(scene, tx, rx)) return std::nullopt;
    return assemble_path(scene, {tx, rx}, {});
}

std::vector<TracedPath> specular_reflections(const SceneSpec& scene,
                                             const Eigen::Vector3d& tx,
                                             const Eigen::Vector3d& rx, int order) {
    if (order < 1 || order > 2)
        throw std::invalid_argument("specular_reflections: order must be 1 or 2");
    const std::vector<Face> faces = build_faces(scene);
    return reflections_for_faces(scene, faces, tx, rx, order);
}

std::vector<TracedReceiver> layout_receivers(const ReceiverLayout& layout) {
    validate_layout(layout);
    std::vector<TracedReceiver> out;
    switch (layout.kind) {
        case LayoutKind::Grid: {
            const GridLayout& g = layout.grid;
            out.reserve(static_cast<std::size_t>(g.nx) * g.ny);
            for (int iy = 0; iy < g.ny; ++iy) {
                for (int ix = 0; ix < g.nx; ++ix) {
                    TracedReceiver r;
                    r.rx_id = sequential_id(out.size());
                    r.position = {g.origin_x_m + ix * g.dx_m, g.origin_y_m + iy * g.dy_m,
                                  g.height_m};
                    out.push_back(std::move(r));
                }
            }
            break;
        }
        case LayoutKind::Trajectory: {
            out.reserve(layout.trajectory.size());
            for (const TrajectoryPointSpec& p : layout.trajectory) {
                TracedReceiver r;
                r.rx_id = sequential_id(out.size());
                r.position = {p.x_m, p.y_m, p.z_m};
                r.t_s = p.t_s;
                out.push_back(std::move(r));
            }
            break;
        }
        case LayoutKind::Explicit: {
            out.reserve(layout.explicit_receivers.size());
            for (const ExplicitReceiverSpec& p : layout.explicit_receivers) {
                TracedReceiver r;
                r.rx_id = p.rx_id;
                r.position = {p.x_m, p.y_m, p.z_m};
                out.push_back(std::move(r));
            }
            break;
        }
    }
    return out;
}

TraceResult trace(const SceneSpec& scene, const ReceiverLayout& layout) {
    validate_scene(scene);
    const std::vector<Face> faces = build_faces(scene);

    TraceResult result;
    result.receivers = layout_receivers(layout);

    parallel_for(result.receivers.size(), [&](std::size_t i) {
        TracedReceiver& rcv = result.receivers[i];
        if (inside_any_box(scene, rcv.position)) {
            rcv.inside_geometry = true;
            return;
        }

        std::vector<TracedPath> paths;
        if (scene.los_enabled) {
            if (auto los = line_of_sight(scene, scene.tx.position, rcv.position))
                paths.push_back(std::move(*los));
        }
        if (scene.max_reflection_order >= 1) {
            auto refl = reflections_for_faces(scene, faces, scene.tx.position, rcv.position,
                                              scene.max_reflection_order);
            for (TracedPath& p : refl) paths.push_back(std::move(p));
        }

        std::erase_if(paths, [&](const TracedPath& p) {
            return p.tuple.power_dbm < scene.min_power_dbm;
        });

        std::sort(paths.begin(), paths.end(), [](const TracedPath& a, const TracedPath& b) {
            if (a.tuple.power_dbm != b.tuple.power_dbm)
                return a.tuple.power_dbm > b.tuple.power_dbm;
            if (a.tuple.delay_s != b.tuple.delay_s) return a.tuple.delay_s < b.tuple.delay_s;
            return a.faces < b.faces;
        });
        rcv.paths = std::move(paths);
    });

    return result;
}

}  // namespace rtdiff
