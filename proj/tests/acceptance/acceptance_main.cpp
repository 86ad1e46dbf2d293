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
// End-to-end acceptance suite. Each numbered check prints one PASS/FAIL
// line; the process exits with the number of failed checks. Runs standalone:
//
//     ./rtdiff_acceptance

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rtdiff/analysis.hpp"
#include "rtdiff/dataset.hpp"
#include "rtdiff/metrics.hpp"
#include "rtdiff/tracer.hpp"
#include "tracer_oracle.hpp"

using namespace rtdiff;
using Eigen::Vector3d;
namespace fs = std::filesystem;

namespace {

// ----------------------------------------------------------------- harness

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// -------------------------------------------------------------- generators

PathSet random_path_set(std::mt19937& rng, std::size_t n) {
    std::uniform_real_distribution<double> pw(-60.0, 60.0);
    std::uniform_real_distribution<double> tau(0.0, 3e-6);
    std::uniform_real_distribution<double> az(-180.0, 180.0);
    std::uniform_real_distribution<double> el(-90.0, 90.0);
    PathSet s;
    s.rx_id = "r";
    s.paths.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        s.paths.push_back({pw(rng), tau(rng), az(rng), el(rng), az(rng), el(rng)});
    return s;
}

std::vector<StandardizedTuple> standardized_of(const PathSet& x, const PathSet& y,
                                               const MetricConfig& cfg, bool first) {
    const auto [sx, sy] = compute_standardization(x, y, cfg.standardization_scope);
    return standardize(first ? x : y, first ? sx : sy);
}

// ------------------------------------------------------------ 1. axioms

void criterion_axioms(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(101);
    std::uniform_int_distribution<std::size_t> cardinality(1, 60);
    MetricConfig cfg;

    for (int rep = 0; rep < 1000; ++rep) {
        const PathSet x = random_path_set(rng, cardinality(rng));
        const PathSet y = random_path_set(rng, cardinality(rng));

        const ComparisonResult self = compare_path_sets(x, x, cfg);
        c.require(self.hrt == 0.0 && self.crt == 0.0, "identity HRT/CRT not exactly 0");
        c.require(self.hrt_components.d_tau == 0.0 && self.hrt_components.d_p == 0.0 &&
                      self.hrt_components.d_dod == 0.0 && self.hrt_components.d_doa == 0.0,
                  "identity HRT components not exactly 0");
        c.require(self.crt_components.d_tau == 0.0 && self.crt_components.d_p == 0.0 &&
                      self.crt_components.d_dod == 0.0 && self.crt_components.d_doa == 0.0,
                  "identity CRT components not exactly 0");

        const ComparisonResult ab = compare_path_sets(x, y, cfg);
        const ComparisonResult ba = compare_path_sets(y, x, cfg);
        c.require(std::abs(ab.hrt - ba.hrt) <= 1e-12, "HRT symmetry beyond 1e-12");
        c.require(std::abs(ab.crt - ba.crt) <= 1e-12, "CRT symmetry beyond 1e-12");
        c.require(ab.crt <= ab.hrt + 1e-12, "CRT exceeds HRT");
        if (!c.ok) return;
    }
    const double dt = seconds_since(t0);
    c.require(dt < 10.0, "runtime " + std::to_string(dt) + " s exceeds 10 s");
}

// -------------------------------------------- 2. NN oracle equivalence

void criterion_nn_oracle(Check& c) {
    std::mt19937 rng(211);
    std::uniform_int_distribution<std::size_t> cardinality(1, 200);

    for (int rep = 0; rep < 500; ++rep) {
        MetricConfig cfg;
        if (rep % 5 == 1) {
            cfg.w_tau = 0.4;
            cfg.w_p = 2.5;
            cfg.w_dod = 0.9;
            cfg.w_doa = 1.6;
        } else if (rep % 5 == 2) {
            cfg.assignment_mode = AssignmentMode::PowerOnly;
        } else if (rep % 5 == 3) {
            cfg.assignment_mode = AssignmentMode::DelayOnly;
        } else if (rep % 5 == 4) {
            cfg.assignment_mode = AssignmentMode::DoaOnly;
        }

        const PathSet x = random_path_set(rng, cardinality(rng));
        const PathSet y = random_path_set(rng, cardinality(rng));
        const auto sx = standardized_of(x, y, cfg, true);
        const auto sy = standardized_of(x, y, cfg, false);

        const NNAssignment got = nearest_neighbor_assign(sx, sy, cfg);

        for (std::size_t i = 0; i < sx.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t best_j = 0;
            for (std::size_t j = 0; j < sy.size(); ++j) {
                const FeatureDistances fd = feature_distances(sx[i], sy[j]);
                double d;
                switch (cfg.assignment_mode) {
                    case AssignmentMode::DelayOnly: d = fd.d_tau; break;
                    case AssignmentMode::PowerOnly: d = fd.d_p; break;
                    case AssignmentMode::DodOnly: d = fd.d_dod; break;
                    case AssignmentMode::DoaOnly: d = fd.d_doa; break;
                    default: d = composite_distance(fd, cfg); break;
                }
                if (d < best) {
                    best = d;
                    best_j = j;
                }
            }
            if (got.pairs[i].target != best_j) {
                c.require(false, "index mismatch at rep " + std::to_string(rep));
                return;
            }
        }
    }
}

// ------------------------------------------------- 3. standardization

void criterion_standardization(Check& c) {
    std::mt19937 rng(307);
    std::uniform_int_distribution<std::size_t> cardinality(1, 50);

    for (int rep = 0; rep < 200; ++rep) {
        const PathSet x = random_path_set(rng, cardinality(rng));
        const PathSet y = random_path_set(rng, cardinality(rng));
        const StandardizationStats stats = compute_pooled_stats(x, y);
        const auto sx = standardize(x, stats);
        const auto sy = standardize(y, stats);

        std::vector<double> p, tau;
        for (const auto& t : sx) { p.push_back(t.p_bar); tau.push_back(t.tau_bar); }
        for (const auto& t : sy) { p.push_back(t.p_bar); tau.push_back(t.tau_bar); }
        const double n = static_cast<double>(p.size());

        const bool guard_p = stats.sigma_p_db < sigma_guard;
        const bool guard_tau = stats.sigma_tau_s < sigma_guard;
        auto column_ok = [&](const std::vector<double>& col, bool guarded) {
            if (guarded) {
                for (double v : col)
                    if (std::abs(v) > 1e-9) return false;
                return true;
            }
            double mean = 0.0;
            for (double v : col) mean += v;
            mean /= n;
            double var = 0.0;
            for (double v : col) var += (v - mean) * (v - mean);
            const double sd = std::sqrt(var / n);
            if (std::abs(mean) > 1e-9) return false;
            if (n > 1 && std::abs(sd - 1.0) > 1e-9) return false;
            return true;
        };
        c.require(column_ok(p, guard_p), "power column off at rep " + std::to_string(rep));
        c.require(column_ok(tau, guard_tau), "delay column off at rep " + std::to_string(rep));
        if (!c.ok) return;
    }

    // constant columns fire the guard and come out (numerically) all zero
    PathSet cx, cy;
    for (int i = 0; i < 7; ++i) cx.paths.push_back({-50.0, 1e-6, 10.0 * i, 0, 0, 0});
    for (int i = 0; i < 3; ++i) cy.paths.push_back({-50.0, 1e-6, -10.0 * i, 0, 0, 0});
    const StandardizationStats stats = compute_pooled_stats(cx, cy);
    c.require(stats.sigma_p_db < sigma_guard && stats.sigma_tau_s < sigma_guard,
              "constant columns did not fire the guard");
    for (const auto& t : standardize(cx, stats)) {
        c.require(std::abs(t.p_bar) <= 1e-9 && std::abs(t.tau_bar) <= 1e-9,
                  "guarded column not zero");
    }
}

// ----------------------------------------- 4. formula literalness 2x3

void criterion_formulas(Check& c) {
    PathSet x, y;
    x.paths.push_back({-60.0, 0.50e-6, 10.0, 5.0, -120.0, 2.0});
    x.paths.push_back({-72.0, 0.90e-6, 35.0, 12.0, -95.0, 8.0});
    y.paths.push_back({-61.0, 0.52e-6, 11.0, 6.0, -121.0, 2.5});
    y.paths.push_back({-80.0, 1.40e-6, -140.0, 3.0, 40.0, -4.0});
    y.paths.push_back({-66.0, 0.70e-6, 25.0, 9.0, -100.0, 5.0});

    MetricConfig cfg;
    const auto sx = standardized_of(x, y, cfg, true);
    const auto sy = standardized_of(x, y, cfg, false);

    double d[2][3];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j)
            d[i][j] = composite_distance(feature_distances(sx[i], sy[j]), cfg);

    double max_fwd = 0.0, sum_fwd = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double m = std::min({d[i][0], d[i][1], d[i][2]});
        max_fwd = std::max(max_fwd, m);
        sum_fwd += m;
    }
    double max_bwd = 0.0, sum_bwd = 0.0;
    for (int j = 0; j < 3; ++j) {
        const double m = std::min(d[0][j], d[1][j]);
        max_bwd = std::max(max_bwd, m);
        sum_bwd += m;
    }
    const double hrt_direct = 0.5 * max_fwd + 0.5 * max_bwd;
    const double crt_direct = sum_fwd / 4.0 + sum_bwd / 6.0;

    const ComparisonResult r = compare_path_sets(x, y, cfg);
    c.require(std::abs(r.hrt - hrt_direct) <= 1e-12, "HRT differs from direct evaluation");
    c.require(std::abs(r.crt - crt_direct) <= 1e-12, "CRT differs from direct evaluation");
}

// ------------------------------------------------- 5. weight scaling

void criterion_weight_scaling(Check& c) {
    std::mt19937 rng(503);
    std::uniform_int_distribution<std::size_t> cardinality(2, 40);
    for (double k : {0.5, 3.0, 10.0}) {
        for (int rep = 0; rep < 20; ++rep) {
            const PathSet x = random_path_set(rng, cardinality(rng));
            const PathSet y = random_path_set(rng, cardinality(rng));
            MetricConfig base;
            MetricConfig scaled;
            scaled.w_tau = scaled.w_p = scaled.w_dod = scaled.w_doa = k;

            const ComparisonResult r0 = compare_path_sets(x, y, base);
            const ComparisonResult rk = compare_path_sets(x, y, scaled);
            c.require(std::abs(rk.hrt - k * r0.hrt) <= 1e-12 * std::abs(k * r0.hrt),
                      "HRT scaling beyond 1e-12 relative");
            c.require(std::abs(rk.crt - k * r0.crt) <= 1e-12 * std::abs(k * r0.crt),
                      "CRT scaling beyond 1e-12 relative");

            const auto sx = standardized_of(x, y, base, true);
            const auto sy = standardized_of(x, y, base, false);
            const NNAssignment a0 = nearest_neighbor_assign(sx, sy, base);
            const NNAssignment ak = nearest_neighbor_assign(sx, sy, scaled);
            for (std::size_t i = 0; i < a0.pairs.size(); ++i)
                c.require(a0.pairs[i].target == ak.pairs[i].target,
                          "assignment changed under weight scaling");
            if (!c.ok) return;
        }
    }
}

// -------------------------------------- 6. material-only scene analogue

void criterion_material_only(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();

    SceneSpec base;
    base.tx.position = {0.0, 0.0, 10.0};
    base.tx.power_dbm = 30.0;
    base.max_reflection_order = 1;
    Box wall;
    wall.min = {-22.0, -30.0, 0.0};
    wall.max = {-20.0, 30.0, 8.0};
    wall.material = "wallmat";
    base.boxes.push_back(wall);
    base.materials = {{"concrete", 10.0}, {"wallmat", 10.0}};

    SceneSpec changed = base;
    changed.materials = {{"concrete", 10.0}, {"wallmat", 4.0}};

    ReceiverLayout layout;
    layout.kind = LayoutKind::Grid;
    layout.grid = {6.0, -49.0, 50, 50, 2.0, 2.0, 1.5};

    const TraceResult trace_a = trace(base, layout);
    const TraceResult trace_b = trace(changed, layout);
    const Dataset a = dataset_from_trace(trace_a, base, "base");
    const Dataset b = dataset_from_trace(trace_b, changed, "changed");
    const GridMap map = compare_grid(a, b, MetricConfig{});

    // which receivers see the modified wall at all
    std::set<std::string> illuminated;
    for (const TracedReceiver& r : trace_a.receivers) {
        for (const TracedPath& p : r.paths) {
            if (std::any_of(p.faces.begin(), p.faces.end(), [](const std::string& f) {
                    return f.rfind("b0:", 0) == 0;
                })) {
                illuminated.insert(r.rx_id);
                break;
            }
        }
    }
    c.require(!illuminated.empty(), "no receiver is illuminated by the wall");

    std::size_t ok_cells = 0;
    bool power_in_illuminated = false;
    for (const auto& cell : map.cells) {
        if (!cell || cell->cmp.status != CompareStatus::Ok) continue;
        ++ok_cells;
        const bool zero_geometry =
            cell->cmp.hrt_components.d_tau == 0.0 && cell->cmp.hrt_components.d_dod == 0.0 &&
            cell->cmp.hrt_components.d_doa == 0.0 && cell->cmp.crt_components.d_tau == 0.0 &&
            cell->cmp.crt_components.d_dod == 0.0 && cell->cmp.crt_components.d_doa == 0.0;
        if (!zero_geometry) {
            c.require(false, "delay/angle channel nonzero at cell " + cell->rx_id);
            return;
        }
        if (illuminated.count(cell->rx_id) && cell->cmp.crt_components.d_p > 0.0)
            power_in_illuminated = true;
    }
    c.require(ok_cells > 0, "no ok cells in the map");
    c.require(power_in_illuminated,
              "no positive power channel among wall-illuminated cells");

    const double dt = seconds_since(t0);
    c.require(dt < 30.0, "runtime " + std::to_string(dt) + " s exceeds 30 s");
}

// -------------------------------------------- 7. locality of differences

void criterion_locality(Check& c) {
    SceneSpec base;
    base.tx.position = {0.0, 0.0, 25.0};
    base.tx.power_dbm = 30.0;
    base.max_reflection_order = 2;

    SceneSpec with_box = base;
    Box box;
    box.min = {8.0, -6.0, 0.0};
    box.max = {18.0, 6.0, 10.0};
    box.material = "concrete";
    with_box.boxes.push_back(box);

    ReceiverLayout layout;
    layout.kind = LayoutKind::Grid;
    layout.grid = {-178.0, -178.0, 80, 80, 4.5, 4.5, 1.5};

    const TraceResult trace_a = trace(base, layout);
    const TraceResult trace_b = trace(with_box, layout);
    const Dataset a = dataset_from_trace(trace_a, base, "base");
    const Dataset b = dataset_from_trace(trace_b, with_box, "withbox");
    const GridMap map = compare_grid(a, b, MetricConfig{});

    // face-sequence sets per receiver, from the tracer provenance
    auto face_signature = [](const TracedReceiver& r) {
        std::multiset<std::string> sig;
        for (const TracedPath& p : r.paths) {
            std::string joined;
            for (const std::string& f : p.faces) joined += f + "|";
            sig.insert(joined);
        }
        return sig;
    };

    double near_sum = 0.0, far_sum = 0.0;
    std::size_t near_n = 0, far_n = 0;
    for (std::size_t i = 0; i < trace_a.receivers.size(); ++i) {
        const TracedReceiver& r = trace_a.receivers[i];
        const double dist = std::hypot(r.position.x() - base.tx.position.x(),
                                       r.position.y() - base.tx.position.y());
        const int ix = static_cast<int>(std::lround((r.position.x() + 178.0) / 4.5));
        const int iy = static_cast<int>(std::lround((r.position.y() + 178.0) / 4.5));
        const auto& cell = map.cells[map.cell_index(ix, iy)];
        if (!cell || cell->cmp.status != CompareStatus::Ok) continue;

        if (dist <= 30.0) {
            near_sum += cell->cmp.crt;
            ++near_n;
        } else if (dist > 150.0) {
            far_sum += cell->cmp.crt;
            ++far_n;
            if (face_signature(r) != face_signature(trace_b.receivers[i])) {
                c.require(false, "distal cell " + r.rx_id + " has touched face sequences");
                return;
            }
            if (cell->cmp.crt != 0.0) {
                c.require(false, "distal untouched cell " + r.rx_id + " has nonzero CRT");
                return;
            }
        }
    }
    c.require(near_n > 0, "empty near region");
    c.require(far_n > 100, "too few distal cells to be meaningful");
    if (!c.ok) return;
    const double near_mean = near_sum / static_cast<double>(near_n);
    const double far_mean = far_sum / static_cast<double>(far_n);
    c.require(far_mean == 0.0, "distal mean CRT not zero");
    c.require(near_mean > far_mean, "near-Tx mean CRT not greater than distal mean");
}

// ------------------------------------------------ 8. tracer exactness

void criterion_tracer_exactness(Check& c) {
    std::mt19937 rng(809);

    // LOS delay = distance / c
    SceneSpec empty_scene;
    std::uniform_real_distribution<double> coord(-200.0, 200.0);
    std::uniform_real_distribution<double> height(1.0, 50.0);
    for (int rep = 0; rep < 100; ++rep) {
        const Vector3d tx{coord(rng), coord(rng), height(rng)};
        const Vector3d rx{coord(rng), coord(rng), height(rng)};
        if ((tx - rx).norm() < 1e-6) continue;
        const auto los = line_of_sight(empty_scene, tx, rx);
        if (!los) {
            c.require(false, "LOS missing in an empty scene");
            return;
        }
        const double dist = std::sqrt((tx.x() - rx.x()) * (tx.x() - rx.x()) +
                                      (tx.y() - rx.y()) * (tx.y() - rx.y()) +
                                      (tx.z() - rx.z()) * (tx.z() - rx.z()));
        const double expected = dist / 299792458.0;
        c.require(std::abs(los->tuple.delay_s - expected) <= 1e-12 * expected,
                  "LOS delay off by more than 1e-12 relative");
    }

    // ground bounce length = sqrt(d^2 + (h1 + h2)^2)
    std::uniform_real_distribution<double> sep(5.0, 300.0);
    for (int rep = 0; rep < 100; ++rep) {
        const double h1 = height(rng), h2 = height(rng), d = sep(rng);
        const Vector3d tx{0.0, 0.0, h1};
        const Vector3d rx{d, 0.0, h2};
        const auto paths = specular_reflections(empty_scene, tx, rx, 1);
        if (paths.size() != 1) {
            c.require(false, "expected exactly the ground bounce");
            return;
        }
        const double expected = std::sqrt(d * d + (h1 + h2) * (h1 + h2));
        c.require(std::abs(paths[0].length_m - expected) <= 1e-9,
                  "ground bounce length off the image construction");
    }

    // image-method enumeration vs the independent reference, 20 random scenes
    for (int scene_rep = 0; scene_rep < 20; ++scene_rep) {
        SceneSpec scene = tracer_oracle::random_scene(rng, 8);
        const Vector3d tx = tracer_oracle::random_clear_point(rng, scene, 3.0, 30.0);
        for (int q = 0; q < 3; ++q) {
            const Vector3d rx = tracer_oracle::random_clear_point(rng, scene, 1.0, 6.0);
            auto got = specular_reflections(scene, tx, rx, 2);
            std::sort(got.begin(), got.end(), [](const TracedPath& a, const TracedPath& b) {
                return a.faces != b.faces ? a.faces < b.faces : a.length_m < b.length_m;
            });
            const auto want = tracer_oracle::reference_reflections(scene, tx, rx, 2);
            if (got.size() != want.size()) {
                c.require(false, "path count differs from the reference tracer");
                return;
            }
            for (std::size_t i = 0; i < got.size(); ++i) {
                c.require(got[i].faces == want[i].faces, "face sequences differ");
                c.require(std::abs(got[i].length_m - want[i].length_m) <= 1e-9,
                          "path length differs beyond 1e-9 m");
            }
            if (!c.ok) return;
        }
    }
}

// -------------------------------------- 9. round-trip and determinism

void criterion_roundtrip_determinism(Check& c) {
    const fs::path dir = fs::temp_directory_path() / "rtdiff_acceptance";
    fs::create_directories(dir);

    // write -> load identity to 9 significant digits
    std::mt19937 rng(907);
    std::uniform_real_distribution<double> pos(-100.0, 100.0);
    std::vector<ReceiverEntry> receivers;
    for (int i = 0; i < 30; ++i) {
        ReceiverEntry e;
        e.rx_id = "rx" + std::to_string(i);
        e.position = {pos(rng), pos(rng), 1.5};
        e.paths = random_path_set(rng, 1 + rng() % 8);
        e.paths.rx_id = e.rx_id;
        receivers.push_back(std::move(e));
    }
    const Dataset original = make_dataset("acc", std::move(receivers));
    const std::string prefix = (dir / "roundtrip").string();
    write_dataset(original, prefix);
    const Dataset loaded = load_dataset(prefix);
    auto close9 = [](double a, double b) {
        return std::abs(a - b) <= 5e-9 * std::max({std::abs(a), std::abs(b), 1e-30});
    };
    c.require(loaded.receivers.size() == original.receivers.size(), "receiver count");
    for (std::size_t i = 0; i < original.receivers.size() && c.ok; ++i) {
        const auto& o = original.receivers[i];
        const auto& l = loaded.receivers[i];
        c.require(o.rx_id == l.rx_id, "rx order changed");
        c.require(o.paths.size() == l.paths.size(), "path count changed");
        for (std::size_t p = 0; p < o.paths.size() && c.ok; ++p) {
            const PathTuple& po = o.paths.paths[p];
            const PathTuple& pl = l.paths.paths[p];
            c.require(close9(po.power_dbm, pl.power_dbm) && close9(po.delay_s, pl.delay_s) &&
                          close9(po.dod_az_deg, pl.dod_az_deg) &&
                          close9(po.dod_el_deg, pl.dod_el_deg) &&
                          close9(po.doa_az_deg, pl.doa_az_deg) &&
                          close9(po.doa_el_deg, pl.doa_el_deg),
                      "field lost precision in the round trip");
        }
    }
    if (!c.ok) return;

    // repeated CLI runs are byte-identical, SVG included
    const std::string cli = RTDIFF_CLI_PATH;
    const std::string scene_path = (dir / "scene.json").string();
    {
        std::ofstream scene(scene_path);
        scene << R"({"ground": "concrete",
  "boxes": [{"min": [-24, -30, 0], "max": [-22, 30, 9], "material": "glass"}],
  "tx": {"position": [0, 0, 12], "power_dbm": 30},
  "carrier_frequency_hz": 28e9, "max_reflection_order": 2, "los_enabled": true})";
    }
    auto run = [&](const std::string& args) {
        const std::string cmd = cli + " " + args + " 2>/dev/null";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };

    const std::string base_a = (dir / "det_a").string();
    const std::string base_b = (dir / "det_b").string();
    c.require(run("synth --scene " + scene_path + " --grid 5,-30,6,6,10,10,1.5 --out " +
                  base_a) == 0,
              "synth run 1 failed");
    c.require(run("synth --scene " + scene_path + " --grid 5,-30,6,6,10,10,1.5 --out " +
                  base_b) == 0,
              "synth run 2 failed");
    if (!c.ok) return;
    c.require(slurp(base_a + ".rays.csv") == slurp(base_b + ".rays.csv"),
              "synth outputs differ between runs");

    for (int run_idx = 1; run_idx <= 2; ++run_idx) {
        const std::string out = (dir / ("cmp" + std::to_string(run_idx))).string();
        c.require(run("compare " + base_a + " " + base_b + " --plot --channels hrt,crt "
                      "--out " + out) == 0,
                  "compare run failed");
    }
    if (!c.ok) return;
    c.require(slurp(dir / "cmp1.results.csv") == slurp(dir / "cmp2.results.csv"),
              "results CSV differs between runs");
    c.require(slurp(dir / "cmp1.summary.json") == slurp(dir / "cmp2.summary.json"),
              "summary JSON differs between runs");
    c.require(slurp(dir / "cmp1.hrt.svg") == slurp(dir / "cmp2.hrt.svg"),
              "HRT SVG differs between runs");
    c.require(slurp(dir / "cmp1.crt.svg") == slurp(dir / "cmp2.crt.svg"),
              "CRT SVG differs between runs");
}

// --------------------------------------------------- 10. throughput

void criterion_throughput(Check& c) {
    std::mt19937 rng(1009);
    const int nx = 100, ny = 100;
    std::vector<ReceiverEntry> a_entries, b_entries;
    a_entries.reserve(static_cast<std::size_t>(nx) * ny);
    b_entries.reserve(static_cast<std::size_t>(nx) * ny);
    std::uniform_real_distribution<double> jitter(-3.0, 3.0);
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            ReceiverEntry e;
            e.rx_id = "g" + std::to_string(iy * nx + ix);
            e.position = {2.0 * ix, 2.0 * iy, 1.5};
            e.paths = random_path_set(rng, 50);
            e.paths.rx_id = e.rx_id;
            a_entries.push_back(e);

            for (PathTuple& t : e.paths.paths) t.power_dbm += jitter(rng);
            b_entries.push_back(std::move(e));
        }
    }
    const Dataset a = make_dataset("throughput_a", std::move(a_entries));
    const Dataset b = make_dataset("throughput_b", std::move(b_entries));
    const PairedDatasets paired = pair_datasets(a, b);

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<ReceiverComparison> results = compare_receivers(paired, MetricConfig{});
    const double dt = seconds_since(t0);

    std::size_t ok = 0;
    for (const ReceiverComparison& r : results)
        if (r.cmp.status == CompareStatus::Ok) ++ok;
    c.require(ok == static_cast<std::size_t>(nx) * ny, "not all cells compared ok");
    c.require(dt < 10.0,
              "full-grid comparison took " + std::to_string(dt) + " s (limit 10 s)");
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<void(Check&)> fn;
    };
    const std::vector<Criterion> criteria = {
        {1, "metric axioms (identity, symmetry, CRT <= HRT; < 10 s)", criterion_axioms},
        {2, "NN assignment matches the exhaustive scan (500 instances)", criterion_nn_oracle},
        {3, "pooled standardization re-centers/re-scales; guard zeroes",
         criterion_standardization},
        {4, "HRT/CRT equal direct formula evaluation on 2x3 sets", criterion_formulas},
        {5, "weight scaling is exact and assignment-invariant", criterion_weight_scaling},
        {6, "material-only pair moves power channels only (< 30 s)", criterion_material_only},
        {7, "added-box differences are local; distal cells untouched", criterion_locality},
        {8, "tracer exactness vs independent reference construction",
         criterion_tracer_exactness},
        {9, "file round-trip precision and byte-identical CLI reruns",
         criterion_roundtrip_determinism},
        {10, "100x100 grid with 50 paths/receiver compares in < 10 s",
         criterion_throughput},
    };

    int failures = 0;
    for (const Criterion& cr : criteria) {
        Check check;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            cr.fn(check);
        } catch (const std::exception& e) {
            check.ok = false;
            check.detail = std::string("exception: ") + e.what();
        }
        const double dt = seconds_since(t0);
        if (check.ok) {
            std::printf("PASS  %2d. %s  [%.2f s]\n", cr.id, cr.name, dt);
        } else {
            std::printf("FAIL  %2d. %s  [%.2f s]  %s\n", cr.id, cr.name, dt,
                        check.detail.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    if (failures == 0)
        std::printf("all %zu acceptance checks passed\n", criteria.size());
    else
        std::printf("%d acceptance check(s) failed\n", failures);
    return failures;
}
