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

#include "rtdiff/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rtdiff/nn_index.hpp"

namespace rtdiff {

Eigen::Vector3d direction_unit_vector(double az_deg, double el_deg) {
    const double az = az_deg * deg_to_rad;
    const double el = el_deg * deg_to_rad;
    const double cos_el = std::cos(el);
    return {cos_el * std::cos(az), cos_el * std::sin(az), std::sin(el)};
}

double cosine_distance(const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
    // identical directions are exactly distance 0; the dot product alone
    // would leave an ulp of noise
    if (u.x() == v.x() && u.y() == v.y() && u.z() == v.z()) return 0.0;
    const double d = 1.0 - u.dot(v);
    if (d < 0.0) return 0.0;
    if (d > 2.0) return 2.0;
    return d;
}

double angular_distance(double az1_deg, double el1_deg, double az2_deg, double el2_deg) {
    return cosine_distance(direction_unit_vector(az1_deg, el1_deg),
                           direction_unit_vector(az2_deg, el2_deg));
}

double cosine_distance_to_deg(double d) {
    double c = 1.0 - d;
    c = std::clamp(c, -1.0, 1.0);
    return std::acos(c) * rad_to_deg;
}

StandardizationStats compute_set_stats(std::span<const PathTuple> paths) {
    if (paths.empty())
        throw std::invalid_argument("standardization statistics over an empty set");
    const double n = static_cast<double>(paths.size());
    double sum_p = 0.0, sum_tau = 0.0;
    for (const PathTuple& t : paths) {
        sum_p += t.power_dbm;
        sum_tau += t.delay_s;
    }
    StandardizationStats s;
    s.mu_p_dbm = sum_p / n;
    s.mu_tau_s = sum_tau / n;
    double var_p = 0.0, var_tau = 0.0;
    for (const PathTuple& t : paths) {
        const double dp = t.power_dbm - s.mu_p_dbm;
        const double dt = t.delay_s - s.mu_tau_s;
        var_p += dp * dp;
        var_tau += dt * dt;
    }
    s.sigma_p_db = std::sqrt(var_p / n);
    s.sigma_tau_s = std::sqrt(var_tau / n);
    return s;
}

StandardizationStats compute_pooled_stats(const PathSet& x, const PathSet& y) {
    std::vector<PathTuple> pooled;
    pooled.reserve(x.paths.size() + y.paths.size());
    pooled.insert(pooled.end(), x.paths.begin(), x.paths.end());
    pooled.insert(pooled.end(), y.paths.begin(), y.paths.end());
    return compute_set_stats(pooled);
}

std::pair<StandardizationStats, StandardizationStats> compute_standardization(
    const PathSet& x, const PathSet& y, StandardizationScope scope) {
    if (scope == StandardizationScope::Pooled) {
        const StandardizationStats pooled = compute_pooled_stats(x, y);
        return {pooled, pooled};
    }
    return {compute_set_stats(x.paths), compute_set_stats(y.paths)};
}

namespace {

double guarded(double sigma) { return sigma < sigma_guard ? 1.0 : sigma; }

}  // namespace

std::vector<StandardizedTuple> standardize(const PathSet& set,
                                           const StandardizationStats& stats) {
    const double sp = guarded(stats.sigma_p_db);
    const double st = guarded(stats.sigma_tau_s);
    std::vector<StandardizedTuple> out;
    out.reserve(set.paths.size());
    for (const PathTuple& t : set.paths) {
        StandardizedTuple s;
        s.p_bar = (t.power_dbm - stats.mu_p_dbm) / sp;
        s.tau_bar = (t.delay_s - stats.mu_tau_s) / st;
        s.dod_az_deg = t.dod_az_deg;
        s.dod_el_deg = t.dod_el_deg;
        s.doa_az_deg = t.doa_az_deg;
        s.doa_el_deg = t.doa_el_deg;
        s.dod_unit = direction_unit_vector(t.dod_az_deg, t.dod_el_deg);
        s.doa_unit = direction_unit_vector(t.doa_az_deg, t.doa_el_deg);
        out.push_back(s);
    }
    return out;
}

FeatureDistances feature_distances(const StandardizedTuple& v, const StandardizedTuple& w) {
    FeatureDistances fd;
    fd.d_tau = std::abs(v.tau_bar - w.tau_bar);
    fd.d_p = std::abs(v.p_bar - w.p_bar);
    fd.d_dod = cosine_distance(v.dod_unit, w.dod_unit);
    fd.d_doa = cosine_distance(v.doa_unit, w.doa_unit);
    return fd;
}

double composite_distance(const FeatureDistances& fd, const MetricConfig& cfg) {
    return cfg.w_tau * fd.d_tau + cfg.w_p * fd.d_p + cfg.w_dod * fd.d_dod +
           cfg.w_doa * fd.d_doa;
}

double assignment_distance(const FeatureDistances& fd, const MetricConfig& cfg) {
    switch (cfg.assignment_mode) {
        case AssignmentMode::Joint: return composite_distance(fd, cfg);
        case AssignmentMode::DelayOnly: return fd.d_tau;
        case AssignmentMode::PowerOnly: return fd.d_p;
        case AssignmentMode::DodOnly: return fd.d_dod;
        case AssignmentMode::DoaOnly: return fd.d_doa;
    }
    return composite_distance(fd, cfg);
}

NNAssignment nearest_neighbor_assign(std::span<const StandardizedTuple> source,
                                     std::span<const StandardizedTuple> target,
                                     const MetricConfig& cfg,
                                     AssignDirection direction) {
    if (target.empty())
        throw std::invalid_argument("nearest-neighbor assignment against an empty target");

    NNAssignment out;
    out.direction = direction;
    out.pairs.reserve(source.size());
    const TupleKdTree index(target, cfg);
    for (std::size_t i = 0; i < source.size(); ++i) {
        NNPair pair;
        pair.source = i;
        pair.target = index.nearest(source[i]);
        pair.fd = feature_distances(source[i], target[pair.target]);
        pair.d_r = composite_distance(pair.fd, cfg);
        out.pairs.push_back(pair);
    }
    return out;
}

namespace {

struct DirectedExtremes {
    double max_d_r = 0.0;
    FeatureDistances max_per_feature;   // feature-wise maxima over the pairs
    FeatureDistances argmax_components; // components of the pair with maximal d_r
    FeatureDistances mean_per_feature;  // feature-wise averages
    double mean_d_r = 0.0;
};

DirectedExtremes directed_extremes(const NNAssignment& a) {
    DirectedExtremes e;
    if (a.pairs.empty()) return e;
    double best = -1.0;
    for (const NNPair& p : a.pairs) {
        e.max_d_r = std::max(e.max_d_r, p.d_r);
        e.max_per_feature.d_tau = std::max(e.max_per_feature.d_tau, p.fd.d_tau);
        e.max_per_feature.d_p = std::max(e.max_per_feature.d_p, p.fd.d_p);
        e.max_per_feature.d_dod = std::max(e.max_per_feature.d_dod, p.fd.d_dod);
        e.max_per_feature.d_doa = std::max(e.max_per_feature.d_doa, p.fd.d_doa);
        if (p.d_r > best) {  // first maximal pair wins, keeps results deterministic
            best = p.d_r;
            e.argmax_components = p.fd;
        }
        e.mean_d_r += p.d_r;
        e.mean_per_feature.d_tau += p.fd.d_tau;
        e.mean_per_feature.d_p += p.fd.d_p;
        e.mean_per_feature.d_dod += p.fd.d_dod;
        e.mean_per_feature.d_doa += p.fd.d_doa;
    }
    const double n = static_cast<double>(a.pairs.size());
    e.mean_d_r /= n;
    e.mean_per_feature.d_tau /= n;
    e.mean_per_feature.d_p /= n;
    e.mean_per_feature.d_dod /= n;
    e.mean_per_feature.d_doa /= n;
    return e;
}

FeatureDistances symmetrize(const FeatureDistances& a, const FeatureDistances& b) {
    return {0.5 * a.d_tau + 0.5 * b.d_tau, 0.5 * a.d_p + 0.5 * b.d_p,
            0.5 * a.d_dod + 0.5 * b.d_dod, 0.5 * a.d_doa + 0.5 * b.d_doa};
}

}  // namespace

MetricFragment hausdorff_from_assignments(const NNAssignment& x_to_y,
                                          const NNAssignment& y_to_x,
                                          const MetricConfig& cfg) {
    const DirectedExtremes fwd = directed_extremes(x_to_y);
    const DirectedExtremes bwd = directed_extremes(y_to_x);
    MetricFragment frag;
    frag.value = 0.5 * fwd.max_d_r + 0.5 * bwd.max_d_r;
    if (cfg.hrt_component_mode == HrtComponentMode::PerFeatureMax)
        frag.components = symmetrize(fwd.max_per_feature, bwd.max_per_feature);
    else
        frag.components = symmetrize(fwd.argmax_components, bwd.argmax_components);
    return frag;
}

MetricFragment chamfer_from_assignments(const NNAssignment& x_to_y,
                                        const NNAssignment& y_to_x) {
    const DirectedExtremes fwd = directed_extremes(x_to_y);
    const DirectedExtremes bwd = directed_extremes(y_to_x);
    MetricFragment frag;
    frag.value = 0.5 * fwd.mean_d_r + 0.5 * bwd.mean_d_r;
    frag.components = symmetrize(fwd.mean_per_feature, bwd.mean_per_feature);
    return frag;
}

namespace {

struct StandardizedPair {
    std::vector<StandardizedTuple> x;
    std::vector<StandardizedTuple> y;
};

StandardizedPair standardize_pair(const PathSet& x, const PathSet& y,
                                  const MetricConfig& cfg) {
    const auto [stats_x, stats_y] =
        compute_standardization(x, y, cfg.standardization_scope);
    return {standardize(x, stats_x), standardize(y, stats_y)};
}

}  // namespace

MetricFragment hausdorff_rt(const PathSet& x, const PathSet& y, const MetricConfig& cfg) {
    const StandardizedPair sp = standardize_pair(x, y, cfg);
    const NNAssignment fwd = nearest_neighbor_assign(sp.x, sp.y, cfg, AssignDirection::XtoY);
    const NNAssignment bwd = nearest_neighbor_assign(sp.y, sp.x, cfg, AssignDirection::YtoX);
    return hausdorff_from_assignments(fwd, bwd, cfg);
}

MetricFragment chamfer_rt(const PathSet& x, const PathSet& y, const MetricConfig& cfg) {
    const StandardizedPair sp = standardize_pair(x, y, cfg);
    const NNAssignment fwd = nearest_neighbor_assign(sp.x, sp.y, cfg, AssignDirection::XtoY);
    const NNAssignment bwd = nearest_neighbor_assign(sp.y, sp.x, cfg, AssignDirection::YtoX);
    return chamfer_from_assignments(fwd, bwd);
}

namespace {

PathSet filter_by_power(const PathSet& set, double threshold_dbm) {
    PathSet out;
    out.rx_id = set.rx_id;
    out.paths.reserve(set.paths.size());
    for (const PathTuple& t : set.paths)
        if (t.power_dbm >= threshold_dbm) out.paths.push_back(t);
    return out;
}

}  // namespace

ComparisonResult compare_path_sets(const PathSet& x, const PathSet& y,
                                   const MetricConfig& cfg) {
    validate_metric_config(cfg);

    const PathSet* px = &x;
    const PathSet* py = &y;
    PathSet fx, fy;
    if (cfg.power_threshold_dbm) {
        fx = filter_by_power(x, *cfg.power_threshold_dbm);
        fy = filter_by_power(y, *cfg.power_threshold_dbm);
        px = &fx;
        py = &fy;
    }

    ComparisonResult r;
    r.rx_id = x.rx_id;
    r.n_paths_a = px->size();
    r.n_paths_b = py->size();

    if (px->empty() && py->empty()) {
        r.status = CompareStatus::BothEmpty;
        return r;  // zero distances by convention
    }
    if (px->empty() || py->empty()) {
        r.status = CompareStatus::CoverageMismatch;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        r.hrt = r.crt = nan;
        r.hrt_components = {nan, nan, nan, nan};
        r.crt_components = {nan, nan, nan, nan};
        r.hrt_angles_deg = {nan, nan};
        r.crt_angles_deg = {nan, nan};
        return r;
    }

    const StandardizedPair sp = standardize_pair(*px, *py, cfg);
    const NNAssignment fwd = nearest_neighbor_assign(sp.x, sp.y, cfg, AssignDirection::XtoY);
    const NNAssignment bwd = nearest_neighbor_assign(sp.y, sp.x, cfg, AssignDirection::YtoX);

    const MetricFragment h = hausdorff_from_assignments(fwd, bwd, cfg);
    const MetricFragment c = chamfer_from_assignments(fwd, bwd);
    r.status = CompareStatus::Ok;
    r.hrt = h.value;
    r.crt = c.value;
    r.hrt_components = h.components;
    r.crt_components = c.components;
    r.hrt_angles_deg = {cosine_distance_to_deg(h.components.d_dod),
                        cosine_distance_to_deg(h.components.d_doa)};
    r.crt_angles_deg = {cosine_distance_to_deg(c.components.d_dod),
                        cosine_distance_to_deg(c.components.d_doa)};
    return r;
}

}  // namespace rtdiff
