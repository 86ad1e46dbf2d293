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
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rtdiff/path_data.hpp"

namespace rtdiff {

/// A path tuple after standardization of the power and delay columns.
/// Angles stay in degrees; the corresponding unit vectors are cached so a
/// pair distance costs no trigonometry.
struct StandardizedTuple {
    double p_bar = 0.0;
    double tau_bar = 0.0;
    double dod_az_deg = 0.0;
    double dod_el_deg = 0.0;
    double doa_az_deg = 0.0;
    double doa_el_deg = 0.0;
    Eigen::Vector3d dod_unit{1.0, 0.0, 0.0};
    Eigen::Vector3d doa_unit{1.0, 0.0, 0.0};
};

/// Unit vector [cos el cos az, cos el sin az, sin el] for azimuth/elevation
/// in degrees. Azimuth counterclockwise from +x, elevation from the
/// horizontal plane (+90 is zenith).
Eigen::Vector3d direction_unit_vector(double az_deg, double el_deg);

/// Cosine distance 1 - u.dot(v), clamped to [0, 2] against rounding.
double cosine_distance(const Eigen::Vector3d& u, const Eigen::Vector3d& v);

/// Cosine distance between the directions (az1, el1) and (az2, el2).
double angular_distance(double az1_deg, double el1_deg, double az2_deg, double el2_deg);

/// Great-circle angle in degrees recovered from a cosine distance,
/// acos(1 - d) clamped to [0, 180].
double cosine_distance_to_deg(double d);

/// Population statistics (divide by count, not count-1) of the power and
/// delay columns of one set. Throws std::invalid_argument on an empty set.
StandardizationStats compute_set_stats(std::span<const PathTuple> paths);

/// Population statistics pooled over the union of both sets.
/// Throws std::invalid_argument when both are empty.
StandardizationStats compute_pooled_stats(const PathSet& x, const PathSet& y);

/// Statistics to apply to x and to y under the requested scope: pooled
/// returns the shared union statistics twice, per-set returns each set's
/// own statistics.
std::pair<StandardizationStats, StandardizationStats> compute_standardization(
    const PathSet& x, const PathSet& y, StandardizationScope scope);

/// Standardizes a set: p_bar = (P - mu_p) / sigma'_p and likewise for the
/// delay, where sigma' falls back to 1 below the sigma guard. Angles are
/// carried over and their unit vectors cached.
std::vector<StandardizedTuple> standardize(const PathSet& set,
                                           const StandardizationStats& stats);

/// The four per-feature distances: absolute standardized differences for
/// delay and power, cosine distances for the two directions.
FeatureDistances feature_distances(const StandardizedTuple& v, const StandardizedTuple& w);

/// Weighted sum of the four components. With unit weights this is the plain
/// unweighted sum.
double composite_distance(const FeatureDistances& fd, const MetricConfig& cfg);

/// The distance that drives nearest-neighbor assignment: the composite
/// distance under joint mode, or the single selected component under the
/// single-feature modes.
double assignment_distance(const FeatureDistances& fd, const MetricConfig& cfg);

enum class AssignDirection { XtoY, YtoX };

struct NNPair {
    std::size_t source = 0;
    std::size_t target = 0;
    FeatureDistances fd;   ///< full per-feature distances of the chosen pair
    double d_r = 0.0;      ///< composite (weighted) distance of the chosen pair
};

/// One directed nearest-neighbor assignment: every source element appears
/// exactly once; ties in the assignment distance break toward the lowest
/// target index.
struct NNAssignment {
    AssignDirection direction = AssignDirection::XtoY;
    std::vector<NNPair> pairs;
};

/// Assigns every source tuple its nearest target tuple under the
/// configured assignment distance. Backed by a kd-tree over the
/// standardized embedding; guaranteed to reproduce the exhaustive scan
/// index-for-index. Throws std::invalid_argument on an empty target.
NNAssignment nearest_neighbor_assign(std::span<const StandardizedTuple> source,
                                     std::span<const StandardizedTuple> target,
                                     const MetricConfig& cfg,
                                     AssignDirection direction = AssignDirection::XtoY);

/// Value + per-feature components of one set distance.
struct MetricFragment {
    double value = 0.0;
    FeatureDistances components;
};

/// Symmetrized Hausdorff over the two directed assignments:
/// 1/2 max d_r over X->Y plus 1/2 max d_r over Y->X. Components follow
/// cfg.hrt_component_mode: per-feature maxima over the assigned pairs, or
/// the components of the pair achieving each directed maximum.
MetricFragment hausdorff_from_assignments(const NNAssignment& x_to_y,
                                          const NNAssignment& y_to_x,
                                          const MetricConfig& cfg);

/// Symmetrized Chamfer: 1/(2N) sum d_r over X->Y plus 1/(2M) sum over
/// Y->X; components are the same directed averages taken per feature.
MetricFragment chamfer_from_assignments(const NNAssignment& x_to_y,
                                        const NNAssignment& y_to_x);

/// Convenience single-shot forms operating on raw path sets. Both sets must
/// be non-empty; standardization follows cfg.standardization_scope. The
/// optional power threshold is NOT applied here (see compare_path_sets).
MetricFragment hausdorff_rt(const PathSet& x, const PathSet& y, const MetricConfig& cfg);
MetricFragment chamfer_rt(const PathSet& x, const PathSet& y, const MetricConfig& cfg);

/// Full comparison of two path sets: applies the optional power threshold
/// to both sets, encodes empty-set degeneracies in the status (never as
/// infinities), standardizes, and computes HRT and CRT with per-feature
/// components and their degree-space readings.
ComparisonResult compare_path_sets(const PathSet& x, const PathSet& y,
                                   const MetricConfig& cfg);

}  // namespace rtdiff
