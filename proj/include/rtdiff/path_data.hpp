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

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace rtdiff {

inline constexpr double speed_of_light_m_s = 299792458.0;

/// Sigma values below this are replaced by 1 before standardization divides.
inline constexpr double sigma_guard = 1e-12;

/// Two receivers are "the same receiver" if their positions agree within this.
inline constexpr double position_tolerance_m = 1e-6;

inline constexpr double deg_to_rad = 0.017453292519943295;
inline constexpr double rad_to_deg = 57.29577951308232;

/// One propagation path between a Tx and an Rx: received power, delay and
/// the departure/arrival directions. Angles are kept in degrees; azimuths
/// are normalized to [-180, 180), elevations live in [-90, +90].
struct PathTuple {
    double power_dbm = 0.0;
    double delay_s = 0.0;
    double dod_az_deg = 0.0;
    double dod_el_deg = 0.0;
    double doa_az_deg = 0.0;
    double doa_el_deg = 0.0;
};

/// All paths between one Tx and one Rx in one simulation. A finite point
/// cloud in 6 dimensions; may be empty when the receiver has no coverage.
struct PathSet {
    std::string rx_id;
    std::vector<PathTuple> paths;

    std::size_t size() const { return paths.size(); }
    bool empty() const { return paths.empty(); }
};

/// Population mean/std of the power and delay columns of one or two sets.
struct StandardizationStats {
    double mu_p_dbm = 0.0;
    double sigma_p_db = 0.0;
    double mu_tau_s = 0.0;
    double sigma_tau_s = 0.0;
};

/// The four per-feature distances between two (standardized) tuples:
/// delay and power as absolute differences in standardized units, the two
/// directions as cosine distances in [0, 2].
struct FeatureDistances {
    double d_tau = 0.0;
    double d_p = 0.0;
    double d_dod = 0.0;
    double d_doa = 0.0;
};

enum class AssignmentMode { Joint, DelayOnly, PowerOnly, DodOnly, DoaOnly };
enum class StandardizationScope { Pooled, PerSet };
enum class HrtComponentMode { PerFeatureMax, JointArgmax };

/// Everything that parameterizes a comparison run: feature weights for the
/// composite distance, how nearest neighbors are assigned, which
/// standardization statistics are used, an optional power cutoff applied to
/// both sets before anything else, and how HRT per-feature components are
/// aggregated.
struct MetricConfig {
    double w_tau = 1.0;
    double w_p = 1.0;
    double w_dod = 1.0;
    double w_doa = 1.0;
    AssignmentMode assignment_mode = AssignmentMode::Joint;
    StandardizationScope standardization_scope = StandardizationScope::Pooled;
    std::optional<double> power_threshold_dbm;
    HrtComponentMode hrt_component_mode = HrtComponentMode::PerFeatureMax;
};

/// Throws std::invalid_argument on negative/non-finite weights, or when no
/// weight is positive under joint assignment.
void validate_metric_config(const MetricConfig& cfg);

enum class CompareStatus { Ok, BothEmpty, CoverageMismatch };

const char* to_string(CompareStatus s);

/// Angular components expressed as great-circle angles in degrees,
/// angle = acos(1 - cosine_distance), in [0, 180].
struct AnglePair {
    double dod_deg = 0.0;
    double doa_deg = 0.0;
};

/// HRT and CRT for one receiver, with the per-feature components tracked
/// under the joint nearest-neighbor assignment. Degenerate inputs are
/// encoded in `status`: both sets empty compares as zero distance, exactly
/// one empty set is a coverage mismatch and leaves the distances unset
/// (NaN).
struct ComparisonResult {
    std::string rx_id;
    CompareStatus status = CompareStatus::Ok;
    double hrt = 0.0;
    double crt = 0.0;
    FeatureDistances hrt_components;
    FeatureDistances crt_components;
    AnglePair hrt_angles_deg;
    AnglePair crt_angles_deg;
    std::size_t n_paths_a = 0;
    std::size_t n_paths_b = 0;
};

/// The 10 scalar fields exportable per receiver. Angular channels are
/// reported in degrees, delay/power channels in standardized units.
enum class Channel {
    Hrt,
    Crt,
    HrtDtau,
    HrtDp,
    HrtDdodDeg,
    HrtDdoaDeg,
    CrtDtau,
    CrtDp,
    CrtDdodDeg,
    CrtDdoaDeg,
};

inline constexpr std::array<Channel, 10> all_channels = {
    Channel::Hrt,        Channel::Crt,        Channel::HrtDtau,
    Channel::HrtDp,      Channel::HrtDdodDeg, Channel::HrtDdoaDeg,
    Channel::CrtDtau,    Channel::CrtDp,      Channel::CrtDdodDeg,
    Channel::CrtDdoaDeg,
};

const char* channel_name(Channel c);
std::optional<Channel> channel_from_name(const std::string& name);
double channel_value(const ComparisonResult& r, Channel c);

/// Receiver placements for synthesis and aggregation. Grid layouts span a
/// fixed-height lattice, trajectory layouts carry strictly increasing
/// timestamps, explicit layouts name each receiver.
struct GridLayout {
    double origin_x_m = 0.0;
    double origin_y_m = 0.0;
    int nx = 1;
    int ny = 1;
    double dx_m = 1.0;
    double dy_m = 1.0;
    double height_m = 1.5;
};

struct TrajectoryPointSpec {
    double t_s = 0.0;
    double x_m = 0.0;
    double y_m = 0.0;
    double z_m = 0.0;
};

struct ExplicitReceiverSpec {
    std::string rx_id;
    double x_m = 0.0;
    double y_m = 0.0;
    double z_m = 0.0;
};

enum class LayoutKind { Grid, Trajectory, Explicit };

struct ReceiverLayout {
    LayoutKind kind = LayoutKind::Grid;
    GridLayout grid;
    std::vector<TrajectoryPointSpec> trajectory;
    std::vector<ExplicitReceiverSpec> explicit_receivers;
};

/// Throws std::invalid_argument on degenerate grids or non-increasing
/// trajectory timestamps.
void validate_layout(const ReceiverLayout& layout);

/// Wraps an azimuth (degrees) into [-180, 180).
double wrap_azimuth_deg(double az_deg);

/// Normalizes one tuple: wraps azimuths, checks elevations, delay sign and
/// finiteness. Throws std::invalid_argument with a field diagnostic.
PathTuple validate_path_tuple(const PathTuple& raw);

/// Normalizes every tuple of a set (see validate_path_tuple). Idempotent:
/// validating a validated set changes nothing.
PathSet validate_path_set(const PathSet& raw);

}  // namespace rtdiff
