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

#include "rtdiff/path_data.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rtdiff {

void validate_metric_config(const MetricConfig& cfg) {
    const double w[4] = {cfg.w_tau, cfg.w_p, cfg.w_dod, cfg.w_doa};
    for (double wi : w) {
        if (!std::isfinite(wi) || wi < 0.0)
            throw std::invalid_argument("metric weights must be finite and >= 0");
    }
    if (cfg.assignment_mode == AssignmentMode::Joint &&
        cfg.w_tau == 0.0 && cfg.w_p == 0.0 && cfg.w_dod == 0.0 && cfg.w_doa == 0.0)
        throw std::invalid_argument("joint assignment requires at least one positive weight");
    if (cfg.power_threshold_dbm && !std::isfinite(*cfg.power_threshold_dbm))
        throw std::invalid_argument("power threshold must be finite");
}

const char* to_string(CompareStatus s) {
    switch (s) {
        case CompareStatus::Ok: return "ok";
        case CompareStatus::BothEmpty: return "both-empty";
        case CompareStatus::CoverageMismatch: return "coverage-mismatch";
    }
    return "unknown";
}

const char* channel_name(Channel c) {
    switch (c) {
        case Channel::Hrt: return "hrt";
        case Channel::Crt: return "crt";
        case Channel::HrtDtau: return "hrt_dtau";
        case Channel::HrtDp: return "hrt_dp";
        case Channel::HrtDdodDeg: return "hrt_ddod_deg";
        case Channel::HrtDdoaDeg: return "hrt_ddoa_deg";
        case Channel::CrtDtau: return "crt_dtau";
        case Channel::CrtDp: return "crt_dp";
        case Channel::CrtDdodDeg: return "crt_ddod_deg";
        case Channel::CrtDdoaDeg: return "crt_ddoa_deg";
    }
    return "unknown";
}

std::optional<Channel> channel_from_name(const std::string& name) {
    for (Channel c : all_channels)
        if (name == channel_name(c)) return c;
    return std::nullopt;
}

double channel_value(const ComparisonResult& r, Channel c) {
    switch (c) {
        case Channel::Hrt: return r.hrt;
        case Channel::Crt: return r.crt;
        case Channel::HrtDtau: return r.hrt_components.d_tau;
        case Channel::HrtDp: return r.hrt_components.d_p;
        case Channel::HrtDdodDeg: return r.hrt_angles_deg.dod_deg;
        case Channel::HrtDdoaDeg: return r.hrt_angles_deg.doa_deg;
        case Channel::CrtDtau: return r.crt_components.d_tau;
        case Channel::CrtDp: return r.crt_components.d_p;
        case Channel::CrtDdodDeg: return r.crt_angles_deg.dod_deg;
        case Channel::CrtDdoaDeg: return r.crt_angles_deg.doa_deg;
    }
    return 0.0;
}

void validate_layout(const ReceiverLayout& layout) {
    switch (layout.kind) {
        case LayoutKind::Grid: {
            const GridLayout& g = layout.grid;
            if (g.nx < 1 || g.ny < 1)
                throw std::invalid_argument("grid layout requires nx, ny >= 1");
            if (!(g.dx_m > 0.0) || !(g.dy_m > 0.0))
                throw std::invalid_argument("grid layout requires dx, dy > 0");
            break;
        }
        case LayoutKind::Trajectory: {
            for (std::size_t i = 1; i < layout.trajectory.size(); ++i) {
                if (!(layout.trajectory[i].t_s > layout.trajectory[i - 1].t_s))
                    throw std::invalid_argument(
                        "trajectory timestamps must be strictly increasing");
            }
            break;
        }
        case LayoutKind::Explicit:
            break;
    }
}

double wrap_azimuth_deg(double az_deg) {
    double w = std::fmod(az_deg + 180.0, 360.0);
    if (w < 0.0) w += 360.0;
    return w - 180.0;
}

namespace {

void require_finite(double v, const char* field) {
    if (!std::isfinite(v))
        throw std::invalid_argument(std::string("non-finite value in field ") + field);
}

void require_elevation(double v, const char* field) {
    if (v < -90.0 || v > 90.0)
        throw std::invalid_argument(std::string("elevation out of [-90, 90] in field ") +
                                    field + ": " + std::to_string(v));
}

}  // namespace

PathTuple validate_path_tuple(const PathTuple& raw) {
    require_finite(raw.power_dbm, "power_dbm");
    require_finite(raw.delay_s, "delay_s");
    require_finite(raw.dod_az_deg, "dod_az_deg");
    require_finite(raw.dod_el_deg, "dod_el_deg");
    require_finite(raw.doa_az_deg, "doa_az_deg");
    require_finite(raw.doa_el_deg, "doa_el_deg");
    if (raw.delay_s < 0.0)
        throw std::invalid_argument("negative delay_s: " + std::to_string(raw.delay_s));
    require_elevation(raw.dod_el_deg, "dod_el_deg");
    require_elevation(raw.doa_el_deg, "doa_el_deg");

    PathTuple out = raw;
    out.dod_az_deg = wrap_azimuth_deg(raw.dod_az_deg);
    out.doa_az_deg = wrap_azimuth_deg(raw.doa_az_deg);
    return out;
}

PathSet validate_path_set(const PathSet& raw) {
    PathSet out;
    out.rx_id = raw.rx_id;
    out.paths.reserve(raw.paths.size());
    for (std::size_t i = 0; i < raw.paths.size(); ++i) {
        try {
            out.paths.push_back(validate_path_tuple(raw.paths[i]));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("path set '" + raw.rx_id + "', path " +
                                        std::to_string(i) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace rtdiff
