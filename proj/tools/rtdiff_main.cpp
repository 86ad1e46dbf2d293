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

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "rtdiff/analysis.hpp"
#include "rtdiff/dataset.hpp"
#include "rtdiff/metrics.hpp"
#include "rtdiff/scene.hpp"
#include "rtdiff/svg.hpp"
#include "rtdiff/tracer.hpp"

namespace {

using namespace rtdiff;
using nlohmann::json;

// Metric options shared by the comparing subcommands. Precedence: explicit
// flags override the config file, which overrides the defaults.
struct MetricFlags {
    std::vector<double> weights;
    std::string assignment_mode;
    std::string std_scope;
    std::string hrt_components;
    double power_threshold_dbm = 0.0;
    std::string config_path;

    CLI::Option* opt_weights = nullptr;
    CLI::Option* opt_assignment = nullptr;
    CLI::Option* opt_scope = nullptr;
    CLI::Option* opt_components = nullptr;
    CLI::Option* opt_threshold = nullptr;
};

void add_metric_flags(CLI::App* cmd, MetricFlags& f) {
    f.opt_weights = cmd->add_option("--weights", f.weights,
                                    "Feature weights w_tau,w_p,w_dod,w_doa (default 1,1,1,1)")
                        ->delimiter(',')
                        ->expected(4);
    f.opt_assignment =
        cmd->add_option("--assignment-mode", f.assignment_mode,
                        "Nearest-neighbor assignment: joint, delay-only, power-only, "
                        "dod-only or doa-only")
            ->check(CLI::IsMember(
                {"joint", "delay-only", "power-only", "dod-only", "doa-only"}));
    f.opt_scope = cmd->add_option("--std-scope", f.std_scope,
                                  "Standardization scope: pooled or per-set")
                      ->check(CLI::IsMember({"pooled", "per-set"}));
    f.opt_threshold = cmd->add_option("--power-threshold-dbm", f.power_threshold_dbm,
                                      "Drop paths below this power before comparing");
    f.opt_components =
        cmd->add_option("--hrt-components", f.hrt_components,
                        "HRT component tracking: per-feature-max or joint-argmax")
            ->check(CLI::IsMember({"per-feature-max", "joint-argmax"}));
    cmd->add_option("--config", f.config_path, "JSON file with metric settings");
}

AssignmentMode parse_assignment(const std::string& s) {
    if (s == "joint") return AssignmentMode::Joint;
    if (s == "delay-only") return AssignmentMode::DelayOnly;
    if (s == "power-only") return AssignmentMode::PowerOnly;
    if (s == "dod-only") return AssignmentMode::DodOnly;
    if (s == "doa-only") return AssignmentMode::DoaOnly;
    throw std::invalid_argument("unknown assignment mode '" + s + "'");
}

MetricConfig build_metric_config(const MetricFlags& f) {
    MetricConfig cfg;

    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) throw std::runtime_error("cannot open config '" + f.config_path + "'");
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw std::invalid_argument(f.config_path + ": " + e.what());
        }
        if (j.contains("weights")) {
            const auto& w = j["weights"];
            if (!w.is_array() || w.size() != 4)
                throw std::invalid_argument(f.config_path + ": weights must have 4 entries");
            cfg.w_tau = w[0].get<double>();
            cfg.w_p = w[1].get<double>();
            cfg.w_dod = w[2].get<double>();
            cfg.w_doa = w[3].get<double>();
        }
        if (j.contains("assignment_mode"))
            cfg.assignment_mode = parse_assignment(j["assignment_mode"].get<std::string>());
        if (j.contains("std_scope"))
            cfg.standardization_scope = j["std_scope"].get<std::string>() == "per-set"
                                            ? StandardizationScope::PerSet
                                            : StandardizationScope::Pooled;
        if (j.contains("power_threshold_dbm") && !j["power_threshold_dbm"].is_null())
            cfg.power_threshold_dbm = j["power_threshold_dbm"].get<double>();
        if (j.contains("hrt_components"))
            cfg.hrt_component_mode = j["hrt_components"].get<std::string>() == "joint-argmax"
                                         ? HrtComponentMode::JointArgmax
                                         : HrtComponentMode::PerFeatureMax;
    }

    if (f.opt_weights->count()) {
        cfg.w_tau = f.weights[0];
        cfg.w_p = f.weights[1];
        cfg.w_dod = f.weights[2];
        cfg.w_doa = f.weights[3];
    }
    if (f.opt_assignment->count()) cfg.assignment_mode = parse_assignment(f.assignment_mode);
    if (f.opt_scope->count())
        cfg.standardization_scope = f.std_scope == "per-set" ? StandardizationScope::PerSet
                                                             : StandardizationScope::Pooled;
    if (f.opt_threshold->count()) cfg.power_threshold_dbm = f.power_threshold_dbm;
    if (f.opt_components->count())
        cfg.hrt_component_mode = f.hrt_components == "joint-argmax"
                                     ? HrtComponentMode::JointArgmax
                                     : HrtComponentMode::PerFeatureMax;

    validate_metric_config(cfg);
    return cfg;
}

std::vector<Channel> parse_channels(const std::vector<std::string>& names) {
    std::vector<Channel> out;
    for (const std::string& n : names) {
        const auto c = channel_from_name(n);
        if (!c) throw std::invalid_argument("unknown channel '" + n + "'");
        out.push_back(*c);
    }
    return out;
}

void report_unpaired(const PairedDatasets& paired) {
    auto report = [](const char* which, const std::vector<std::string>& ids) {
        if (ids.empty()) return;
        std::cerr << "note: " << ids.size() << " receiver(s) only in dataset " << which << ":";
        for (const std::string& id : ids) std::cerr << ' ' << id;
        std::cerr << "\n";
    };
    report("a", paired.only_in_a);
    report("b", paired.only_in_b);
}

// ------------------------------------------------------------------ synth

int cmd_synth(const std::string& scene_path, const std::vector<double>& grid_spec,
              const std::string& positions_path, const std::string& out_prefix,
              std::string label, ParseMode mode) {
    const SceneSpec scene = load_scene(scene_path);

    ReceiverLayout layout;
    std::vector<ReceiverEntry> external;  // keeps ids/timestamps from a positions file
    if (!positions_path.empty()) {
        external = load_positions_csv(positions_path, mode);
        layout.kind = LayoutKind::Explicit;
        for (const ReceiverEntry& e : external)
            layout.explicit_receivers.push_back(
                {e.rx_id, e.position.x(), e.position.y(), e.position.z()});
    } else {
        layout.kind = LayoutKind::Grid;
        layout.grid.origin_x_m = grid_spec[0];
        layout.grid.origin_y_m = grid_spec[1];
        layout.grid.nx = static_cast<int>(grid_spec[2]);
        layout.grid.ny = static_cast<int>(grid_spec[3]);
        layout.grid.dx_m = grid_spec[4];
        layout.grid.dy_m = grid_spec[5];
        layout.grid.height_m = grid_spec[6];
    }

    TraceResult result = trace(scene, layout);
    if (!external.empty()) {
        for (std::size_t i = 0; i < external.size(); ++i)
            result.receivers[i].t_s = external[i].t_s;
    }

    if (label.empty()) label = std::filesystem::path(out_prefix).filename().string();
    write_trace_dataset(result, scene, out_prefix, label);

    std::size_t inside = 0, covered = 0;
    for (const TracedReceiver& r : result.receivers) {
        if (r.inside_geometry) ++inside;
        if (!r.paths.empty()) ++covered;
    }
    std::cerr << "traced " << result.receivers.size() << " receivers (" << covered
              << " covered, " << inside << " inside geometry)\n";
    return 0;
}

// ---------------------------------------------------------------- compare

int cmd_compare(const std::string& a_prefix, const std::string& b_prefix,
                const std::string& out_prefix, const MetricConfig& cfg, bool plot,
                const std::vector<Channel>& channels, ParseMode mode) {
    const Dataset a = load_dataset(a_prefix, mode);
    const Dataset b = load_dataset(b_prefix, mode);
    const PairedDatasets paired = pair_datasets(a, b);
    report_unpaired(paired);

    const std::vector<ReceiverComparison> results = compare_receivers(paired, cfg);
    write_results(results, out_prefix);

    if (plot) {
        const GridMap map = compare_grid(a, b, cfg);
        write_grid_csv(map, out_prefix + ".grid.csv");
        for (Channel c : channels)
            write_grid_heatmap_svg(map, c, out_prefix + "." + channel_name(c) + ".svg");
    }
    return 0;
}

int cmd_trajectory(const std::string& a_prefix, const std::string& b_prefix,
                   const std::string& out_prefix, const MetricConfig& cfg, bool plot,
                   const std::vector<Channel>& channels, ParseMode mode) {
    const Dataset a = load_dataset(a_prefix, mode);
    const Dataset b = load_dataset(b_prefix, mode);
    const PairedDatasets paired = pair_datasets(a, b);
    report_unpaired(paired);
    if (!paired.only_in_a.empty() || !paired.only_in_b.empty())
        std::cerr << "note: steps present in only one dataset are excluded from the series\n";

    const TrajectorySeries series = compare_trajectory(a, b, cfg);
    write_trajectory_csv(series, out_prefix + ".trajectory.csv");

    std::vector<ReceiverComparison> results = compare_receivers(paired, cfg);
    write_results(results, out_prefix);

    if (plot) {
        for (Channel c : channels)
            write_trajectory_chart_svg(series, c, out_prefix + "." + channel_name(c) + ".svg");
    }
    return 0;
}

int cmd_consistency(const std::string& a_prefix, double radius_m,
                    const std::string& out_prefix, const MetricConfig& cfg, ParseMode mode) {
    const Dataset a = load_dataset(a_prefix, mode);
    const std::vector<ConsistencyRow> rows = spatial_consistency(a, radius_m, cfg);
    write_consistency_csv(rows, out_prefix + ".consistency.csv");
    return 0;
}

int cmd_summarize(const std::string& a_prefix, const std::string& b_prefix,
                  const std::vector<double>& center, double radius_m,
                  const std::string& out_path, const MetricConfig& cfg, ParseMode mode) {
    const Dataset a = load_dataset(a_prefix, mode);
    const Dataset b = load_dataset(b_prefix, mode);
    const GridMap map = compare_grid(a, b, cfg);
    const RegionSummary rs = summarize_region(map, center[0], center[1], radius_m);

    json j;
    j["region"] = {{"center_x_m", center[0]},
                   {"center_y_m", center[1]},
                   {"radius_m", radius_m},
                   {"cells_ok", rs.cells_in_region}};
    json channels = json::object();
    for (std::size_t c = 0; c < all_channels.size(); ++c) {
        const char* name = channel_name(all_channels[c]);
        if (rs.summary.channels) {
            channels[name] = {{"mean", (*rs.summary.channels)[c].mean},
                              {"max", (*rs.summary.channels)[c].max}};
        } else {
            channels[name] = {{"mean", nullptr}, {"max", nullptr}};
        }
    }
    j["channels"] = channels;

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    out << j.dump(2) << "\n";
    if (!rs.summary.channels)
        std::cerr << "note: no ok cells within the region; summary has null channels\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rtdiff: compare ray tracing channel simulations as 6-D point clouds"};
    app.require_subcommand(1);

    bool strict = false;
    app.add_flag("--strict", strict,
                 "Reject unknown CSV columns instead of warning and ignoring them");

    // synth
    auto* synth = app.add_subcommand("synth", "Trace a synthetic scene into dataset files");
    std::string scene_path, positions_path, out_prefix, label;
    std::vector<double> grid_spec;
    synth->add_option("--scene", scene_path, "Scene JSON file")->required();
    auto* grid_opt = synth->add_option("--grid", grid_spec,
                                       "Receiver grid x0,y0,nx,ny,dx,dy,height")
                         ->delimiter(',')
                         ->expected(7);
    auto* pos_opt =
        synth->add_option("--positions", positions_path,
                          "Trace at positions from this CSV (rx_id,x_m,y_m,z_m[,t_s])");
    grid_opt->excludes(pos_opt);
    synth->add_option("--out", out_prefix, "Output dataset prefix")->required();
    synth->add_option("--label", label, "Dataset label (default: output name)");

    // compare / trajectory
    auto* compare = app.add_subcommand("compare", "Compare two datasets receiver by receiver");
    auto* trajectory =
        app.add_subcommand("trajectory", "Compare two trajectory datasets step by step");
    std::string cmp_a, cmp_b, cmp_out;
    bool cmp_plot = false;
    std::vector<std::string> cmp_channels = {"hrt", "crt"};
    MetricFlags cmp_flags, traj_flags;
    for (auto* cmd : {compare, trajectory}) {
        cmd->add_option("a", cmp_a, "First dataset prefix")->required();
        cmd->add_option("b", cmp_b, "Second dataset prefix")->required();
        cmd->add_option("--out", cmp_out, "Output prefix")->required();
        cmd->add_flag("--plot", cmp_plot, "Emit one SVG per requested channel");
        cmd->add_option("--channels", cmp_channels, "Channels to plot (default hrt,crt)")
            ->delimiter(',');
    }
    add_metric_flags(compare, cmp_flags);
    add_metric_flags(trajectory, traj_flags);

    // consistency
    auto* consistency = app.add_subcommand(
        "consistency", "Neighbor CRT report over one dataset (spatial consistency)");
    std::string cons_a, cons_out;
    double cons_radius = 0.0;
    MetricFlags cons_flags;
    consistency->add_option("a", cons_a, "Dataset prefix")->required();
    consistency->add_option("--radius", cons_radius, "Neighbor radius in meters")->required();
    consistency->add_option("--out", cons_out, "Output prefix")->required();
    add_metric_flags(consistency, cons_flags);

    // summarize
    auto* summarize =
        app.add_subcommand("summarize", "Region summary of a grid comparison");
    std::string sum_a, sum_b, sum_out;
    std::vector<double> sum_center;
    double sum_radius = 0.0;
    MetricFlags sum_flags;
    summarize->add_option("a", sum_a, "First dataset prefix")->required();
    summarize->add_option("b", sum_b, "Second dataset prefix")->required();
    summarize->add_option("--region-center", sum_center, "Region center x,y in meters")
        ->delimiter(',')
        ->expected(2)
        ->required();
    summarize->add_option("--region-radius", sum_radius, "Region radius in meters")
        ->required();
    summarize->add_option("--out", sum_out, "Output JSON path")->required();
    add_metric_flags(summarize, sum_flags);

    CLI11_PARSE(app, argc, argv);

    const ParseMode mode = strict ? ParseMode::Strict : ParseMode::Lenient;
    try {
        if (synth->parsed()) {
            if (positions_path.empty() && grid_spec.empty())
                throw std::invalid_argument("synth requires --grid or --positions");
            return cmd_synth(scene_path, grid_spec, positions_path, out_prefix, label, mode);
        }
        if (compare->parsed())
            return cmd_compare(cmp_a, cmp_b, cmp_out, build_metric_config(cmp_flags),
                               cmp_plot, parse_channels(cmp_channels), mode);
        if (trajectory->parsed())
            return cmd_trajectory(cmp_a, cmp_b, cmp_out, build_metric_config(traj_flags),
                                  cmp_plot, parse_channels(cmp_channels), mode);
        if (consistency->parsed())
            return cmd_consistency(cons_a, cons_radius, cons_out,
                                   build_metric_config(cons_flags), mode);
        if (summarize->parsed())
            return cmd_summarize(sum_a, sum_b, sum_center, sum_radius, sum_out,
                                 build_metric_config(sum_flags), mode);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
