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

#include "rtdiff/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace rtdiff {

using nlohmann::json;

std::string format_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

const ReceiverEntry* Dataset::find(const std::string& rx_id) const {
    const auto it = index_.find(rx_id);
    return it == index_.end() ? nullptr : &receivers[it->second];
}

bool Dataset::is_trajectory() const {
    if (receivers.empty()) return false;
    return std::all_of(receivers.begin(), receivers.end(),
                       [](const ReceiverEntry& r) { return r.t_s.has_value(); });
}

Dataset make_dataset(std::string label, std::vector<ReceiverEntry> receivers,
                     DatasetMetadata metadata) {
    Dataset ds;
    ds.label = std::move(label);
    ds.metadata = std::move(metadata);
    ds.receivers = std::move(receivers);
    for (std::size_t i = 0; i < ds.receivers.size(); ++i) {
        ReceiverEntry& r = ds.receivers[i];
        if (!ds.index_.emplace(r.rx_id, i).second)
            throw std::invalid_argument("duplicate rx_id '" + r.rx_id + "' in dataset");
        r.paths.rx_id = r.rx_id;
        r.paths = validate_path_set(r.paths);
    }
    return ds;
}

Dataset dataset_from_trace(const TraceResult& trace, const SceneSpec& scene,
                           std::string label) {
    std::vector<ReceiverEntry> receivers;
    receivers.reserve(trace.receivers.size());
    for (const TracedReceiver& tr : trace.receivers) {
        ReceiverEntry e;
        e.rx_id = tr.rx_id;
        e.position = tr.position;
        e.t_s = tr.t_s;
        e.paths.rx_id = tr.rx_id;
        for (const TracedPath& p : tr.paths) e.paths.paths.push_back(p.tuple);
        receivers.push_back(std::move(e));
    }
    DatasetMetadata md;
    md.frequency_hz = scene.carrier_frequency_hz;
    md.tx_position = scene.tx.position;
    return make_dataset(std::move(label), std::move(receivers), std::move(md));
}

// ---------------------------------------------------------------- CSV in

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_number(const std::string& field, const std::string& file, std::size_t line_no,
                    std::size_t col) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw std::invalid_argument(file + ":" + std::to_string(line_no) + ": column " +
                                    std::to_string(col + 1) + ": not a number: '" + field +
                                    "'");
    return v;
}

struct CsvFile {
    std::string path;
    std::vector<std::string> header;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // line no + fields
};

CsvFile read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    CsvFile csv;
    csv.path = path;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (csv.header.empty())
            csv.header = split_csv_line(line);
        else
            csv.rows.emplace_back(line_no, split_csv_line(line));
    }
    if (csv.header.empty()) throw std::invalid_argument(path + ": missing header line");
    return csv;
}

// Maps required columns to their indices; extra columns are rejected in
// strict mode and warned about in lenient mode. Optional columns may be
// absent.
std::vector<std::size_t> resolve_header(const CsvFile& csv,
                                        const std::vector<std::string>& required,
                                        const std::vector<std::string>& optional,
                                        ParseMode mode,
                                        std::vector<bool>* optional_present = nullptr) {
    std::vector<std::size_t> indices;
    for (const std::string& name : required) {
        const auto it = std::find(csv.header.begin(), csv.header.end(), name);
        if (it == csv.header.end())
            throw std::invalid_argument(csv.path + ": malformed header: missing column '" +
                                        name + "'");
        indices.push_back(static_cast<std::size_t>(it - csv.header.begin()));
    }
    if (optional_present) optional_present->assign(optional.size(), false);
    for (std::size_t i = 0; i < optional.size(); ++i) {
        const auto it = std::find(csv.header.begin(), csv.header.end(), optional[i]);
        if (it != csv.header.end()) {
            indices.push_back(static_cast<std::size_t>(it - csv.header.begin()));
            if (optional_present) (*optional_present)[i] = true;
        }
    }
    for (const std::string& col : csv.header) {
        const bool known = std::find(required.begin(), required.end(), col) != required.end() ||
                           std::find(optional.begin(), optional.end(), col) != optional.end();
        if (!known) {
            if (mode == ParseMode::Strict)
                throw std::invalid_argument(csv.path + ": unknown column '" + col +
                                            "' (use lenient mode to ignore)");
            std::cerr << "warning: " << csv.path << ": ignoring unknown column '" << col
                      << "'\n";
        }
    }
    return indices;
}

const std::string& field_at(const CsvFile& csv, const std::pair<std::size_t, std::vector<std::string>>& row,
                            std::size_t col) {
    if (col >= row.second.size())
        throw std::invalid_argument(csv.path + ":" + std::to_string(row.first) +
                                    ": too few fields");
    return row.second[col];
}

}  // namespace

std::vector<ReceiverEntry> load_positions_csv(const std::string& path, ParseMode mode) {
    const CsvFile positions = read_csv(path);
    std::vector<bool> has_t;
    const auto pos_cols = resolve_header(positions, {"rx_id", "x_m", "y_m", "z_m"}, {"t_s"},
                                         mode, &has_t);

    std::vector<ReceiverEntry> receivers;
    std::unordered_map<std::string, std::size_t> by_id;
    for (const auto& row : positions.rows) {
        ReceiverEntry e;
        e.rx_id = field_at(positions, row, pos_cols[0]);
        e.position = {
            parse_number(field_at(positions, row, pos_cols[1]), path, row.first, pos_cols[1]),
            parse_number(field_at(positions, row, pos_cols[2]), path, row.first, pos_cols[2]),
            parse_number(field_at(positions, row, pos_cols[3]), path, row.first, pos_cols[3])};
        if (!has_t.empty() && has_t[0])
            e.t_s = parse_number(field_at(positions, row, pos_cols[4]), path, row.first,
                                 pos_cols[4]);
        e.paths.rx_id = e.rx_id;
        if (!by_id.emplace(e.rx_id, receivers.size()).second)
            throw std::invalid_argument(path + ":" + std::to_string(row.first) +
                                        ": duplicate rx_id '" + e.rx_id + "'");
        receivers.push_back(std::move(e));
    }
    return receivers;
}

Dataset load_dataset(const std::string& prefix, ParseMode mode) {
    const std::string positions_path = prefix + ".positions.csv";
    const std::string rays_path = prefix + ".rays.csv";

    std::vector<ReceiverEntry> receivers = load_positions_csv(positions_path, mode);
    std::unordered_map<std::string, std::size_t> by_id;
    for (std::size_t i = 0; i < receivers.size(); ++i) by_id.emplace(receivers[i].rx_id, i);

    const CsvFile rays = read_csv(rays_path);
    const auto ray_cols = resolve_header(
        rays,
        {"rx_id", "path_id", "power_dbm", "delay_ns", "dod_az_deg", "dod_el_deg",
         "doa_az_deg", "doa_el_deg"},
        {}, mode);
    for (const auto& row : rays.rows) {
        const std::string& rx_id = field_at(rays, row, ray_cols[0]);
        const auto it = by_id.find(rx_id);
        if (it == by_id.end())
            throw std::invalid_argument(rays_path + ":" + std::to_string(row.first) +
                                        ": rx_id '" + rx_id +
                                        "' not present in positions file");
        PathTuple t;
        t.power_dbm = parse_number(field_at(rays, row, ray_cols[2]), rays_path, row.first,
                                   ray_cols[2]);
        t.delay_s = parse_number(field_at(rays, row, ray_cols[3]), rays_path, row.first,
                                 ray_cols[3]) *
                    1e-9;
        t.dod_az_deg = parse_number(field_at(rays, row, ray_cols[4]), rays_path, row.first,
                                    ray_cols[4]);
        t.dod_el_deg = parse_number(field_at(rays, row, ray_cols[5]), rays_path, row.first,
                                    ray_cols[5]);
        t.doa_az_deg = parse_number(field_at(rays, row, ray_cols[6]), rays_path, row.first,
                                    ray_cols[6]);
        t.doa_el_deg = parse_number(field_at(rays, row, ray_cols[7]), rays_path, row.first,
                                    ray_cols[7]);
        receivers[it->second].paths.paths.push_back(t);
    }

    DatasetMetadata md;
    std::string label = std::filesystem::path(prefix).filename().string();
    const std::string meta_path = prefix + ".meta.json";
    if (std::ifstream meta_in{meta_path}; meta_in) {
        try {
            json j = json::parse(meta_in);
            if (j.contains("label")) label = j["label"].get<std::string>();
            if (j.contains("frequency_hz")) md.frequency_hz = j["frequency_hz"].get<double>();
            if (j.contains("tx_position")) {
                const auto& p = j["tx_position"];
                md.tx_position = Eigen::Vector3d(p[0].get<double>(), p[1].get<double>(),
                                                 p[2].get<double>());
            }
            if (j.contains("notes")) md.notes = j["notes"].get<std::string>();
        } catch (const json::exception& e) {
            throw std::invalid_argument(meta_path + ": " + e.what());
        }
    }

    return make_dataset(std::move(label), std::move(receivers), std::move(md));
}

// --------------------------------------------------------------- CSV out

namespace {

void write_positions_csv(const std::string& path,
                         const std::vector<const ReceiverEntry*>& receivers, bool with_t) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "rx_id,x_m,y_m,z_m" << (with_t ? ",t_s" : "") << "\n";
    for (const ReceiverEntry* r : receivers) {
        out << r->rx_id << ',' << format_g9(r->position.x()) << ','
            << format_g9(r->position.y()) << ',' << format_g9(r->position.z());
        if (with_t) out << ',' << format_g9(r->t_s.value_or(0.0));
        out << "\n";
    }
}

void write_rays_csv(const std::string& path,
                    const std::vector<const ReceiverEntry*>& receivers) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "rx_id,path_id,power_dbm,delay_ns,dod_az_deg,dod_el_deg,doa_az_deg,doa_el_deg\n";
    for (const ReceiverEntry* r : receivers) {
        for (std::size_t i = 0; i < r->paths.paths.size(); ++i) {
            const PathTuple& t = r->paths.paths[i];
            out << r->rx_id << ',' << i << ',' << format_g9(t.power_dbm) << ','
                << format_g9(t.delay_s * 1e9) << ',' << format_g9(t.dod_az_deg) << ','
                << format_g9(t.dod_el_deg) << ',' << format_g9(t.doa_az_deg) << ','
                << format_g9(t.doa_el_deg) << "\n";
        }
    }
}

void write_meta_json(const std::string& path, const std::string& label,
                     const DatasetMetadata& md) {
    json j;
    j["label"] = label;
    if (md.frequency_hz) j["frequency_hz"] = *md.frequency_hz;
    if (md.tx_position)
        j["tx_position"] =
            json::array({md.tx_position->x(), md.tx_position->y(), md.tx_position->z()});
    if (!md.notes.empty()) j["notes"] = md.notes;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

}  // namespace

void write_dataset(const Dataset& ds, const std::string& prefix) {
    std::vector<const ReceiverEntry*> receivers;
    receivers.reserve(ds.receivers.size());
    for (const ReceiverEntry& r : ds.receivers) receivers.push_back(&r);
    write_positions_csv(prefix + ".positions.csv", receivers, ds.is_trajectory());
    write_rays_csv(prefix + ".rays.csv", receivers);
    write_meta_json(prefix + ".meta.json", ds.label, ds.metadata);
}

void write_trace_dataset(const TraceResult& trace, const SceneSpec& scene,
                         const std::string& prefix, const std::string& label) {
    write_dataset(dataset_from_trace(trace, scene, label), prefix);
}

// ---------------------------------------------------------------- pairing

PairedDatasets pair_datasets(const Dataset& a, const Dataset& b) {
    PairedDatasets out;
    for (const ReceiverEntry& ra : a.receivers) {
        const ReceiverEntry* rb = b.find(ra.rx_id);
        if (!rb) {
            out.only_in_a.push_back(ra.rx_id);
            continue;
        }
        const double dist = (ra.position - rb->position).norm();
        if (dist > position_tolerance_m)
            throw std::invalid_argument(
                "rx_id '" + ra.rx_id + "' has mismatched positions between datasets (" +
                format_g9(dist) + " m apart); not the same receiver");
        PairedReceiver p;
        p.rx_id = ra.rx_id;
        p.position = ra.position;
        p.t_s = ra.t_s;
        p.a = &ra.paths;
        p.b = &rb->paths;
        out.pairs.push_back(std::move(p));
    }
    for (const ReceiverEntry& rb : b.receivers)
        if (!a.find(rb.rx_id)) out.only_in_b.push_back(rb.rx_id);
    return out;
}

// --------------------------------------------------------------- results

ResultSummary summarize_comparisons(std::span<const ComparisonResult* const> results) {
    ResultSummary s;
    s.count_total = results.size();
    std::array<ChannelStats, 10> acc{};
    for (const ComparisonResult* r : results) {
        switch (r->status) {
            case CompareStatus::Ok: ++s.count_ok; break;
            case CompareStatus::BothEmpty: ++s.count_both_empty; break;
            case CompareStatus::CoverageMismatch: ++s.count_coverage_mismatch; break;
        }
        if (r->status != CompareStatus::Ok) continue;
        for (std::size_t c = 0; c < all_channels.size(); ++c) {
            const double v = channel_value(*r, all_channels[c]);
            acc[c].mean += v;
            acc[c].max = std::max(acc[c].max, v);
        }
    }
    if (s.count_ok > 0) {
        for (ChannelStats& cs : acc) cs.mean /= static_cast<double>(s.count_ok);
        s.channels = acc;
    }
    return s;
}

ResultSummary summarize_comparisons(std::span<const ReceiverComparison> results) {
    std::vector<const ComparisonResult*> ptrs;
    ptrs.reserve(results.size());
    for (const ReceiverComparison& r : results) ptrs.push_back(&r.cmp);
    return summarize_comparisons(std::span<const ComparisonResult* const>(ptrs));
}

ResultSummary write_results(std::span<const ReceiverComparison> results,
                            const std::string& prefix) {
    const bool with_t = !results.empty() &&
                        std::all_of(results.begin(), results.end(),
                                    [](const ReceiverComparison& r) { return r.t_s.has_value(); });

    const std::string csv_path = prefix + ".results.csv";
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot write '" + csv_path + "'");
    out << "rx_id," << (with_t ? "t_s," : "")
        << "x_m,y_m,z_m,status,n_paths_a,n_paths_b,hrt,crt,hrt_dtau,hrt_dp,hrt_ddod_deg,"
           "hrt_ddoa_deg,crt_dtau,crt_dp,crt_ddod_deg,crt_ddoa_deg\n";
    for (const ReceiverComparison& r : results) {
        out << r.rx_id << ',';
        if (with_t) out << format_g9(*r.t_s) << ',';
        out << format_g9(r.position.x()) << ',' << format_g9(r.position.y()) << ','
            << format_g9(r.position.z()) << ',' << to_string(r.cmp.status) << ','
            << r.cmp.n_paths_a << ',' << r.cmp.n_paths_b;
        for (Channel c : all_channels) {
            out << ',';
            if (r.cmp.status == CompareStatus::Ok) out << format_g9(channel_value(r.cmp, c));
        }
        out << "\n";
    }
    out.close();

    const ResultSummary summary = summarize_comparisons(results);
    json j;
    j["counts"] = {{"ok", summary.count_ok},
                   {"both_empty", summary.count_both_empty},
                   {"coverage_mismatch", summary.count_coverage_mismatch},
                   {"total", summary.count_total}};
    json channels = json::object();
    for (std::size_t c = 0; c < all_channels.size(); ++c) {
        const char* name = channel_name(all_channels[c]);
        if (summary.channels) {
            channels[name] = {{"mean", (*summary.channels)[c].mean},
                              {"max", (*summary.channels)[c].max}};
        } else {
            channels[name] = {{"mean", nullptr}, {"max", nullptr}};
        }
    }
    j["channels"] = channels;

    const std::string json_path = prefix + ".summary.json";
    std::ofstream jout(json_path);
    if (!jout) throw std::runtime_error("cannot write '" + json_path + "'");
    jout << j.dump(2) << "\n";
    return summary;
}

}  // namespace rtdiff
