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
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rtdiff/path_data.hpp"
#include "rtdiff/tracer.hpp"

namespace rtdiff {

/// Strict mode rejects unknown extra CSV columns; lenient ignores them with
/// a warning on stderr.
enum class ParseMode { Strict, Lenient };

struct DatasetMetadata {
    std::optional<double> frequency_hz;
    std::optional<Eigen::Vector3d> tx_position;
    std::string notes;
};

struct ReceiverEntry {
    std::string rx_id;
    Eigen::Vector3d position{0.0, 0.0, 0.0};
    std::optional<double> t_s;
    PathSet paths;
};

/// One simulation's worth of receivers and their path sets, in positions
/// file order. rx_ids are unique; every path set is validated on load.
struct Dataset {
    std::string label;
    DatasetMetadata metadata;
    std::vector<ReceiverEntry> receivers;

    const ReceiverEntry* find(const std::string& rx_id) const;
    bool is_trajectory() const;  ///< every receiver carries a timestamp

private:
    friend Dataset make_dataset(std::string label, std::vector<ReceiverEntry> receivers,
                                DatasetMetadata metadata);
    std::unordered_map<std::string, std::size_t> index_;
};

/// Builds a Dataset, validating uniqueness of rx_ids and every path set.
Dataset make_dataset(std::string label, std::vector<ReceiverEntry> receivers,
                     DatasetMetadata metadata = {});

/// Converts a trace into a Dataset (drops provenance, keeps tuples).
Dataset dataset_from_trace(const TraceResult& trace, const SceneSpec& scene,
                           std::string label);

/// A dataset on disk is the file pair `<prefix>.positions.csv` +
/// `<prefix>.rays.csv`, with an optional `<prefix>.meta.json`.
/// Positions header: rx_id,x_m,y_m,z_m[,t_s]
/// Rays header: rx_id,path_id,power_dbm,delay_ns,dod_az_deg,dod_el_deg,doa_az_deg,doa_el_deg
/// Receivers present in positions but absent from the rays file get empty
/// path sets. Numbers are written with up to 9 significant digits.
Dataset load_dataset(const std::string& prefix, ParseMode mode = ParseMode::Strict);
void write_dataset(const Dataset& ds, const std::string& prefix);

/// Reads a positions file alone into receiver entries with empty path sets.
std::vector<ReceiverEntry> load_positions_csv(const std::string& path,
                                              ParseMode mode = ParseMode::Strict);

/// Trace output written as dataset files. Receivers flagged inside geometry
/// appear in the positions file but contribute no rays rows.
void write_trace_dataset(const TraceResult& trace, const SceneSpec& scene,
                         const std::string& prefix, const std::string& label);

struct PairedReceiver {
    std::string rx_id;
    Eigen::Vector3d position{0.0, 0.0, 0.0};
    std::optional<double> t_s;
    const PathSet* a = nullptr;
    const PathSet* b = nullptr;
};

/// Inner join on rx_id. Receivers present in only one dataset are reported,
/// never silently dropped. Positions of a shared rx_id must agree within
/// position_tolerance_m or the pairing throws.
struct PairedDatasets {
    std::vector<PairedReceiver> pairs;
    std::vector<std::string> only_in_a;
    std::vector<std::string> only_in_b;
};

PairedDatasets pair_datasets(const Dataset& a, const Dataset& b);

/// Per-receiver comparison with its location, ready for reporting.
struct ReceiverComparison {
    std::string rx_id;
    Eigen::Vector3d position{0.0, 0.0, 0.0};
    std::optional<double> t_s;
    ComparisonResult cmp;
};

struct ChannelStats {
    double mean = 0.0;
    double max = 0.0;
};

/// Counts by status plus per-channel mean/max over status=ok receivers;
/// `channels` is absent when nothing is ok.
struct ResultSummary {
    std::size_t count_ok = 0;
    std::size_t count_both_empty = 0;
    std::size_t count_coverage_mismatch = 0;
    std::size_t count_total = 0;
    std::optional<std::array<ChannelStats, 10>> channels;  // indexed like all_channels
};

ResultSummary summarize_comparisons(std::span<const ComparisonResult* const> results);
ResultSummary summarize_comparisons(std::span<const ReceiverComparison> results);

/// Writes `<prefix>.results.csv` (one row per receiver, channels empty for
/// non-ok statuses) and `<prefix>.summary.json`. Returns the summary.
ResultSummary write_results(std::span<const ReceiverComparison> results,
                            const std::string& prefix);

/// %.9g formatting used by every rtdiff file writer.
std::string format_g9(double v);

}  // namespace rtdiff
