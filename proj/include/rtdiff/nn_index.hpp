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
#include <span>
#include <vector>

#include "rtdiff/metrics.hpp"

namespace rtdiff {

/// kd-tree over the 8-dimensional embedding of standardized tuples
/// (tau_bar, p_bar, DoD unit vector, DoA unit vector) that answers
/// nearest-neighbor queries under the configured assignment distance.
///
/// Candidate points are scored with the exact same pair arithmetic as the
/// exhaustive scan (feature_distances + assignment_distance), and subtree
/// lower bounds are slightly deflated before pruning, so the returned index
/// matches the exhaustive scan bit for bit, including the lowest-index
/// tie-break.
class TupleKdTree {
public:
    TupleKdTree(std::span<const StandardizedTuple> points, const MetricConfig& cfg);

    /// Index (into the construction span) of the nearest point to `query`.
    /// Ties in distance resolve to the lowest index.
    std::size_t nearest(const StandardizedTuple& query) const;

    std::size_t size() const { return points_.size(); }

private:
    static constexpr int dims = 8;
    static constexpr std::size_t leaf_size = 8;

    struct Node {
        std::array<double, dims> lo;
        std::array<double, dims> hi;
        std::size_t begin = 0;   // range into order_
        std::size_t end = 0;
        int left = -1;
        int right = -1;
        int split_dim = 0;
        bool leaf() const { return left < 0; }
    };

    struct DimCost {
        double scale = 0.0;   // weight applied to the per-dimension gap
        bool squared = false; // gap enters squared (direction components)
    };

    std::array<double, dims> embed(const StandardizedTuple& t) const;
    int build(std::size_t begin, std::size_t end);
    double box_lower_bound(const Node& node, const std::array<double, dims>& q) const;
    void search(int node_index, const std::array<double, dims>& q,
                const StandardizedTuple& query, double& best, std::size_t& best_idx) const;

    std::span<const StandardizedTuple> points_;
    MetricConfig cfg_;
    std::array<DimCost, dims> cost_;
    std::vector<std::array<double, dims>> coords_;  // embedding per point
    std::vector<std::size_t> order_;                // permutation into points_
    std::vector<Node> nodes_;
};

}  // namespace rtdiff
