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

#include "rtdiff/nn_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rtdiff {

namespace {

// Relative deflation applied to subtree lower bounds before pruning. The
// bound is mathematically valid; the deflation absorbs the few-ulp rounding
// difference between the bound's arithmetic and the exact pair formula, so
// an exactly tied candidate can never be pruned away.
constexpr double lb_slack = 1e-12;

}  // namespace

TupleKdTree::TupleKdTree(std::span<const StandardizedTuple> points, const MetricConfig& cfg)
    : points_(points), cfg_(cfg) {
    if (points_.empty())
        throw std::invalid_argument("kd-tree over an empty point set");

    // Per-dimension gap costs mirror assignment_distance: |gap| terms for
    // the standardized delay/power, squared-gap/2 terms for the direction
    // components (1 - u.v == |u - v|^2 / 2 for unit vectors).
    const bool joint = cfg_.assignment_mode == AssignmentMode::Joint;
    auto abs_cost = [&](double w) { return DimCost{w, false}; };
    auto sq_cost = [&](double w) { return DimCost{w / 2.0, true}; };
    const double wt = joint ? cfg_.w_tau : (cfg_.assignment_mode == AssignmentMode::DelayOnly ? 1.0 : 0.0);
    const double wp = joint ? cfg_.w_p : (cfg_.assignment_mode == AssignmentMode::PowerOnly ? 1.0 : 0.0);
    const double wd = joint ? cfg_.w_dod : (cfg_.assignment_mode == AssignmentMode::DodOnly ? 1.0 : 0.0);
    const double wa = joint ? cfg_.w_doa : (cfg_.assignment_mode == AssignmentMode::DoaOnly ? 1.0 : 0.0);
    cost_ = {abs_cost(wt), abs_cost(wp),
             sq_cost(wd), sq_cost(wd), sq_cost(wd),
             sq_cost(wa), sq_cost(wa), sq_cost(wa)};

    coords_.resize(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) coords_[i] = embed(points_[i]);
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    nodes_.reserve(2 * points_.size() / leaf_size + 2);
    build(0, points_.size());
}

std::array<double, TupleKdTree::dims> TupleKdTree::embed(const StandardizedTuple& t) const {
    return {t.tau_bar, t.p_bar,
            t.dod_unit.x(), t.dod_unit.y(), t.dod_unit.z(),
            t.doa_unit.x(), t.doa_unit.y(), t.doa_unit.z()};
}

int TupleKdTree::build(std::size_t begin, std::size_t end) {
    const int index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    {
        Node& node = nodes_.back();
        node.begin = begin;
        node.end = end;
        node.lo.fill(std::numeric_limits<double>::infinity());
        node.hi.fill(-std::numeric_limits<double>::infinity());
        for (std::size_t i = begin; i < end; ++i) {
            const auto& c = coords_[order_[i]];
            for (int d = 0; d < dims; ++d) {
                node.lo[d] = std::min(node.lo[d], c[d]);
                node.hi[d] = std::max(node.hi[d], c[d]);
            }
        }
    }

    if (end - begin <= leaf_size) return index;

    // Split the widest dimension that carries any cost; a box with no
    // extent there stays a leaf.
    int split_dim = -1;
    double widest = 0.0;
    for (int d = 0; d < dims; ++d) {
        if (cost_[d].scale == 0.0) continue;
        const double extent = nodes_[index].hi[d] - nodes_[index].lo[d];
        if (extent > widest) {
            widest = extent;
            split_dim = d;
        }
    }
    if (split_dim < 0) return index;

    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::size_t a, std::size_t b) {
                         return coords_[a][split_dim] < coords_[b][split_dim];
                     });

    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[index].split_dim = split_dim;
    nodes_[index].left = left;
    nodes_[index].right = right;
    return index;
}

double TupleKdTree::box_lower_bound(const Node& node, const std::array<double, dims>& q) const {
    double lb = 0.0;
    for (int d = 0; d < dims; ++d) {
        if (cost_[d].scale == 0.0) continue;
        double gap = 0.0;
        if (q[d] < node.lo[d]) gap = node.lo[d] - q[d];
        else if (q[d] > node.hi[d]) gap = q[d] - node.hi[d];
        else continue;
        lb += cost_[d].scale * (cost_[d].squared ? gap * gap : gap);
    }
    return lb;
}

void TupleKdTree::search(int node_index, const std::array<double, dims>& q,
                         const StandardizedTuple& query, double& best,
                         std::size_t& best_idx) const {
    const Node& node = nodes_[node_index];
    if (node.leaf()) {
        for (std::size_t i = node.begin; i < node.end; ++i) {
            const std::size_t idx = order_[i];
            const double d = assignment_distance(feature_distances(query, points_[idx]), cfg_);
            if (d < best || (d == best && idx < best_idx)) {
                best = d;
                best_idx = idx;
            }
        }
        return;
    }

    const Node& lnode = nodes_[node.left];
    const Node& rnode = nodes_[node.right];
    double lb_l = box_lower_bound(lnode, q);
    double lb_r = box_lower_bound(rnode, q);
    int first = node.left, second = node.right;
    if (lb_r < lb_l) {
        std::swap(first, second);
        std::swap(lb_l, lb_r);
    }
    if (lb_l - lb_l * lb_slack <= best) search(first, q, query, best, best_idx);
    if (lb_r - lb_r * lb_slack <= best) search(second, q, query, best, best_idx);
}

std::size_t TupleKdTree::nearest(const StandardizedTuple& query) const {
    const auto q = embed(query);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = points_.size();
    search(0, q, query, best, best_idx);
    return best_idx;
}

}  // namespace rtdiff
