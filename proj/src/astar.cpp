/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <algorithm>
#include <queue>
#include <vector>

#include "hats/search.hpp"
#include "search_detail.hpp"

namespace hats {

namespace {

struct AstarNode {
    std::uint32_t parent;
    std::uint32_t symbol;
    std::uint32_t depth;
    double g;
    double f;
};

struct QueueEntry {
    double f;
    std::uint32_t depth;
    std::uint64_t seq;
    std::uint32_t id;
};

// priority_queue pops the largest; "largest" here is the best node.
struct WorseThan {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const
    {
        if (a.f != b.f) return a.f > b.f;
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.seq > b.seq;
    }
};

constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

} // namespace

SearchOutcome astar(const DetectionProblem& p, const HeuristicProvider& h, SearchOptions opts)
{
    const std::size_t m = p.dim();
    const auto layers = h.layer_sizes();
    SearchOutcome out;

    std::vector<AstarNode> nodes;
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, WorseThan> active;
    std::uint64_t seq = 0;

    const double root_h = h.evaluate(p, Psv{});
    nodes.push_back({kNoParent, 0, 0, 0.0, root_h});
    active.push({root_h, 0, seq++, 0});

    auto parent_of = [&](std::uint32_t id) { return nodes[id].parent; };
    auto symbol_of = [&](std::uint32_t id) { return nodes[id].symbol; };

    while (true) {
        out.stats.peak_active = std::max<std::uint64_t>(out.stats.peak_active, active.size());
        if (active.empty())
            break;

        const QueueEntry top = active.top();
        active.pop();
        const AstarNode node = nodes[top.id];
        const Psv psv = detail::psv_of(top.id, kNoParent, p.alphabet(), parent_of, symbol_of);

        if (node.depth == m) {
            out.estimate = psv;
            out.success = true;
            break;
        }

        const auto costs = detail::child_branch_costs(p, psv);
        for (std::uint32_t s : detail::successor_order(costs, opts.order)) {
            const std::uint32_t depth = node.depth + 1;
            const double g = node.g + costs[s];
            const double hv = depth == m ? 0.0 : h.evaluate(p, psv.extended(p.alphabet()[s]));
            const double f = std::max(node.f, g + hv);
            const auto id = static_cast<std::uint32_t>(nodes.size());
            nodes.push_back({top.id, s, depth, g, f});
            active.push({f, depth, seq++, id});
            ++out.stats.visited;
            out.stats.flops += estimate_visit_cost(depth, layers);
        }
        ++out.stats.expanded;
    }
    out.stats.peak_resident = nodes.size();
    return out;
}

} // namespace hats
