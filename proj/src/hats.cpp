/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <algorithm>
#include <limits>

#include "hats/search.hpp"
#include "search_detail.hpp"

namespace hats {

SearchOutcome hats(const DetectionProblem& p, const HeuristicProvider& h, std::size_t capacity,
                   SearchOptions opts)
{
    const std::size_t m = p.dim();
    if (capacity != kUnboundedMemory && capacity < m + 1)
        throw Error(ErrorCode::CapacityTooSmall, "capacity " + std::to_string(capacity) +
                                                     " cannot hold a root-to-goal path of " +
                                                     std::to_string(m + 1) + " nodes");
    const auto layers = h.layer_sizes();
    const Alphabet& alphabet = p.alphabet();
    SearchOutcome out;

    HatsTree tree(alphabet.size(), capacity);
    tree.add_root(0.0, h.evaluate(p, Psv{}));

    auto parent_of = [&](HatsTree::NodeId id) { return tree.node(id).parent; };
    auto symbol_of = [&](HatsTree::NodeId id) { return tree.node(id).symbol; };
    auto note_peaks = [&] {
        out.stats.peak_active = std::max<std::uint64_t>(out.stats.peak_active, tree.active_size());
        out.stats.peak_resident = std::max<std::uint64_t>(out.stats.peak_resident, tree.resident());
    };
    note_peaks();

    while (true) {
        const HatsTree::NodeId x = tree.best();
        if (x == HatsTree::kNone)
            return out;

        const Psv psv = detail::psv_of(x, HatsTree::kNone, alphabet, parent_of, symbol_of);
        if (tree.node(x).depth == m) {
            out.estimate = psv;
            out.success = true;
            return out;
        }

        if (tree.node(x).child_branch.empty()) {
            HatsTree::Node& n = tree.node(x);
            n.child_branch = detail::child_branch_costs(p, psv);
            // Only untouched successor lists are reordered.
            if (n.ungenerated.size() == alphabet.size() && n.generated.empty() && n.forgotten.empty())
                n.ungenerated = detail::successor_order(n.child_branch, opts.order);
        }

        const HatsTree::Node& xn = tree.node(x);
        std::uint32_t symbol;
        bool fresh;
        double recovered_f = 0.0;
        if (!xn.ungenerated.empty()) {
            symbol = xn.ungenerated.front();
            fresh = true;
        } else if (!xn.forgotten.empty()) {
            auto best = std::min_element(xn.forgotten.begin(), xn.forgotten.end(),
                                         [](const auto& a, const auto& b) { return a.f < b.f; });
            symbol = best->symbol;
            recovered_f = best->f;
            fresh = false;
        } else {
            // Everything already resident; nothing left to expand here.
            tree.deactivate(x);
            continue;
        }

        const std::uint32_t depth = xn.depth + 1;
        const bool goal = depth == m;
        const double g = xn.g + xn.child_branch[symbol];
        double f;
        if (fresh) {
            if (!goal && depth == m) { // unreachable on the perfect |A|-ary tree
                f = std::numeric_limits<double>::infinity();
                ++out.stats.dead_ends;
            } else {
                const double hv = goal ? 0.0 : h.evaluate(p, psv.extended(alphabet[symbol]));
                f = std::max(xn.f, g + hv);
            }
        } else {
            f = recovered_f;
        }

        const HatsTree::NodeId child = tree.add_child(x, symbol, g, f);
        ++out.stats.visited;
        out.stats.flops += estimate_visit_cost(depth, layers);

        tree.try_adjust(x);
        tree.try_make_space(x);
        tree.activate(child);
        if (tree.all_in_memory(x)) {
            tree.deactivate(x);
            ++out.stats.expanded;
        }
        note_peaks();
    }
}

} // namespace hats
