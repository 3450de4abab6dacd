/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

// Helpers shared by the tree searches. Not part of the public interface.

#ifndef HATS_SEARCH_DETAIL_HPP
#define HATS_SEARCH_DETAIL_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "hats/search.hpp"

namespace hats::detail {

// Branch cost of every child of `node` (a level-k PSV), indexed by alphabet position.
inline std::vector<double> child_branch_costs(const DetectionProblem& p, const Psv& node)
{
    const std::size_t level = node.level() + 1;
    const double partial = p.level_residual(level, node);
    const double diag = p.r(level, level);
    const auto& symbols = p.alphabet().symbols();
    std::vector<double> out(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        const double e = partial - diag * symbols[i];
        out[i] = e * e;
    }
    return out;
}

// Alphabet indices in generation order. Stable, so equal costs keep alphabet order.
inline std::vector<std::uint32_t> successor_order(const std::vector<double>& costs, SuccessorOrder order)
{
    std::vector<std::uint32_t> idx(costs.size());
    std::iota(idx.begin(), idx.end(), 0u);
    if (order == SuccessorOrder::BranchCost)
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::uint32_t a, std::uint32_t b) { return costs[a] < costs[b]; });
    return idx;
}

// Rebuilds the PSV of a node by walking parent links. `parent_of(id)` and
// `symbol_of(id)` read the caller's node arena.
template <class ParentOf, class SymbolOf>
Psv psv_of(std::uint32_t id, std::uint32_t none, const Alphabet& alphabet, ParentOf parent_of,
           SymbolOf symbol_of)
{
    std::vector<double> level_order; // x_1 last, gathered from the deepest up
    while (parent_of(id) != none) {
        level_order.push_back(alphabet[symbol_of(id)]);
        id = parent_of(id);
    }
    return Psv(std::move(level_order));
}

} // namespace hats::detail

#endif
