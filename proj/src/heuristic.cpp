/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "hats/search.hpp"

namespace hats {

double ExactHeuristic::evaluate(const DetectionProblem& p, const Psv& psv) const
{
    return optimal_heuristic_oracle(p, psv);
}

std::uint64_t estimate_visit_cost(std::size_t level, std::span<const std::size_t> layer_sizes)
{
    std::uint64_t cost = level;
    for (std::size_t l = 1; l < layer_sizes.size(); ++l)
        cost += static_cast<std::uint64_t>(layer_sizes[l]) * layer_sizes[l - 1] + layer_sizes[l];
    return cost;
}

} // namespace hats
