/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <limits>

#include "hats/search.hpp"

namespace hats {

SearchOutcome brute_force_ml(const DetectionProblem& p)
{
    SearchOutcome out;
    double best = std::numeric_limits<double>::infinity();
    // Lexicographic enumeration plus a strict comparison keeps the smallest
    // symbol sequence among ties.
    for (const Psv& goal : enumerate_goals(p)) {
        ++out.stats.visited;
        const double g = path_cost(p, goal);
        if (g < best) {
            best = g;
            out.estimate = goal;
        }
    }
    out.success = out.estimate.has_value();
    return out;
}

} // namespace hats
