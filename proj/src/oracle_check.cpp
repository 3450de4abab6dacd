/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "hats/oracle_check.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hats/baselines.hpp"
#include "hats/scene.hpp"
#include "hats/search.hpp"

namespace hats {

namespace {

constexpr double kCostTol = 1e-9;

void record(InvariantResult& r, bool ok, std::size_t instance, const std::string& detail)
{
    ++r.checked;
    if (ok)
        return;
    if (r.violations++ == 0) {
        std::ostringstream os;
        os << "instance " << instance << ": " << detail;
        r.first_failure = os.str();
    }
}

std::string costs(double got, double want)
{
    std::ostringstream os;
    os.precision(17);
    os << "cost " << got << " vs optimum " << want;
    return os.str();
}

// Visits every non-goal node with its children, depth first.
template <class Fn>
void for_each_edge(const DetectionProblem& p, const Psv& node, Fn&& fn)
{
    if (node.level() == p.dim())
        return;
    for (double s : p.alphabet().symbols()) {
        const Psv child = node.extended(s);
        fn(node, child);
        for_each_edge(p, child, fn);
    }
}

} // namespace

DetectionProblem random_problem(std::size_t m, std::uint64_t seed, std::uint64_t index)
{
    if (m == 0 || m % 2 != 0)
        throw Error(ErrorCode::InvalidConfig, "problem dimension must be a positive even number");
    RngStream rng(seed, index);
    const double snr = rng.uniform(0.0, 15.0);
    const Scene scene = sample_scene(m / 2, m / 2, snr, rng);
    const WidenedModel real = widen_complex(scene.complex.yc, scene.complex.hc);
    return preprocess(real.y, real.h, Alphabet::qpsk());
}

std::vector<InvariantResult> run_oracle_check(std::size_t m, std::size_t instances, std::uint64_t seed)
{
    InvariantResult astar_exact;
    astar_exact.name = "astar-zero matches brute-force ML cost";
    InvariantResult sd_exact;
    sd_exact.name = "sphere decoder matches brute-force ML cost";
    InvariantResult hats_exact;
    hats_exact.name = "hats(inf, zero heuristic) matches brute-force ML cost";
    InvariantResult hats_bounded;
    hats_bounded.name = "hats(m+2, zero heuristic) matches brute-force ML cost within its memory bound";
    InvariantResult constant_f;
    constant_f.name = "optimal f is constant along the shortest path";
    InvariantResult consistency;
    consistency.name = "exact heuristic is consistent";
    InvariantResult efficiency;
    efficiency.name = "astar with the exact heuristic expands at most m+1 nodes";
    InvariantResult distance;
    distance.name = "QR preprocessing preserves distances up to a constant";
    efficiency.allowed_violations = (instances + 499) / 500;

    const ZeroHeuristic zero;
    const ExactHeuristic exact;
    for (std::size_t i = 0; i < instances; ++i) {
        RngStream rng(seed, i);
        const double snr = rng.uniform(0.0, 15.0);
        const Scene scene = sample_scene(m / 2, m / 2, snr, rng);
        const WidenedModel real = widen_complex(scene.complex.yc, scene.complex.hc);
        const DetectionProblem p = preprocess(real.y, real.h, Alphabet::qpsk());

        const SearchOutcome ml = brute_force_ml(p);
        const double best = path_cost(p, *ml.estimate);
        auto exact_match = [&](InvariantResult& r, const SearchOutcome& o) {
            const double got = o.estimate ? path_cost(p, *o.estimate) : std::numeric_limits<double>::infinity();
            record(r, o.success && std::abs(got - best) <= kCostTol, i, costs(got, best));
        };
        exact_match(astar_exact, astar(p, zero));
        exact_match(sd_exact, sphere_decode(p));
        exact_match(hats_exact, hats(p, zero, kUnboundedMemory));
        {
            const std::size_t cap = m + 2;
            const SearchOutcome o = hats(p, zero, cap);
            exact_match(hats_bounded, o);
            if (o.stats.peak_active > cap)
                record(hats_bounded, false, i, "peak active " + std::to_string(o.stats.peak_active));
        }

        // f*(x^j) = g(x^m) for every j on the shortest path.
        bool constant = true;
        for (std::size_t j = 0; j <= m; ++j) {
            const Psv node = ml.estimate->prefix(j);
            const double f = path_cost(p, node) + optimal_heuristic_oracle(p, node);
            constant = constant && std::abs(f - best) <= kCostTol;
        }
        record(constant_f, constant, i, "f* deviates from g along the shortest path");

        bool consistent = true;
        for_each_edge(p, Psv{}, [&](const Psv& parent, const Psv& child) {
            const double lhs = optimal_heuristic_oracle(p, parent);
            const double rhs = branch_cost(p, child) + optimal_heuristic_oracle(p, child);
            consistent = consistent && lhs <= rhs + kCostTol;
        });
        record(consistency, consistent, i, "h*(parent) > b(child) + h*(child)");

        const SearchOutcome guided = astar(p, exact);
        record(efficiency, guided.stats.expanded <= m + 1, i,
               "expanded " + std::to_string(guided.stats.expanded) + " nodes");

        // |y - Hx|^2 = |z - Rx|^2 + const_offset for the transmitted x.
        const Vector x = transmitted_symbols(scene);
        const Vector hx = mat_vec(real.h, x);
        double direct = 0.0;
        for (std::size_t r = 0; r < hx.size(); ++r)
            direct += (real.y[r] - hx[r]) * (real.y[r] - hx[r]);
        const double via_tree = path_cost(p, psv_from_natural(x)) + p.const_offset();
        record(distance, std::abs(direct - via_tree) <= 1e-9 * squared_norm(real.y), i,
               costs(via_tree, direct));
    }
    return {astar_exact, sd_exact, hats_exact, hats_bounded, constant_f, consistency, efficiency, distance};
}

} // namespace hats
