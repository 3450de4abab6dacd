/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "hats/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace hats {

Psv mmse_detect(std::span<const double> y, const Matrix& h, const MmseConfig& cfg, const Alphabet& alphabet)
{
    if (!(cfg.sigma2 > 0.0) || !std::isfinite(cfg.sigma2))
        throw Error(ErrorCode::InvalidConfig, "MMSE noise variance must be finite and positive");
    const Vector u = solve_regularized(h, y, cfg.sigma2);
    return psv_from_natural(quantize(alphabet, u));
}

Psv babai_point(const DetectionProblem& p)
{
    Psv psv;
    for (std::size_t k = 1; k <= p.dim(); ++k) {
        const double partial = p.level_residual(k, psv);
        psv = psv.extended(p.alphabet().nearest(partial / p.r(k, k)));
    }
    return psv;
}

namespace {

class SphereDecoder {
public:
    explicit SphereDecoder(const DetectionProblem& p) : p_(p), m_(p.dim()), x_(p.dim(), 0.0) {}

    SearchOutcome run()
    {
        const Psv start = babai_point(p_);
        best_ = std::vector<double>(m_);
        for (std::size_t j = 1; j <= m_; ++j)
            best_[j - 1] = start.x(j);
        radius2_ = path_cost(p_, start);
        descend(1, 0.0);

        std::vector<double> deepest_first(best_.rbegin(), best_.rend());
        out_.estimate = Psv(std::move(deepest_first));
        out_.success = true;
        out_.stats.peak_resident = m_ + 1;
        return out_;
    }

private:
    // Decides level k given x_1..x_{k-1} with cumulative cost g.
    void descend(std::size_t k, double g)
    {
        const auto& symbols = p_.alphabet().symbols();
        double partial = p_.z(k);
        for (std::size_t j = 1; j < k; ++j)
            partial -= p_.r(k, j) * x_[j - 1];
        const double diag = p_.r(k, k);

        std::vector<double> costs(symbols.size());
        for (std::size_t i = 0; i < symbols.size(); ++i) {
            const double e = partial - diag * symbols[i];
            costs[i] = e * e;
        }
        std::vector<std::size_t> order(symbols.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return costs[a] < costs[b]; });

        out_.stats.visited += symbols.size();
        ++out_.stats.expanded;

        for (std::size_t i : order) {
            const double gc = g + costs[i];
            if (gc >= radius2_)
                break; // later children cost at least as much
            x_[k - 1] = symbols[i];
            if (k == m_) {
                radius2_ = gc;
                best_ = x_;
            } else {
                descend(k + 1, gc);
            }
        }
    }

    const DetectionProblem& p_;
    std::size_t m_;
    std::vector<double> x_;    // level order: x_[j-1] = x_j
    std::vector<double> best_; // level order
    double radius2_ = 0.0;
    SearchOutcome out_;
};

} // namespace

SearchOutcome sphere_decode(const DetectionProblem& p) { return SphereDecoder(p).run(); }

} // namespace hats
