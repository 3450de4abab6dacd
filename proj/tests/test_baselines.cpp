/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <doctest.h>

#include <cmath>

#include "hats/baselines.hpp"
#include "hats/error.hpp"
#include "hats/oracle_check.hpp"
#include "hats/rng.hpp"

using namespace hats;

namespace {

// (H^T H + s I)^{-1} H^T y by Gauss-Jordan, independent of the QR path.
Vector normal_equations(const Matrix& h, const Vector& y, double s)
{
    const std::size_t n = h.cols();
    Matrix a = mat_mul(h.transposed(), h);
    Vector b = mat_t_vec(h, y);
    for (std::size_t i = 0; i < n; ++i)
        a(i, i) += s;
    for (std::size_t c = 0; c < n; ++c) {
        const double d = a(c, c);
        for (std::size_t k = 0; k < n; ++k)
            a(c, k) /= d;
        b[c] /= d;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c)
                continue;
            const double f = a(r, c);
            for (std::size_t k = 0; k < n; ++k)
                a(r, k) -= f * a(c, k);
            b[r] -= f * b[c];
        }
    }
    return b;
}

} // namespace

TEST_CASE("mmse_detect quantizes the regularized solution")
{
    for (std::uint64_t s = 0; s < 20; ++s) {
        RngStream rng(5, s);
        Matrix h(6, 6);
        for (auto& v : h.data())
            v = rng.normal();
        const Vector y = sample_gaussian(rng, 6);
        const MmseConfig cfg{0.7};
        const Psv got = mmse_detect(y, h, cfg, Alphabet::qpsk());
        CHECK(natural_from_psv(got) == quantize(Alphabet::qpsk(), normal_equations(h, y, 0.7)));
    }
}

TEST_CASE("mmse_detect validates its noise variance")
{
    const Matrix h = Matrix::identity(2);
    CHECK_THROWS_AS(mmse_detect(Vector{1, 1}, h, MmseConfig{0.0}, Alphabet::qpsk()), Error);
    CHECK_THROWS_AS(mmse_detect(Vector{1, 1}, h, MmseConfig{-1.0}, Alphabet::qpsk()), Error);
    CHECK(natural_from_psv(mmse_detect(Vector{3, -0.1}, h, MmseConfig{1.0}, Alphabet::qpsk())) == Vector{1, -1});
}

TEST_CASE("babai_point rounds level by level")
{
    for (std::uint64_t i = 0; i < 20; ++i) {
        const auto p = random_problem(6, 2, i);
        const Psv b = babai_point(p);
        REQUIRE(b.level() == 6);
        Psv walk;
        for (std::size_t k = 1; k <= 6; ++k) {
            double r = p.z(k);
            for (std::size_t j = 1; j < k; ++j)
                r -= p.r(k, j) * walk.x(j);
            walk = walk.extended(p.alphabet().nearest(r / p.r(k, k)));
        }
        CHECK(b == walk);
    }
}

TEST_CASE("sphere_decode is exact and no worse than Babai")
{
    for (std::uint64_t i = 0; i < 200; ++i) {
        const auto p = random_problem(8, 3, i);
        const auto sd = sphere_decode(p);
        REQUIRE(sd.success);
        const double best = path_cost(p, *brute_force_ml(p).estimate);
        CHECK(std::abs(path_cost(p, *sd.estimate) - best) <= 1e-9);
        CHECK(path_cost(p, *sd.estimate) <= path_cost(p, babai_point(p)) + 1e-12);
        CHECK(sd.stats.visited == 2 * sd.stats.expanded);
    }
}

TEST_CASE("sphere_decode stops at the root when Babai is already exact")
{
    const Matrix r(3, 3, {2, 0, 0, 0, 2, 0, 0, 0, 2});
    const DetectionProblem p(Vector{2, -2, 2}, r, Alphabet::qpsk());
    const auto sd = sphere_decode(p);
    REQUIRE(sd.success);
    CHECK(natural_from_psv(*sd.estimate) == Vector{1, -1, 1});
    CHECK(path_cost(p, *sd.estimate) == 0.0);
    CHECK(sd.stats.expanded == 1);
    CHECK(sd.stats.visited == 2);
}
