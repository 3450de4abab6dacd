/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "hats/error.hpp"
#include "hats/lattice.hpp"
#include "hats/oracle_check.hpp"
#include "hats/rng.hpp"

using namespace hats;

namespace {

// ||y - H x||^2 computed directly in the natural coordinates.
double direct_distance(const Vector& y, const Matrix& h, const Vector& x)
{
    const Vector hx = mat_vec(h, x);
    double s = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
        s += (y[i] - hx[i]) * (y[i] - hx[i]);
    return s;
}

struct RealInstance {
    Vector y;
    Matrix h;
};

RealInstance random_instance(std::size_t rows, std::size_t m, std::uint64_t stream)
{
    RngStream rng(11, stream);
    RealInstance r{sample_gaussian(rng, rows), Matrix(rows, m)};
    for (auto& v : r.h.data())
        v = rng.normal();
    return r;
}

Psv goal_from_index(std::size_t m, std::uint64_t bits)
{
    Vector x(m);
    for (std::size_t i = 0; i < m; ++i)
        x[i] = (bits >> i) & 1 ? 1.0 : -1.0;
    return psv_from_natural(x);
}

} // namespace

TEST_CASE("Alphabet validation and lookups")
{
    CHECK_THROWS_AS(Alphabet({}), Error);
    CHECK_THROWS_AS(Alphabet({1.0, 1.0}), Error);
    CHECK_THROWS_AS(Alphabet({2.0, 1.0}), Error);
    CHECK_THROWS_AS(Alphabet({0.0, std::numeric_limits<double>::infinity()}), Error);
    const Alphabet a({-3.0, -1.0, 1.0, 3.0});
    CHECK(a.contains(1.0));
    CHECK_FALSE(a.contains(2.0));
    CHECK(a.index_of(3.0) == 3);
    CHECK_THROWS_AS(a.index_of(0.5), Error);
    CHECK(a.nearest(0.0) == -1.0);
    CHECK(a.nearest(1.9) == 1.0);
    CHECK(a.nearest(-10.0) == -3.0);
    CHECK(Alphabet::qpsk().symbols() == std::vector<double>{-1.0, 1.0});
}

TEST_CASE("widen_complex builds the real-valued equivalent model")
{
    ComplexMatrix hc(2, 2);
    hc(0, 0) = {1, 2};
    hc(0, 1) = {-1, 0.5};
    hc(1, 0) = {0, -1};
    hc(1, 1) = {3, 1};
    const ComplexVector xc{{1, -1}, {-1, 1}};
    const ComplexVector yc = complex_mat_vec(hc, xc);
    const auto real = widen_complex(yc, hc);
    REQUIRE(real.h.rows() == 4);
    REQUIRE(real.h.cols() == 4);
    const Vector hx = mat_vec(real.h, widen_vector(xc));
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(hx[i] == doctest::Approx(real.y[i]));
    CHECK(real.h(0, 2) == -2.0);
    CHECK(real.h(2, 0) == 2.0);
}

TEST_CASE("Psv ordering helpers")
{
    const Psv root;
    CHECK(root.is_root());
    const Psv a = root.extended(1.0).extended(-1.0).extended(1.0);
    CHECK(a.level() == 3);
    CHECK(a.x(1) == 1.0);
    CHECK(a.x(2) == -1.0);
    CHECK(a.x(3) == 1.0);
    CHECK(a.prefix(2) == root.extended(1.0).extended(-1.0));
    CHECK(a.prefix(0) == root);
    const Vector natural{-1.0, 1.0, 1.0};
    CHECK(natural_from_psv(psv_from_natural(natural)) == natural);
}

TEST_CASE("preprocess preserves distances up to the constant offset")
{
    for (std::uint64_t s = 0; s < 30; ++s) {
        const std::size_t m = 2 + 2 * (s % 4);
        const auto inst = random_instance(m + s % 3, m, s);
        const auto p = preprocess(inst.y, inst.h, Alphabet::qpsk());
        CHECK(p.dim() == m);
        for (std::uint64_t bits = 0; bits < (1u << m); bits += 1 + bits / 3) {
            const Psv goal = goal_from_index(m, bits);
            const double lhs = direct_distance(inst.y, inst.h, natural_from_psv(goal));
            const double rhs = path_cost(p, goal) + p.const_offset();
            CHECK(std::abs(lhs - rhs) <= 1e-9 * (1.0 + squared_norm(inst.y)));
        }
    }
}

TEST_CASE("preprocess rejects mismatched and deficient inputs")
{
    const Matrix h(3, 2, {1, 0, 0, 1, 0, 0});
    CHECK_THROWS_AS(preprocess(Vector{1, 2}, h, Alphabet::qpsk()), Error);
    const Matrix wide(2, 3);
    CHECK_THROWS_AS(preprocess(Vector{1, 2}, wide, Alphabet::qpsk()), Error);
    const Matrix dup(2, 2, {1, 1, 1, 1});
    CHECK_THROWS_AS(preprocess(Vector{1, 2}, dup, Alphabet::qpsk()), Error);
}

TEST_CASE("branch and path costs on a hand-made triangular system")
{
    // Natural R = [[2, 1], [0, 1]], z = [1, 3]. Level 1 is natural index 1.
    const Matrix r(2, 2, {2, 1, 0, 1});
    const DetectionProblem p(Vector{1.0, 3.0}, r, Alphabet::qpsk());
    CHECK(p.z(1) == 3.0);
    CHECK(p.z(2) == 1.0);
    CHECK(p.r(1, 1) == 1.0);
    CHECK(p.r(2, 1) == 1.0);
    CHECK(p.r(2, 2) == 2.0);
    const Psv x1 = Psv().extended(1.0);
    CHECK(branch_cost(p, x1) == doctest::Approx(4.0));
    const Psv x2 = x1.extended(-1.0);
    CHECK(branch_cost(p, x2) == doctest::Approx(4.0)); // (1 - (1*1 + 2*-1))^2
    CHECK(path_cost(p, x2) == doctest::Approx(8.0));
    CHECK(path_cost(p, Psv()) == 0.0);
    CHECK_THROWS_AS(branch_cost(p, Psv()), Error);
    CHECK_THROWS_AS(branch_cost(p, x2.extended(1.0)), Error);
    CHECK(remaining_cost(p, x1, x2) == doctest::Approx(4.0));
    CHECK_THROWS_AS(remaining_cost(p, x1, Psv().extended(-1.0).extended(1.0)), Error);
    CHECK_THROWS_AS(remaining_cost(p, x1, x1), Error);
}

TEST_CASE("optimal_heuristic_oracle equals the minimum over enumerated completions")
{
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto p = random_problem(6, 5, s);
        std::vector<Psv> goals(enumerate_goals(p).begin(), enumerate_goals(p).end());
        CHECK(goals.size() == 64);
        CHECK(std::set<Psv>(goals.begin(), goals.end()).size() == 64);
        for (const Psv& node : {Psv(), goals[13].prefix(2), goals[40].prefix(5), goals[7]}) {
            double best = std::numeric_limits<double>::infinity();
            for (const Psv& g : goals)
                if (g.prefix(node.level()) == node)
                    best = std::min(best, remaining_cost(p, node, g));
            CHECK(optimal_heuristic_oracle(p, node) == doctest::Approx(best).epsilon(1e-12));
        }
        CHECK(optimal_heuristic_oracle(p, goals[3]) == 0.0);
    }
}

TEST_CASE("oracle and enumeration guards")
{
    const std::size_t m = 22;
    const DetectionProblem p(Vector(m, 0.0), Matrix::identity(m), Alphabet::qpsk());
    try {
        optimal_heuristic_oracle(p, Psv());
        FAIL("expected TooLargeToEnumerate");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooLargeToEnumerate);
    }
    CHECK_NOTHROW(optimal_heuristic_oracle(p, Psv(std::vector<double>(2, 1.0))));
    CHECK(power_saturating(2, 70) == std::numeric_limits<std::uint64_t>::max());
    CHECK(power_saturating(4, 3) == 64);
}

TEST_CASE("quantize rounds onto the alphabet")
{
    const Alphabet a = Alphabet::qpsk();
    CHECK(quantize(a, Vector{0.3, -2.0, 0.0}) == Vector{1.0, -1.0, -1.0});
    const DetectionProblem p(Vector{0, 0}, Matrix::identity(2), a);
    CHECK(quantize(p, Vector{0.2, -0.2}) == psv_from_natural(Vector{1.0, -1.0}));
}
