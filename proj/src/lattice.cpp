/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "hats/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hats {

Alphabet::Alphabet(std::vector<double> symbols) : symbols_(std::move(symbols))
{
    if (symbols_.empty())
        throw Error(ErrorCode::InvalidConfig, "alphabet must be nonempty");
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (!std::isfinite(symbols_[i]))
            throw Error(ErrorCode::InvalidConfig, "alphabet symbols must be finite");
        if (i > 0 && !(symbols_[i - 1] < symbols_[i]))
            throw Error(ErrorCode::InvalidConfig, "alphabet must be strictly ascending");
    }
}

bool Alphabet::contains(double s) const
{
    return std::binary_search(symbols_.begin(), symbols_.end(), s);
}

std::size_t Alphabet::index_of(double s) const
{
    auto it = std::lower_bound(symbols_.begin(), symbols_.end(), s);
    if (it == symbols_.end() || *it != s)
        throw Error(ErrorCode::InvalidConfig, "symbol " + std::to_string(s) + " not in alphabet");
    return static_cast<std::size_t>(it - symbols_.begin());
}

double Alphabet::nearest(double v) const
{
    double best = symbols_.front();
    double best_dist = std::abs(v - best);
    for (std::size_t i = 1; i < symbols_.size(); ++i) {
        const double d = std::abs(v - symbols_[i]);
        if (d < best_dist) { // strict: ties stay with the smaller symbol
            best = symbols_[i];
            best_dist = d;
        }
    }
    return best;
}

ComplexVector complex_mat_vec(const ComplexMatrix& a, std::span<const Complex> v)
{
    if (a.cols != v.size())
        throw Error(ErrorCode::DimensionMismatch, "complex_mat_vec: column count differs from vector length");
    ComplexVector out(a.rows);
    for (std::size_t r = 0; r < a.rows; ++r) {
        Complex s{};
        for (std::size_t c = 0; c < a.cols; ++c)
            s += a(r, c) * v[c];
        out[r] = s;
    }
    return out;
}

Vector widen_vector(std::span<const Complex> v)
{
    Vector out(2 * v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = v[i].real();
        out[v.size() + i] = v[i].imag();
    }
    return out;
}

WidenedModel widen_complex(std::span<const Complex> yc, const ComplexMatrix& hc)
{
    if (yc.size() != hc.rows || hc.data.size() != hc.rows * hc.cols)
        throw Error(ErrorCode::DimensionMismatch, "widen_complex: yc has " + std::to_string(yc.size()) +
                                                      " entries, Hc has " + std::to_string(hc.rows) + " rows");
    const std::size_t n = hc.rows;
    const std::size_t m = hc.cols;
    WidenedModel out{widen_vector(yc), Matrix(2 * n, 2 * m)};
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < m; ++c) {
            const Complex h = hc(r, c);
            out.h(r, c) = h.real();
            out.h(r, m + c) = -h.imag();
            out.h(n + r, c) = h.imag();
            out.h(n + r, m + c) = h.real();
        }
    return out;
}

Psv Psv::extended(double s) const
{
    std::vector<double> next;
    next.reserve(symbols_.size() + 1);
    next.push_back(s);
    next.insert(next.end(), symbols_.begin(), symbols_.end());
    return Psv(std::move(next));
}

Psv Psv::prefix(std::size_t j) const
{
    return Psv(std::vector<double>(symbols_.end() - static_cast<std::ptrdiff_t>(j), symbols_.end()));
}

DetectionProblem::DetectionProblem(std::span<const double> z_natural, const Matrix& r_upper,
                                   Alphabet alphabet, double const_offset)
    : z_(z_natural.size()), r_(z_natural.size(), z_natural.size()), alphabet_(std::move(alphabet)),
      const_offset_(const_offset)
{
    const std::size_t m = z_natural.size();
    if (m == 0 || r_upper.rows() != m || r_upper.cols() != m)
        throw Error(ErrorCode::DimensionMismatch, "DetectionProblem: z has " + std::to_string(m) +
                                                      " entries, R is " + std::to_string(r_upper.rows()) +
                                                      "x" + std::to_string(r_upper.cols()));
    // Natural row i is level m - i; natural column c is level m - c.
    for (std::size_t k = 1; k <= m; ++k) {
        z_[k - 1] = z_natural[m - k];
        for (std::size_t j = 1; j <= k; ++j)
            r_(k - 1, j - 1) = r_upper(m - k, m - j);
    }
}

double DetectionProblem::level_residual(std::size_t k, const Psv& psv) const
{
    const std::size_t upto = std::min(k, psv.level());
    double s = z_[k - 1];
    const auto row = r_.row(k - 1);
    for (std::size_t j = 1; j <= upto; ++j)
        s -= row[j - 1] * psv.x(j);
    return s;
}

DetectionProblem preprocess(std::span<const double> y, const Matrix& h, const Alphabet& alphabet)
{
    if (y.size() != h.rows())
        throw Error(ErrorCode::DimensionMismatch, "preprocess: y has " + std::to_string(y.size()) +
                                                      " entries, H has " + std::to_string(h.rows()) + " rows");
    QrResult qr = qr_thin(h);
    Vector z = mat_t_vec(qr.q1, y);
    const double offset = squared_norm(y) - squared_norm(z);
    return DetectionProblem(z, qr.r, alphabet, offset);
}

Psv psv_from_natural(std::span<const double> x)
{
    // Level j decides natural entry m - j, so deepest-first is natural order.
    return Psv(std::vector<double>(x.begin(), x.end()));
}

Vector natural_from_psv(const Psv& psv) { return psv.symbols(); }

namespace {

void require_level(const DetectionProblem& p, const Psv& psv, std::size_t min_level)
{
    if (psv.level() < min_level || psv.level() > p.dim())
        throw Error(ErrorCode::LevelOutOfRange, "psv level " + std::to_string(psv.level()) +
                                                    " outside [" + std::to_string(min_level) + ", " +
                                                    std::to_string(p.dim()) + "]");
}

} // namespace

double branch_cost(const DetectionProblem& p, const Psv& psv)
{
    require_level(p, psv, 1);
    const double e = p.level_residual(psv.level(), psv);
    return e * e;
}

double path_cost(const DetectionProblem& p, const Psv& psv)
{
    require_level(p, psv, 0);
    double g = 0.0;
    for (std::size_t i = 1; i <= psv.level(); ++i) {
        const double e = p.level_residual(i, psv);
        g += e * e;
    }
    return g;
}

double remaining_cost(const DetectionProblem& p, const Psv& node, const Psv& goal)
{
    require_level(p, node, 0);
    if (goal.level() != p.dim())
        throw Error(ErrorCode::NotDescendant, "completion is not at goal level");
    for (std::size_t j = 1; j <= node.level(); ++j)
        if (node.x(j) != goal.x(j))
            throw Error(ErrorCode::NotDescendant, "completion disagrees at level " + std::to_string(j));
    double h = 0.0;
    for (std::size_t i = node.level() + 1; i <= p.dim(); ++i) {
        const double e = p.level_residual(i, goal);
        h += e * e;
    }
    return h;
}

std::uint64_t power_saturating(std::size_t base, std::size_t exponent)
{
    std::uint64_t out = 1;
    for (std::size_t i = 0; i < exponent; ++i) {
        if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base)
            return std::numeric_limits<std::uint64_t>::max();
        out *= base;
    }
    return out;
}

namespace {

// x holds level-ordered decisions: x[j-1] = x_j.
void oracle_descend(const DetectionProblem& p, std::vector<double>& x, std::size_t level, double acc,
                    double& best)
{
    const std::size_t m = p.dim();
    if (level > m) {
        best = std::min(best, acc);
        return;
    }
    double partial = p.z(level);
    for (std::size_t j = 1; j < level; ++j)
        partial -= p.r(level, j) * x[j - 1];
    for (double s : p.alphabet().symbols()) {
        const double e = partial - p.r(level, level) * s;
        x[level - 1] = s;
        oracle_descend(p, x, level + 1, acc + e * e, best);
    }
}

} // namespace

double optimal_heuristic_oracle(const DetectionProblem& p, const Psv& node)
{
    require_level(p, node, 0);
    const std::size_t k = node.level();
    if (power_saturating(p.alphabet().size(), p.dim() - k) > kOracleEnumerationLimit)
        throw Error(ErrorCode::TooLargeToEnumerate,
                    "oracle would enumerate |A|^" + std::to_string(p.dim() - k) + " completions");
    std::vector<double> x(p.dim(), 0.0);
    for (std::size_t j = 1; j <= k; ++j)
        x[j - 1] = node.x(j);
    double best = std::numeric_limits<double>::infinity();
    oracle_descend(p, x, k + 1, 0.0, best);
    return best;
}

GoalRange::iterator::iterator(const Alphabet* alphabet, std::size_t m, bool end)
    : alphabet_(alphabet), digits_(m, 0), done_(end)
{
    if (!done_)
        current_ = Psv(std::vector<double>(m, (*alphabet_)[0]));
}

GoalRange::iterator& GoalRange::iterator::operator++()
{
    // digits_[0] is the most significant position, x_m.
    std::size_t pos = digits_.size();
    while (pos > 0) {
        --pos;
        if (++digits_[pos] < alphabet_->size()) {
            std::vector<double> s(digits_.size());
            for (std::size_t i = 0; i < digits_.size(); ++i)
                s[i] = (*alphabet_)[digits_[i]];
            current_ = Psv(std::move(s));
            return *this;
        }
        digits_[pos] = 0;
    }
    done_ = true;
    return *this;
}

GoalRange enumerate_goals(const DetectionProblem& p)
{
    if (power_saturating(p.alphabet().size(), p.dim()) > kGoalEnumerationLimit)
        throw Error(ErrorCode::TooLargeToEnumerate,
                    "|A|^" + std::to_string(p.dim()) + " goals exceed the enumeration guard");
    return GoalRange(p.alphabet(), p.dim());
}

Vector quantize(const Alphabet& alphabet, std::span<const double> v)
{
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = alphabet.nearest(v[i]);
    return out;
}

Psv quantize(const DetectionProblem& p, std::span<const double> v)
{
    if (v.size() != p.dim())
        throw Error(ErrorCode::DimensionMismatch, "quantize: vector length differs from problem dimension");
    return psv_from_natural(quantize(p.alphabet(), v));
}

} // namespace hats
