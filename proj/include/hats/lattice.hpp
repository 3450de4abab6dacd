/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef HATS_LATTICE_HPP
#define HATS_LATTICE_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <span>
#include <vector>

#include "hats/linalg.hpp"

namespace hats {

/** Ordered set of real symbols a single decision can take. */
class Alphabet {
public:
    explicit Alphabet(std::vector<double> symbols);

    /// Real decomposition of QPSK / 4-QAM.
    static Alphabet qpsk() { return Alphabet({-1.0, 1.0}); }

    std::size_t size() const noexcept { return symbols_.size(); }
    double operator[](std::size_t i) const noexcept { return symbols_[i]; }
    const std::vector<double>& symbols() const noexcept { return symbols_; }

    bool contains(double s) const;
    std::size_t index_of(double s) const; // throws when absent
    double nearest(double v) const;       // ties go to the smaller symbol

    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    std::vector<double> symbols_;
};

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

struct ComplexMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Complex> data; // row-major

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    Complex& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    Complex operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

ComplexVector complex_mat_vec(const ComplexMatrix& a, std::span<const Complex> v);

/** y_c = H_c x_c + w_c, kept alongside the tap variance it was drawn with. */
struct ComplexScene {
    ComplexMatrix hc;
    ComplexVector xc;
    ComplexVector wc;
    ComplexVector yc;
    double rho = 1.0;
};

struct WidenedModel {
    Vector y;
    Matrix h;
};

// y = [Re yc; Im yc], H = [[Re Hc, -Im Hc], [Im Hc, Re Hc]].
WidenedModel widen_complex(std::span<const Complex> yc, const ComplexMatrix& hc);
Vector widen_vector(std::span<const Complex> v);

/**
 * A path from the dummy root down to level k.
 *
 * Symbols are held deepest-first, [x_k, ..., x_1]; x(j) reads the level-j
 * decision. Level 0 is the root.
 */
class Psv {
public:
    Psv() = default;
    explicit Psv(std::vector<double> deepest_first) : symbols_(std::move(deepest_first)) {}

    std::size_t level() const noexcept { return symbols_.size(); }
    bool is_root() const noexcept { return symbols_.empty(); }

    /// Decision at level j, 1 <= j <= level().
    double x(std::size_t j) const noexcept { return symbols_[symbols_.size() - j]; }

    const std::vector<double>& symbols() const noexcept { return symbols_; }

    /// Child at level()+1 deciding `s`.
    Psv extended(double s) const;
    /// Ancestor at level j <= level().
    Psv prefix(std::size_t j) const;

    friend bool operator==(const Psv&, const Psv&) = default;
    friend auto operator<=>(const Psv&, const Psv&) = default;

private:
    std::vector<double> symbols_;
};

/**
 * Preprocessed instance z = R x + v on which every cost is defined.
 *
 * Levels are numbered 1..m from the bottom-right of the triangular system, so
 * level 1 is the first decision of the tree. Storage is already permuted:
 * z(k) is z_k and r(k, j) is r_{k,j} for 1 <= j <= k <= m. Read bottom-right
 * to top-left, the coefficients form the usual upper-triangular R.
 */
class DetectionProblem {
public:
    // z_natural / r_upper are the ordinary Q1^T y and upper-triangular R.
    DetectionProblem(std::span<const double> z_natural, const Matrix& r_upper, Alphabet alphabet,
                     double const_offset = 0.0);

    std::size_t dim() const noexcept { return z_.size(); }
    const Alphabet& alphabet() const noexcept { return alphabet_; }
    double const_offset() const noexcept { return const_offset_; }

    double z(std::size_t k) const noexcept { return z_[k - 1]; }
    double r(std::size_t k, std::size_t j) const noexcept { return r_(k - 1, j - 1); }

    /// z in level order: entry k-1 holds z_k.
    std::span<const double> z_levels() const noexcept { return z_; }

    /// z_k - sum_{j <= min(k, psv.level())} r_{k,j} x_j.
    double level_residual(std::size_t k, const Psv& psv) const;

private:
    Vector z_;
    Matrix r_; // r_(k-1, j-1) = r_{k,j}; zero above the diagonal
    Alphabet alphabet_;
    double const_offset_;
};

DetectionProblem preprocess(std::span<const double> y, const Matrix& h, const Alphabet& alphabet);

/// Natural-order candidate x (x[0] multiplies column 0 of H) to a goal PSV.
Psv psv_from_natural(std::span<const double> x);
/// Goal PSV back to the natural candidate ordering.
Vector natural_from_psv(const Psv& psv);

double branch_cost(const DetectionProblem& p, const Psv& psv);
double path_cost(const DetectionProblem& p, const Psv& psv);
double remaining_cost(const DetectionProblem& p, const Psv& node, const Psv& goal);

inline constexpr std::uint64_t kOracleEnumerationLimit = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kGoalEnumerationLimit = std::uint64_t{1} << 24;

// Exact min over all completions of remaining_cost. Brute force; tests only.
double optimal_heuristic_oracle(const DetectionProblem& p, const Psv& node);

/** Every goal PSV of a problem, in lexicographic order of [x_m, ..., x_1]. */
class GoalRange {
public:
    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = Psv;
        using difference_type = std::ptrdiff_t;
        using pointer = const Psv*;
        using reference = const Psv&;

        iterator() = default;
        iterator(const Alphabet* alphabet, std::size_t m, bool end);

        reference operator*() const { return current_; }
        pointer operator->() const { return &current_; }
        iterator& operator++();
        iterator operator++(int)
        {
            auto copy = *this;
            ++*this;
            return copy;
        }
        friend bool operator==(const iterator& a, const iterator& b) { return a.done_ == b.done_ && (a.done_ || a.digits_ == b.digits_); }

    private:
        const Alphabet* alphabet_ = nullptr;
        std::vector<std::size_t> digits_;
        Psv current_;
        bool done_ = true;
    };

    GoalRange(const Alphabet& alphabet, std::size_t m) : alphabet_(&alphabet), m_(m) {}

    iterator begin() const { return iterator(alphabet_, m_, false); }
    iterator end() const { return iterator(alphabet_, m_, true); }

private:
    const Alphabet* alphabet_;
    std::size_t m_;
};

GoalRange enumerate_goals(const DetectionProblem& p);

Vector quantize(const Alphabet& alphabet, std::span<const double> v);
/// Rounds a natural-order estimate and returns it as a goal PSV.
Psv quantize(const DetectionProblem& p, std::span<const double> v);

// |A|^n, saturating at UINT64_MAX.
std::uint64_t power_saturating(std::size_t base, std::size_t exponent);

} // namespace hats

#endif
