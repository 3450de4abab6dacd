/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef HATS_LINALG_HPP
#define HATS_LINALG_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "hats/error.hpp"

namespace hats {

using Vector = std::vector<double>;

/** Dense row-major real matrix. */
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    const std::vector<double>& data() const noexcept { return data_; }
    std::vector<double>& data() noexcept { return data_; }

    Matrix transposed() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct QrResult {
    Matrix q1; // n x m, orthonormal columns
    Matrix r;  // m x m, upper triangular with nonnegative diagonal
};

// Thin Householder QR. Throws RankDeficient when a column norm collapses below
// 1e-12 of the largest column norm of h.
QrResult qr_thin(const Matrix& h);

Vector mat_vec(const Matrix& a, std::span<const double> v);
Vector mat_t_vec(const Matrix& a, std::span<const double> v);
Matrix mat_mul(const Matrix& a, const Matrix& b);

// argmin_u |y - H u|^2 + sigma2 |u|^2, solved by QR of the stacked system [H; sqrt(sigma2) I].
Vector solve_regularized(const Matrix& h, std::span<const double> y, double sigma2);

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> v);
double max_abs(const Matrix& a); // infinity-norm of the entries

} // namespace hats

#endif
