/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The HATS Detector Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#include "hats/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hats {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorCode::NotDescendant: return "NotDescendant";
    case ErrorCode::TooLargeToEnumerate: return "TooLargeToEnumerate";
    case ErrorCode::CapacityTooSmall: return "CapacityTooSmall";
    case ErrorCode::NoEvictable: return "NoEvictable";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::FormatViolation: return "FormatViolation";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::MissingModel: return "MissingModel";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major))
{
    if (data_.size() != rows_ * cols_)
        throw Error(ErrorCode::DimensionMismatch,
                    "matrix " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                        " given " + std::to_string(data_.size()) + " entries");
}

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const
{
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            t(c, r) = (*this)(r, c);
    return t;
}

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double squared_norm(std::span<const double> v) { return dot(v, v); }

double max_abs(const Matrix& a)
{
    double m = 0.0;
    for (double x : a.data())
        m = std::max(m, std::abs(x));
    return m;
}

Vector mat_vec(const Matrix& a, std::span<const double> v)
{
    if (a.cols() != v.size())
        throw Error(ErrorCode::DimensionMismatch, "mat_vec: matrix has " + std::to_string(a.cols()) +
                                                      " columns, vector has " + std::to_string(v.size()));
    Vector out(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r)
        out[r] = dot(a.row(r), v);
    return out;
}

Vector mat_t_vec(const Matrix& a, std::span<const double> v)
{
    if (a.rows() != v.size())
        throw Error(ErrorCode::DimensionMismatch, "mat_t_vec: matrix has " + std::to_string(a.rows()) +
                                                      " rows, vector has " + std::to_string(v.size()));
    Vector out(a.cols(), 0.0);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const auto row = a.row(r);
        for (std::size_t c = 0; c < a.cols(); ++c)
            out[c] += row[c] * v[r];
    }
    return out;
}

Matrix mat_mul(const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.rows())
        throw Error(ErrorCode::DimensionMismatch, "mat_mul: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) += aik * b(k, j);
        }
    return c;
}

QrResult qr_thin(const Matrix& h)
{
    const std::size_t n = h.rows();
    const std::size_t m = h.cols();
    if (m == 0 || n < m)
        throw Error(ErrorCode::DimensionMismatch,
                    "qr_thin needs n >= m >= 1, got " + std::to_string(n) + "x" + std::to_string(m));

    double largest = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            s += h(r, c) * h(r, c);
        largest = std::max(largest, std::sqrt(s));
    }
    const double threshold = 1e-12 * largest;

    Matrix a = h;
    // Householder vectors, v_j lives in rows j..n-1.
    std::vector<Vector> reflectors(m);

    for (std::size_t j = 0; j < m; ++j) {
        double norm = 0.0;
        for (std::size_t r = j; r < n; ++r)
            norm += a(r, j) * a(r, j);
        norm = std::sqrt(norm);
        if (!(norm > threshold))
            throw Error(ErrorCode::RankDeficient, "column " + std::to_string(j) + " norm " +
                                                      std::to_string(norm) + " below threshold");

        Vector v(n - j);
        for (std::size_t r = j; r < n; ++r)
            v[r - j] = a(r, j);
        const double alpha = a(j, j) >= 0.0 ? -norm : norm;
        v[0] -= alpha;
        const double vnorm2 = squared_norm(v);

        if (vnorm2 > 0.0) {
            for (std::size_t c = j; c < m; ++c) {
                double s = 0.0;
                for (std::size_t r = j; r < n; ++r)
                    s += v[r - j] * a(r, c);
                const double scale = 2.0 * s / vnorm2;
                for (std::size_t r = j; r < n; ++r)
                    a(r, c) -= scale * v[r - j];
            }
        }
        reflectors[j] = std::move(v);
    }

    QrResult out{Matrix(n, m), Matrix(m, m)};
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t c = i; c < m; ++c)
            out.r(i, c) = a(i, c);

    // Q1 = P_0 P_1 ... P_{m-1} [I_m; 0], applied right to left.
    for (std::size_t i = 0; i < m; ++i)
        out.q1(i, i) = 1.0;
    for (std::size_t jj = m; jj-- > 0;) {
        const Vector& v = reflectors[jj];
        const double vnorm2 = squared_norm(v);
        if (vnorm2 == 0.0)
            continue;
        for (std::size_t c = 0; c < m; ++c) {
            double s = 0.0;
            for (std::size_t r = jj; r < n; ++r)
                s += v[r - jj] * out.q1(r, c);
            const double scale = 2.0 * s / vnorm2;
            for (std::size_t r = jj; r < n; ++r)
                out.q1(r, c) -= scale * v[r - jj];
        }
    }

    // Nonnegative diagonal makes the factorization unique.
    for (std::size_t i = 0; i < m; ++i) {
        if (out.r(i, i) < 0.0) {
            for (std::size_t c = i; c < m; ++c)
                out.r(i, c) = -out.r(i, c);
            for (std::size_t r = 0; r < n; ++r)
                out.q1(r, i) = -out.q1(r, i);
        }
    }
    return out;
}

Vector solve_regularized(const Matrix& h, std::span<const double> y, double sigma2)
{
    const std::size_t n = h.rows();
    const std::size_t m = h.cols();
    if (y.size() != n)
        throw Error(ErrorCode::DimensionMismatch, "solve_regularized: y has " + std::to_string(y.size()) +
                                                      " entries, H has " + std::to_string(n) + " rows");
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2))
        throw Error(ErrorCode::InvalidConfig, "solve_regularized: sigma2 must be finite and >= 0");

    const double lambda = std::sqrt(sigma2);
    const std::size_t rows = sigma2 > 0.0 ? n + m : n;
    Matrix stacked(rows, m);
    Vector rhs(rows, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < m; ++c)
            stacked(r, c) = h(r, c);
        rhs[r] = y[r];
    }
    if (sigma2 > 0.0)
        for (std::size_t i = 0; i < m; ++i)
            stacked(n + i, i) = lambda;

    QrResult qr;
    try {
        qr = qr_thin(stacked);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::RankDeficient || e.code() == ErrorCode::DimensionMismatch)
            throw Error(ErrorCode::Singular, std::string("solve_regularized: ") + e.what());
        throw;
    }

    Vector b = mat_t_vec(qr.q1, rhs);
    Vector u(m, 0.0);
    for (std::size_t ii = m; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t c = ii + 1; c < m; ++c)
            s -= qr.r(ii, c) * u[c];
        u[ii] = s / qr.r(ii, ii);
    }
    return u;
}

} // namespace hats
