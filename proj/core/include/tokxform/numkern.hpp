// Copyright 2026 The tokxform Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "tokxform/errors.hpp"

namespace tokxform {

#ifdef TOKXFORM_SINGLE_PRECISION
using real = float;
#else
using real = double;
#endif

using Vector = std::vector<real>;
using IndexList = std::vector<std::size_t>;

// Dense row-major matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, real fill = real(0));
    Matrix(std::size_t rows, std::size_t cols, std::vector<real> data);

    static Matrix identity(std::size_t n);
    static Matrix from_rows(std::initializer_list<std::initializer_list<real>> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    real& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    real operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<real> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const real> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    std::span<real> data() noexcept { return data_; }
    std::span<const real> data() const noexcept { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<real> data_;
};

// a · b
Matrix matmul(const Matrix& a, const Matrix& b);
// a · bᵀ; the natural layout for `x · Wᵀ` with weights stored [out, in].
Matrix matmul_nt(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Vector matvec(const Matrix& a, std::span<const real> v);

// Row-wise softmax of temperature·z, stabilised by subtracting each row's max.
// Throws NumericError on non-finite input and ArgumentError when temperature <= 0.
Matrix softmax_rows(const Matrix& z, real temperature = real(1));
// Column-wise counterpart of softmax_rows.
Matrix softmax_cols(const Matrix& z, real temperature = real(1));

// Entry (i, j) is the cosine similarity of a.row(i) and b.row(j), clamped to [-1, 1].
// A zero-norm row has similarity 0 against everything; the number of such rows
// (counted over both operands) is reported through `zero_norm_rows`.
Matrix cosine_sim(const Matrix& a, const Matrix& b);
Matrix cosine_sim(const Matrix& a, const Matrix& b, std::size_t& zero_norm_rows);

Matrix layernorm(const Matrix& x, std::span<const real> gamma, std::span<const real> beta, real eps);
// Exact (erf) GELU.
Matrix gelu(const Matrix& x);

// Indices of the k largest values; ties go to the lower index. Result is sorted ascending.
IndexList topk_indices(std::span<const real> v, std::size_t k);

Matrix gather_rows(const Matrix& x, std::span<const std::size_t> indices);
void add_row_vector(Matrix& x, std::span<const real> bias);
void add_inplace(Matrix& x, const Matrix& y);

Vector row_sums(const Matrix& x);
Vector column_sums(const Matrix& x);

real max_abs_diff(const Matrix& a, const Matrix& b);
bool all_finite(std::span<const real> v) noexcept;

}  // namespace tokxform
