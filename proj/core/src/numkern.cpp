// Copyright 2026 The tokxform Authors
// SPDX-License-Identifier: Apache-2.0

#include "tokxform/numkern.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tokxform {

namespace {

std::string shape_str(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_finite(const Matrix& z, const char* what) {
    if (!all_finite(z.data())) {
        throw NumericError(std::string(what) + ": non-finite input");
    }
}

real dot(const real* a, const real* b, std::size_t n) noexcept {
    real s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        s0 += a[k] * b[k];
        s1 += a[k + 1] * b[k + 1];
        s2 += a[k + 2] * b[k + 2];
        s3 += a[k + 3] * b[k + 3];
    }
    for (; k < n; ++k) {
        s0 += a[k] * b[k];
    }
    return (s0 + s1) + (s2 + s3);
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, real fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<real> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("Matrix: data length " + std::to_string(data_.size()) +
                             " does not match " + std::to_string(rows_) + "x" + std::to_string(cols_));
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1;
    }
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<real>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.begin()->size() : 0;
    std::vector<real> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) {
            throw DimensionError("Matrix::from_rows: ragged rows");
        }
        data.insert(data.end(), row.begin(), row.end());
    }
    return Matrix(r, c, std::move(data));
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: " + shape_str(a) + " by " + shape_str(b));
    }
    Matrix out(a.rows(), b.cols());
    const std::size_t inner = a.cols();
    const std::size_t n = b.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        real* o = out.row(i).data();
        const real* ar = a.row(i).data();
        for (std::size_t k = 0; k < inner; ++k) {
            const real aik = ar[k];
            const real* br = b.row(k).data();
            for (std::size_t j = 0; j < n; ++j) {
                o[j] += aik * br[j];
            }
        }
    }
    return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        throw DimensionError("matmul_nt: " + shape_str(a) + " by transpose of " + shape_str(b));
    }
    Matrix out(a.rows(), b.rows());
    const std::size_t inner = a.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const real* ar = a.row(i).data();
        real* o = out.row(i).data();
        for (std::size_t j = 0; j < b.rows(); ++j) {
            o[j] = dot(ar, b.row(j).data(), inner);
        }
    }
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            t(j, i) = a(i, j);
        }
    }
    return t;
}

Vector matvec(const Matrix& a, std::span<const real> v) {
    if (a.cols() != v.size()) {
        throw DimensionError("matvec: " + shape_str(a) + " by vector of length " + std::to_string(v.size()));
    }
    Vector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        real acc = 0;
        const auto r = a.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            acc += r[j] * v[j];
        }
        out[i] = acc;
    }
    return out;
}

Matrix softmax_rows(const Matrix& z, real temperature) {
    if (!(temperature > 0)) {
        throw ArgumentError("softmax_rows: temperature must be > 0");
    }
    require_finite(z, "softmax_rows");
    Matrix out(z.rows(), z.cols());
    for (std::size_t i = 0; i < z.rows(); ++i) {
        const auto in = z.row(i);
        auto o = out.row(i);
        if (in.empty()) {
            continue;
        }
        const real mx = *std::max_element(in.begin(), in.end());
        real sum = 0;
        for (std::size_t j = 0; j < in.size(); ++j) {
            o[j] = std::exp(temperature * (in[j] - mx));
            sum += o[j];
        }
        for (auto& v : o) {
            v /= sum;
        }
    }
    return out;
}

Matrix softmax_cols(const Matrix& z, real temperature) {
    if (!(temperature > 0)) {
        throw ArgumentError("softmax_cols: temperature must be > 0");
    }
    require_finite(z, "softmax_cols");
    Matrix out(z.rows(), z.cols());
    if (z.rows() == 0) {
        return out;
    }
    Vector mx(z.row(0).begin(), z.row(0).end());
    for (std::size_t i = 1; i < z.rows(); ++i) {
        const auto r = z.row(i);
        for (std::size_t j = 0; j < z.cols(); ++j) {
            mx[j] = std::max(mx[j], r[j]);
        }
    }
    Vector sum(z.cols(), 0);
    for (std::size_t i = 0; i < z.rows(); ++i) {
        const auto in = z.row(i);
        auto o = out.row(i);
        for (std::size_t j = 0; j < z.cols(); ++j) {
            o[j] = std::exp(temperature * (in[j] - mx[j]));
            sum[j] += o[j];
        }
    }
    for (std::size_t i = 0; i < z.rows(); ++i) {
        auto o = out.row(i);
        for (std::size_t j = 0; j < z.cols(); ++j) {
            o[j] /= sum[j];
        }
    }
    return out;
}

Matrix cosine_sim(const Matrix& a, const Matrix& b) {
    std::size_t ignored = 0;
    return cosine_sim(a, b, ignored);
}

Matrix cosine_sim(const Matrix& a, const Matrix& b, std::size_t& zero_norm_rows) {
    if (a.cols() != b.cols()) {
        throw DimensionError("cosine_sim: " + shape_str(a) + " vs " + shape_str(b));
    }
    auto norms = [](const Matrix& m) {
        Vector n(m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const auto r = m.row(i);
            n[i] = std::sqrt(dot(r.data(), r.data(), r.size()));
        }
        return n;
    };
    const Vector na = norms(a);
    const Vector nb = norms(b);
    zero_norm_rows = static_cast<std::size_t>(std::count(na.begin(), na.end(), real(0)) +
                                              std::count(nb.begin(), nb.end(), real(0)));

    Matrix out = matmul_nt(a, b);
    for (std::size_t i = 0; i < out.rows(); ++i) {
        auto o = out.row(i);
        for (std::size_t j = 0; j < out.cols(); ++j) {
            const real denom = na[i] * nb[j];
            o[j] = denom > 0 ? std::clamp(o[j] / denom, real(-1), real(1)) : real(0);
        }
    }
    return out;
}

Matrix layernorm(const Matrix& x, std::span<const real> gamma, std::span<const real> beta, real eps) {
    if (gamma.size() != x.cols() || beta.size() != x.cols()) {
        throw DimensionError("layernorm: parameter length does not match " + shape_str(x));
    }
    Matrix out(x.rows(), x.cols());
    const real n = static_cast<real>(x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto in = x.row(i);
        auto o = out.row(i);
        const real mean = std::accumulate(in.begin(), in.end(), real(0)) / n;
        real var = 0;
        for (real v : in) {
            var += (v - mean) * (v - mean);
        }
        var /= n;
        const real inv = real(1) / std::sqrt(var + eps);
        for (std::size_t j = 0; j < in.size(); ++j) {
            o[j] = (in[j] - mean) * inv * gamma[j] + beta[j];
        }
    }
    return out;
}

Matrix gelu(const Matrix& x) {
    Matrix out = x;
    const real inv_sqrt2 = real(0.70710678118654752440);
    for (auto& v : out.data()) {
        v = real(0.5) * v * (real(1) + std::erf(v * inv_sqrt2));
    }
    return out;
}

IndexList topk_indices(std::span<const real> v, std::size_t k) {
    if (k > v.size()) {
        throw ArgumentError("topk_indices: k=" + std::to_string(k) + " exceeds length " + std::to_string(v.size()));
    }
    IndexList order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
    order.resize(k);
    std::sort(order.begin(), order.end());
    return order;
}

Matrix gather_rows(const Matrix& x, std::span<const std::size_t> indices) {
    Matrix out(indices.size(), x.cols());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] >= x.rows()) {
            throw DimensionError("gather_rows: index " + std::to_string(indices[i]) + " out of range for " +
                                 shape_str(x));
        }
        const auto src = x.row(indices[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

void add_row_vector(Matrix& x, std::span<const real> bias) {
    if (bias.size() != x.cols()) {
        throw DimensionError("add_row_vector: bias length does not match " + shape_str(x));
    }
    for (std::size_t i = 0; i < x.rows(); ++i) {
        auto r = x.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            r[j] += bias[j];
        }
    }
}

void add_inplace(Matrix& x, const Matrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        throw DimensionError("add_inplace: " + shape_str(x) + " vs " + shape_str(y));
    }
    auto xd = x.data();
    const auto yd = y.data();
    for (std::size_t i = 0; i < xd.size(); ++i) {
        xd[i] += yd[i];
    }
}

Vector row_sums(const Matrix& x) {
    Vector s(x.rows(), 0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (real v : x.row(i)) {
            s[i] += v;
        }
    }
    return s;
}

Vector column_sums(const Matrix& x) {
    Vector s(x.cols(), 0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto r = x.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            s[j] += r[j];
        }
    }
    return s;
}

real max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("max_abs_diff: " + shape_str(a) + " vs " + shape_str(b));
    }
    real d = 0;
    const auto ad = a.data();
    const auto bd = b.data();
    for (std::size_t i = 0; i < ad.size(); ++i) {
        d = std::max(d, std::abs(ad[i] - bd[i]));
    }
    return d;
}

bool all_finite(std::span<const real> v) noexcept {
    return std::all_of(v.begin(), v.end(), [](real x) { return std::isfinite(x); });
}

}  // namespace tokxform
