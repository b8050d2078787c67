// Copyright 2026 The tokxform Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "support/oracles.hpp"
#include "tokxform/numkern.hpp"

using namespace tokxform;
using tokxform::testing::naive_matmul;
using tokxform::testing::random_matrix;

TEST_CASE("matmul basics") {
    const Matrix b = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}});
    CHECK(matmul(Matrix::identity(2), b) == b);

    const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
    const Matrix ones = Matrix::from_rows({{1}, {1}});
    CHECK(matmul(a, ones) == Matrix::from_rows({{3}, {7}}));

    CHECK_THROWS_AS(matmul(a, Matrix(3, 1)), DimensionError);
    CHECK_THROWS_AS(Matrix(2, 2, std::vector<real>{1, 2, 3}), DimensionError);
}

TEST_CASE("matmul agrees with the triple-loop oracle") {
    std::mt19937_64 rng(11);
    const Matrix a = random_matrix(5, 7, rng);
    const Matrix b = random_matrix(7, 3, rng);
    CHECK(testing::max_abs(matmul(a, b), naive_matmul(a, b)) < 1e-12);

    std::uniform_int_distribution<std::size_t> dim(1, 16);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = dim(rng), k = dim(rng), n = dim(rng);
        const Matrix x = random_matrix(m, k, rng);
        const Matrix y = random_matrix(k, n, rng);
        const Matrix ref = naive_matmul(x, y);
        REQUIRE(testing::max_abs(matmul(x, y), ref) < 1e-12);
        REQUIRE(testing::max_abs(matmul_nt(x, transpose(y)), ref) < 1e-12);
    }
}

TEST_CASE("softmax_rows") {
    const Matrix u = softmax_rows(Matrix(1, 3, 0.0));
    for (real v : u.data()) {
        CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    }

    // e/(e+1) evaluated independently
    const Matrix p = softmax_rows(Matrix::from_rows({{1, 0}}));
    CHECK(std::abs(p(0, 0) - 0.7310585786300049) < 1e-15);
    CHECK(std::abs(p(0, 1) - (1 - 0.7310585786300049)) < 1e-15);

    CHECK_THROWS_AS(softmax_rows(Matrix::from_rows({{NAN, 0}})), NumericError);
    CHECK_THROWS_AS(softmax_rows(Matrix::from_rows({{INFINITY, 0}})), NumericError);
    CHECK_THROWS_AS(softmax_rows(u, 0), ArgumentError);

    // tau = 150 would overflow exp without max subtraction
    const Matrix hot = softmax_rows(Matrix::from_rows({{1, 0.5, -1}}), 150);
    CHECK(all_finite(hot.data()));
    CHECK(hot(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("softmax properties on random input") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> shift(-50, 50);
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix z = random_matrix(1 + trial % 9, 1 + trial % 13, rng, 3.0);
        const Matrix r = softmax_rows(z);
        const Matrix c = softmax_cols(z);
        for (real s : row_sums(r)) REQUIRE(std::abs(s - 1) < 1e-12);
        for (real s : column_sums(c)) REQUIRE(std::abs(s - 1) < 1e-12);

        Matrix shifted = z;
        const real k = shift(rng);
        for (auto& v : shifted.data()) v += k;
        REQUIRE(testing::max_abs(softmax_rows(shifted), r) < 1e-12);
        REQUIRE(testing::max_abs(softmax_cols(shifted), c) < 1e-12);
    }
}

TEST_CASE("softmax_cols") {
    const Matrix one = softmax_cols(Matrix::from_rows({{0.3, -2, 7}}));
    CHECK(one == Matrix(1, 3, 1.0));

    const Matrix col = softmax_cols(Matrix::from_rows({{1}, {0}}));
    CHECK(std::abs(col(0, 0) - 0.7310585786300049) < 1e-15);
    CHECK(std::abs(col(1, 0) - 0.2689414213699951) < 1e-15);
    CHECK_THROWS_AS(softmax_cols(Matrix::from_rows({{NAN}, {0}})), NumericError);
}

TEST_CASE("cosine_sim") {
    const Matrix e = Matrix::from_rows({{1, 0}, {0, 1}});
    const Matrix s = cosine_sim(e, e);
    CHECK(s(0, 0) == 1.0);
    CHECK(s(1, 1) == 1.0);
    CHECK(s(0, 1) == 0.0);

    const Matrix ab = cosine_sim(Matrix::from_rows({{3, 4}}), Matrix::from_rows({{4, 3}}));
    CHECK(std::abs(ab(0, 0) - 0.96) < 1e-15);

    std::size_t zeros = 0;
    const Matrix z = cosine_sim(Matrix::from_rows({{0, 0}, {1, 1}}), e, zeros);
    CHECK(zeros == 1);
    CHECK(z(0, 0) == 0.0);
    CHECK(z(0, 1) == 0.0);

    CHECK_THROWS_AS(cosine_sim(e, Matrix(2, 3)), DimensionError);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix x = random_matrix(8, 5, rng);
        const Matrix c = cosine_sim(x, x);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            REQUIRE(std::abs(c(i, i) - 1) < 1e-12);
            for (std::size_t j = 0; j < x.rows(); ++j) {
                REQUIRE(c(i, j) >= -1.0);
                REQUIRE(c(i, j) <= 1.0);
            }
        }
    }
}

TEST_CASE("layernorm and gelu") {
    const Matrix x = Matrix::from_rows({{1, 2, 3, 4}});
    const Vector g(4, 1), b(4, 0);
    const Matrix y = layernorm(x, g, b, 0);
    real mean = 0, var = 0;
    for (real v : y.data()) mean += v;
    for (real v : y.data()) var += v * v;
    CHECK(std::abs(mean) < 1e-12);
    CHECK(std::abs(var / 4 - 1) < 1e-12);
    CHECK_THROWS_AS(layernorm(x, Vector(3, 1), b, 0), DimensionError);

    const Matrix act = gelu(Matrix::from_rows({{0, 1, -1}}));
    CHECK(act(0, 0) == 0.0);
    CHECK(std::abs(act(0, 1) - 0.8413447460685429) < 1e-12);   // Phi(1)
    CHECK(std::abs(act(0, 2) + 0.15865525393145707) < 1e-12);  // -Phi(-1)
}

TEST_CASE("topk_indices") {
    CHECK(topk_indices(Vector{0.8, 1.3, 0.9}, 2) == IndexList{1, 2});
    CHECK(topk_indices(Vector{1, 1, 1}, 2) == IndexList{0, 1});
    CHECK(topk_indices(Vector{3, 1, 2}, 3) == IndexList{0, 1, 2});
    CHECK(topk_indices(Vector{3, 1, 2}, 0).empty());
    CHECK_THROWS_AS(topk_indices(Vector{1, 2}, 3), ArgumentError);
}

TEST_CASE("gather, sums and matvec") {
    const Matrix x = Matrix::from_rows({{1, 2}, {3, 4}, {5, 6}});
    CHECK(gather_rows(x, IndexList{2, 0}) == Matrix::from_rows({{5, 6}, {1, 2}}));
    CHECK_THROWS_AS(gather_rows(x, IndexList{3}), DimensionError);
    CHECK(row_sums(x) == Vector{3, 7, 11});
    CHECK(column_sums(x) == Vector{9, 12});
    CHECK(matvec(x, Vector{1, 1}) == Vector{3, 7, 11});
    CHECK_THROWS_AS(matvec(x, Vector{1}), DimensionError);
}
