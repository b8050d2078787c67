// Copyright 2026 The tokxform Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "tokxform/numkern.hpp"

namespace tokxform {

enum class ReductionMode { none, prune, merge, transform };

std::string_view to_string(ReductionMode mode) noexcept;
// Accepts "none", "prune", "merge", "transform"; throws ArgumentError otherwise.
ReductionMode parse_mode(std::string_view text);

struct ReducerConfig {
    real keep_ratio = real(0.7);  // fraction of eligible tokens kept per stage, in (0, 1]
    real kappa = real(0.5);       // similarity gate, in [-1, 1]
    real tau = real(150);         // assignment softmax temperature, > 0
    ReductionMode mode = ReductionMode::transform;
    bool class_token_bypass = true;

    void validate() const;
};

// Y = W · X together with the matrices it was built from.
//
// `selected` names the source token anchoring each output row: the informative
// token for transform/prune, the group anchor for merge, and the bypassed class
// token where one was re-attached.
struct Reduction {
    Matrix transform;   // W, M x N, row-stochastic
    Matrix assignment;  // m, M x N, before row normalisation
    Vector scale;       // s_i = sum_j m_ij
    IndexList selected;
    Matrix tokens;      // Y, M x d

    std::size_t output_count() const noexcept { return transform.rows(); }
    std::size_t input_count() const noexcept { return transform.cols(); }
};

// Column sums of a row-stochastic attention map (rows must sum to 1 within 1e-6).
Vector informativeness(const Matrix& attention);

// ceil(keep_ratio * eligible), computed so that exact products such as 0.6 * 10
// are not bumped up by floating-point noise. Never returns 0 for eligible > 0.
std::size_t reduced_count(std::size_t eligible, real keep_ratio);

// Top reduced_count(N_eligible, r) indices of `scores`, ascending. The bypass
// index is excluded from both the candidate set and N_eligible.
IndexList select_informative(std::span<const real> scores, real keep_ratio,
                             std::optional<std::size_t> bypass_index = std::nullopt);

// Cosine similarity of tokens[selected[i]] against every token, zeroed below kappa.
Matrix gate_similarity(const Matrix& tokens, std::span<const std::size_t> selected, real kappa);

// Column softmax of tau * gated. Gated zeros contribute exp(0) rather than being masked.
Matrix assignment_matrix(const Matrix& gated, real tau);

// Row sums of an assignment matrix.
Vector scale_vector(const Matrix& assignment);

// Row-normalise a column-stochastic assignment and apply it to `tokens`.
// Throws ContractError if a column does not sum to 1 (1e-9) or a row is all zero.
Reduction transform(const Matrix& tokens, const Matrix& assignment, IndexList selected = {});

// Same weighted sum with only the non-negativity / non-empty-row requirements.
// Used for hard-assigned matrices whose dropped columns sum to zero.
Reduction weighted_reduction(const Matrix& tokens, const Matrix& assignment, IndexList selected = {});

// Diagonal selection: W has a single 1 per row at the kept column.
Reduction prune_matrix(const Matrix& tokens, std::span<const std::size_t> keep);

// Block-wise averaging over a partition of {0..N-1}; row i averages groups[i].
Reduction merge_matrix(const Matrix& tokens, const std::vector<IndexList>& groups);

// W = I, m = I, s = 1.
Reduction identity_reduction(const Matrix& tokens);

// Full pipeline dispatching on cfg.mode. When cfg.class_token_bypass is set and
// bypass_index names a token, that token is left out of selection, similarity and
// mixing, then re-attached unchanged with scale 1 in its sorted position.
Reduction reduce(const Matrix& tokens, const Matrix& attention, const ReducerConfig& cfg,
                 std::optional<std::size_t> bypass_index = std::nullopt);

// Writes W as dense `row,col,value` triples and s as `row,value`, each with a header line.
void write_transform_csv(const Reduction& r, std::ostream& out);
void write_scale_csv(const Reduction& r, std::ostream& out);
// <dir>/<stem>_W.csv and <dir>/<stem>_s.csv
void save_coefficients(const Reduction& r, const std::filesystem::path& dir, std::string_view stem);

}  // namespace tokxform
