// Copyright 2026 The tokxform Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tokxform/model_config.hpp"
#include "tokxform/recovery.hpp"
#include "tokxform/reducer.hpp"
#include "tokxform/weights.hpp"

namespace tokxform {

// Views into one encoder block's parameters. Valid while the WeightStore lives.
struct BlockWeights {
    std::span<const real> norm1_weight, norm1_bias;
    const Matrix& qkv_weight;  // [3d, d]
    std::span<const real> qkv_bias;
    const Matrix& proj_weight;  // [d, d]
    std::span<const real> proj_bias;
    std::span<const real> norm2_weight, norm2_bias;
    const Matrix& fc1_weight;  // [hidden, d]
    std::span<const real> fc1_bias;
    const Matrix& fc2_weight;  // [d, hidden]
    std::span<const real> fc2_bias;
};

BlockWeights block_weights(const WeightStore& weights, std::size_t layer);

// softmax(q kᵀ / sqrt(head_dim) + log s), with log s added to every row's key logits.
// Throws ContractError unless every s_j > 0.
Matrix attention_weights(const Matrix& q, const Matrix& k, std::span<const real> scale);
// Plain softmax(q kᵀ / sqrt(head_dim)).
Matrix attention_weights(const Matrix& q, const Matrix& k);

struct AttentionOutput {
    Matrix tokens;     // x + proj(concat_h(A_h V_h))
    Matrix attention;  // mean of A_h over heads
};

// Pre-norm multi-head self-attention sublayer with the residual added.
AttentionOutput scaled_attention(const Matrix& x, std::span<const real> scale, const BlockWeights& w,
                                 const ModelConfig& cfg);

// x + fc2(gelu(fc1(norm2(x))))
Matrix feed_forward(const Matrix& x, const BlockWeights& w, const ModelConfig& cfg);

struct LayerTrace {
    std::size_t layer = 0;
    std::size_t tokens_in = 0;
    std::size_t tokens_out = 0;
    real attention_entropy = 0;  // mean row entropy of the head-averaged map, in nats
    real scale_sum = 0;          // sum of s after this layer
    std::optional<Reduction> reduction;
};

struct ForwardOptions {
    bool keep_reductions = false;  // store each stage's Reduction in the trace
    bool record_recovery = false;  // store a RecoveryIndex per reduction stage
};

struct ForwardState {
    Matrix tokens;
    Vector scale;
    std::optional<std::size_t> class_index;
    std::vector<LayerTrace> trace;
    std::vector<RecoveryIndex> recovery;
};

// Adds positional embeddings to x (N x d) and starts with unit scales.
ForwardState initial_state(const Matrix& x, const WeightStore& weights, const ModelConfig& cfg);

// Attention (scaled by the current s), optional reduction of the post-attention
// tokens with s <- m s, then the FFN on the reduced set.
ForwardState block_forward(ForwardState state, std::size_t layer, const WeightStore& weights,
                           const ModelConfig& cfg, const ForwardOptions& opts = {});

struct ForwardResult {
    Vector logits;
    Matrix features;  // final-norm output, one row per surviving token
    Vector pooled;    // class-token row of `features`, or the token mean without one
    Vector scale;
    std::vector<LayerTrace> trace;
    std::vector<RecoveryIndex> recovery;
};

ForwardResult forward(const Matrix& x, const WeightStore& weights, const ModelConfig& cfg,
                      const ForwardOptions& opts = {});

// Class token (if any) followed by the linear patch projection; N x d.
Matrix embed_patches(const Matrix& patches, const WeightStore& weights, const ModelConfig& cfg);

// Dense N x d output rebuilt from the final features through every recorded stage.
Matrix recover_dense(const ForwardResult& result);

// ||cls_reduced - cls_full||_2 / ||cls_full||_2
real class_token_error(const ForwardResult& reduced, const ForwardResult& full);
// Mean of the above over inputs; the reference pass uses the same config with mode none.
real class_token_error(const WeightStore& weights, const ModelConfig& cfg, std::span<const Matrix> inputs);

}  // namespace tokxform
