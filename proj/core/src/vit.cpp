// Copyright 2026 The tokxform Authors
// SPDX-License-Identifier: Apache-2.0

#include "tokxform/vit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tokxform {

namespace {

Matrix linear(const Matrix& x, const Matrix& weight, std::span<const real> bias) {
    Matrix y = matmul_nt(x, weight);
    add_row_vector(y, bias);
    return y;
}

Matrix column_block(const Matrix& x, std::size_t first, std::size_t width) {
    Matrix out(x.rows(), width);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto src = x.row(i).subspan(first, width);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

real mean_row_entropy(const Matrix& a) {
    if (a.rows() == 0) {
        return 0;
    }
    real total = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (real p : a.row(i)) {
            if (p > 0) {
                total -= p * std::log(p);
            }
        }
    }
    return total / static_cast<real>(a.rows());
}

real l2_norm(std::span<const real> v) {
    real s = 0;
    for (real x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

}  // namespace

BlockWeights block_weights(const WeightStore& weights, std::size_t layer) {
    const std::string p = "blocks." + std::to_string(layer) + ".";
    return BlockWeights{
        weights.vector(p + "norm1.weight"),    weights.vector(p + "norm1.bias"),
        weights.matrix(p + "attn.qkv.weight"), weights.vector(p + "attn.qkv.bias"),
        weights.matrix(p + "attn.proj.weight"), weights.vector(p + "attn.proj.bias"),
        weights.vector(p + "norm2.weight"),    weights.vector(p + "norm2.bias"),
        weights.matrix(p + "mlp.fc1.weight"),  weights.vector(p + "mlp.fc1.bias"),
        weights.matrix(p + "mlp.fc2.weight"),  weights.vector(p + "mlp.fc2.bias"),
    };
}

Matrix attention_weights(const Matrix& q, const Matrix& k, std::span<const real> scale) {
    if (scale.size() != k.rows()) {
        throw DimensionError("attention_weights: scale length " + std::to_string(scale.size()) + " for " +
                             std::to_string(k.rows()) + " keys");
    }
    Vector log_scale(scale.size());
    for (std::size_t j = 0; j < scale.size(); ++j) {
        if (!(scale[j] > 0) || !std::isfinite(scale[j])) {
            throw ContractError("attention_weights: scale entries must be positive");
        }
        log_scale[j] = std::log(scale[j]);
    }
    Matrix logits = matmul_nt(q, k);
    const real inv_sqrt = real(1) / std::sqrt(static_cast<real>(q.cols()));
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        auto r = logits.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            r[j] = r[j] * inv_sqrt + log_scale[j];
        }
    }
    return softmax_rows(logits);
}

Matrix attention_weights(const Matrix& q, const Matrix& k) {
    Matrix logits = matmul_nt(q, k);
    const real inv_sqrt = real(1) / std::sqrt(static_cast<real>(q.cols()));
    for (auto& v : logits.data()) {
        v *= inv_sqrt;
    }
    return softmax_rows(logits);
}

AttentionOutput scaled_attention(const Matrix& x, std::span<const real> scale, const BlockWeights& w,
                                 const ModelConfig& cfg) {
    const std::size_t n = x.rows();
    const std::size_t d = cfg.dim;
    const std::size_t hd = cfg.head_dim();
    if (x.cols() != d) {
        throw DimensionError("scaled_attention: token width " + std::to_string(x.cols()) + " != dim " +
                             std::to_string(d));
    }
    if (scale.size() != n) {
        throw DimensionError("scaled_attention: scale length does not match token count");
    }

    const Matrix h = layernorm(x, w.norm1_weight, w.norm1_bias, cfg.layernorm_eps);
    const Matrix qkv = linear(h, w.qkv_weight, w.qkv_bias);

    Matrix mixed(n, d);
    Matrix mean_attention(n, n);
    for (std::size_t head = 0; head < cfg.heads; ++head) {
        const Matrix q = column_block(qkv, head * hd, hd);
        const Matrix k = column_block(qkv, d + head * hd, hd);
        const Matrix v = column_block(qkv, 2 * d + head * hd, hd);
        const Matrix a = attention_weights(q, k, scale);
        const Matrix out = matmul(a, v);
        for (std::size_t i = 0; i < n; ++i) {
            const auto src = out.row(i);
            std::copy(src.begin(), src.end(), mixed.row(i).begin() + static_cast<std::ptrdiff_t>(head * hd));
        }
        add_inplace(mean_attention, a);
    }
    const real inv_heads = real(1) / static_cast<real>(cfg.heads);
    for (auto& v : mean_attention.data()) {
        v *= inv_heads;
    }

    Matrix y = linear(mixed, w.proj_weight, w.proj_bias);
    add_inplace(y, x);
    return {std::move(y), std::move(mean_attention)};
}

Matrix feed_forward(const Matrix& x, const BlockWeights& w, const ModelConfig& cfg) {
    const Matrix h = layernorm(x, w.norm2_weight, w.norm2_bias, cfg.layernorm_eps);
    Matrix y = linear(gelu(linear(h, w.fc1_weight, w.fc1_bias)), w.fc2_weight, w.fc2_bias);
    add_inplace(y, x);
    return y;
}

ForwardState initial_state(const Matrix& x, const WeightStore& weights, const ModelConfig& cfg) {
    if (x.rows() != cfg.tokens || x.cols() != cfg.dim) {
        throw DimensionError("forward: input is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                             ", model expects " + std::to_string(cfg.tokens) + "x" + std::to_string(cfg.dim));
    }
    ForwardState state;
    state.tokens = x;
    add_inplace(state.tokens, weights.matrix("pos_embed"));
    state.scale.assign(x.rows(), 1);
    if (cfg.has_class_token) {
        state.class_index = 0;
    }
    return state;
}

ForwardState block_forward(ForwardState state, std::size_t layer, const WeightStore& weights,
                           const ModelConfig& cfg, const ForwardOptions& opts) {
    if (layer >= cfg.layers) {
        throw ArgumentError("block_forward: layer " + std::to_string(layer) + " out of range");
    }
    const BlockWeights w = block_weights(weights, layer);

    LayerTrace trace;
    trace.layer = layer;
    trace.tokens_in = state.tokens.rows();

    AttentionOutput att = scaled_attention(state.tokens, state.scale, w, cfg);
    trace.attention_entropy = mean_row_entropy(att.attention);
    Matrix x = std::move(att.tokens);

    if (cfg.reduces_at(layer)) {
        Reduction r = reduce(x, att.attention, cfg.reducer, state.class_index);
        if (opts.record_recovery) {
            state.recovery.push_back(build_index(x, r.tokens));
        }
        state.scale = matvec(r.assignment, state.scale);
        if (state.class_index) {
            const auto it = std::find(r.selected.begin(), r.selected.end(), *state.class_index);
            state.class_index = static_cast<std::size_t>(it - r.selected.begin());
        }
        x = std::move(r.tokens);
        if (opts.keep_reductions) {
            r.tokens = x;
            trace.reduction = std::move(r);
        }
    }

    state.tokens = feed_forward(x, w, cfg);
    trace.tokens_out = state.tokens.rows();
    trace.scale_sum = std::accumulate(state.scale.begin(), state.scale.end(), real(0));
    state.trace.push_back(std::move(trace));
    return state;
}

ForwardResult forward(const Matrix& x, const WeightStore& weights, const ModelConfig& cfg, const ForwardOptions& opts) {
    cfg.validate();
    weights.validate(cfg);

    ForwardState state = initial_state(x, weights, cfg);
    for (std::size_t layer = 0; layer < cfg.layers; ++layer) {
        state = block_forward(std::move(state), layer, weights, cfg, opts);
    }

    ForwardResult result;
    result.features = layernorm(state.tokens, weights.vector("norm.weight"), weights.vector("norm.bias"),
                                cfg.layernorm_eps);
    if (state.class_index) {
        const auto row = result.features.row(*state.class_index);
        result.pooled.assign(row.begin(), row.end());
    } else {
        result.pooled = column_sums(result.features);
        for (auto& v : result.pooled) {
            v /= static_cast<real>(result.features.rows());
        }
    }
    result.logits = matvec(weights.matrix("head.weight"), result.pooled);
    const auto bias = weights.vector("head.bias");
    for (std::size_t i = 0; i < result.logits.size(); ++i) {
        result.logits[i] += bias[i];
    }
    result.scale = std::move(state.scale);
    result.trace = std::move(state.trace);
    result.recovery = std::move(state.recovery);
    return result;
}

Matrix embed_patches(const Matrix& patches, const WeightStore& weights, const ModelConfig& cfg) {
    if (patches.rows() != cfg.patch_tokens() || patches.cols() != cfg.patch_features()) {
        throw DimensionError("embed_patches: expected " + std::to_string(cfg.patch_tokens()) + "x" +
                             std::to_string(cfg.patch_features()) + " patches");
    }
    const Matrix projected = linear(patches, weights.matrix("patch_embed.weight"), weights.vector("patch_embed.bias"));
    if (!cfg.has_class_token) {
        return projected;
    }
    Matrix out(cfg.tokens, cfg.dim);
    const auto cls = weights.vector("cls_token");
    std::copy(cls.begin(), cls.end(), out.row(0).begin());
    std::copy(projected.data().begin(), projected.data().end(), out.row(1).begin());
    return out;
}

Matrix recover_dense(const ForwardResult& result) {
    return recover_stages(result.features, result.recovery);
}

real class_token_error(const ForwardResult& reduced, const ForwardResult& full) {
    if (reduced.pooled.size() != full.pooled.size()) {
        throw DimensionError("class_token_error: feature widths differ");
    }
    Vector diff(full.pooled.size());
    for (std::size_t i = 0; i < diff.size(); ++i) {
        diff[i] = reduced.pooled[i] - full.pooled[i];
    }
    const real denom = l2_norm(full.pooled);
    if (!(denom > 0)) {
        throw NumericError("class_token_error: reference class token has zero norm");
    }
    return l2_norm(diff) / denom;
}

real class_token_error(const WeightStore& weights, const ModelConfig& cfg, std::span<const Matrix> inputs) {
    if (!cfg.has_class_token) {
        throw ArgumentError("class_token_error: model has no class token");
    }
    if (inputs.empty()) {
        return 0;
    }
    ModelConfig reference = cfg;
    reference.reducer.mode = ReductionMode::none;
    real total = 0;
    for (const Matrix& x : inputs) {
        total += class_token_error(forward(x, weights, cfg), forward(x, weights, reference));
    }
    return total / static_cast<real>(inputs.size());
}

}  // namespace tokxform
