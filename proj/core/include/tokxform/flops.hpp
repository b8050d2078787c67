// Copyright 2026 The tokxform Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "tokxform/model_config.hpp"

namespace tokxform {

// All costs are multiply-accumulate counts (1 MAC = 1 FLOP). Bias adds, norms,
// softmax and activations are not counted.

struct BlockCost {
    double attention = 0;  // 4 N d^2 + 2 N^2 d
    double ffn = 0;        // 2 mlp_ratio N d^2
};

BlockCost block_cost(std::size_t tokens, std::size_t dim, double mlp_ratio);

struct LayerCost {
    std::size_t layer = 0;
    std::size_t tokens_in = 0;   // attention runs at this count
    std::size_t tokens_out = 0;  // FFN runs at this count
    double attention = 0;
    double ffn = 0;
    double reduction = 0;  // similarity + weighted sum, M N_eligible d each
};

struct CostReport {
    std::vector<LayerCost> per_layer;
    double patch_embed = 0;
    double head = 0;
    double reduction_overhead = 0;
    double total_macs = 0;

    double total_gflops() const noexcept { return total_macs / 1e9; }
    double overhead_fraction() const noexcept { return total_macs > 0 ? reduction_overhead / total_macs : 0; }

    std::string to_json() const;
    std::string to_table() const;
};

// Token count entering each layer followed by the count leaving the last one
// (layers + 1 entries), following reduce_at and the keep ratio.
std::vector<std::size_t> token_trajectory(const ModelConfig& cfg);

CostReport model_cost(const ModelConfig& cfg);

}  // namespace tokxform
