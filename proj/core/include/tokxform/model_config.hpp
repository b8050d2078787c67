// Copyright 2026 The tokxform Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "tokxform/reducer.hpp"

namespace tokxform {

// Encoder shape plus the reduction schedule applied to it.
struct ModelConfig {
    std::size_t layers = 12;
    std::size_t dim = 384;
    std::size_t heads = 6;
    real mlp_ratio = 4;
    std::size_t tokens = 197;  // patch tokens plus the class token, if any
    bool has_class_token = true;
    std::vector<std::size_t> reduce_at{3, 6, 9};  // 0-indexed layers
    ReducerConfig reducer;

    std::size_t patch_size = 16;
    std::size_t channels = 3;
    std::size_t num_classes = 1000;
    real layernorm_eps = real(1e-6);

    std::size_t head_dim() const noexcept { return heads ? dim / heads : 0; }
    std::size_t hidden_dim() const noexcept;
    std::size_t patch_tokens() const noexcept { return tokens - (has_class_token ? 1 : 0); }
    std::size_t patch_features() const noexcept { return patch_size * patch_size * channels; }
    bool reduces_at(std::size_t layer) const noexcept;

    void validate() const;

    static ModelConfig deit_tiny();
    static ModelConfig deit_small();
    static ModelConfig deit_base();
    // "deit-ti", "deit-s", "deit-b"; throws ArgumentError otherwise.
    static ModelConfig preset(std::string_view name);
};

}  // namespace tokxform
