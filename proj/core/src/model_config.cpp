// Copyright 2026 The tokxform Authors
// SPDX-License-Identifier: Apache-2.0

#include "tokxform/model_config.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tokxform {

std::size_t ModelConfig::hidden_dim() const noexcept {
    return static_cast<std::size_t>(std::llround(mlp_ratio * static_cast<real>(dim)));
}

bool ModelConfig::reduces_at(std::size_t layer) const noexcept {
    return reducer.mode != ReductionMode::none &&
           std::find(reduce_at.begin(), reduce_at.end(), layer) != reduce_at.end();
}

void ModelConfig::validate() const {
    if (layers == 0 || dim == 0 || heads == 0) {
        throw ArgumentError("model config: layers, dim and heads must be positive");
    }
    if (dim % heads != 0) {
        throw ArgumentError("model config: dim " + std::to_string(dim) + " is not divisible by " +
                            std::to_string(heads) + " heads");
    }
    if (!(mlp_ratio > 0) || hidden_dim() == 0) {
        throw ArgumentError("model config: mlp_ratio must be positive");
    }
    if (tokens < (has_class_token ? 2u : 1u)) {
        throw ArgumentError("model config: need at least one patch token");
    }
    for (std::size_t layer : reduce_at) {
        if (layer >= layers) {
            throw ArgumentError("model config: reduction layer " + std::to_string(layer) + " is outside [0, " +
                                std::to_string(layers) + ")");
        }
    }
    if (has_class_token && !reducer.class_token_bypass && reducer.mode != ReductionMode::none &&
        !reduce_at.empty()) {
        throw ArgumentError("model config: the class-token readout requires class_token_bypass");
    }
    if (num_classes == 0 || patch_size == 0 || channels == 0) {
        throw ArgumentError("model config: num_classes, patch_size and channels must be positive");
    }
    reducer.validate();
}

ModelConfig ModelConfig::deit_tiny() {
    ModelConfig cfg;
    cfg.dim = 192;
    cfg.heads = 3;
    return cfg;
}

ModelConfig ModelConfig::deit_small() {
    return ModelConfig{};
}

ModelConfig ModelConfig::deit_base() {
    ModelConfig cfg;
    cfg.dim = 768;
    cfg.heads = 12;
    return cfg;
}

ModelConfig ModelConfig::preset(std::string_view name) {
    if (name == "deit-ti") return deit_tiny();
    if (name == "deit-s") return deit_small();
    if (name == "deit-b") return deit_base();
    throw ArgumentError("unknown preset '" + std::string(name) + "' (expected deit-ti, deit-s or deit-b)");
}

}  // namespace tokxform
