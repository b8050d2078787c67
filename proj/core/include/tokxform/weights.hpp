// Copyright 2026 The tokxform Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tokxform/model_config.hpp"
#include "tokxform/numkern.hpp"

namespace tokxform {

struct Tensor {
    std::vector<std::size_t> shape;
    Matrix values;  // 1-D tensors are stored as a single row

    std::size_t numel() const noexcept { return values.size(); }
};

// Named encoder parameters (timm naming, Linear weights stored [out, in]).
//
// On disk: a UTF-8 JSON manifest
//   {"format": "tokxform-weights", "version": 1, "blob": "<file>",
//    "tensors": [{"name", "shape", "dtype": "f32", "byte_offset"}, ...]}
// next to a single little-endian float32 blob holding every tensor back to back.
class WeightStore {
public:
    void insert(std::string name, std::vector<std::size_t> shape, Matrix values);

    bool contains(const std::string& name) const { return tensors_.count(name) != 0; }
    const Tensor& at(const std::string& name) const;
    const Matrix& matrix(const std::string& name) const { return at(name).values; }
    std::span<const real> vector(const std::string& name) const { return at(name).values.data(); }

    std::vector<std::string> names() const;
    std::size_t size() const noexcept { return tensors_.size(); }
    std::size_t parameter_count() const noexcept;

    // Throws FormatError when a required tensor is missing or mis-shaped.
    void validate(const ModelConfig& cfg) const;

    // Writes <manifest> and a blob named <manifest stem>.bin beside it.
    void save(const std::filesystem::path& manifest) const;
    static WeightStore load(const std::filesystem::path& manifest);

    // Seeded N(0, 1/dim) weights, unit layernorm gains, zero layernorm shifts.
    // Values are rounded through float32 so a save/load round trip is exact.
    static WeightStore synthetic(const ModelConfig& cfg, std::uint64_t seed);

private:
    std::map<std::string, Tensor> tensors_;
};

// Names and shapes every encoder of this configuration needs.
std::vector<std::pair<std::string, std::vector<std::size_t>>> expected_tensors(const ModelConfig& cfg);

}  // namespace tokxform
