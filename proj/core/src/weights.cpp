// Copyright 2026 The tokxform Authors
// SPDX-License-Identifier: Apache-2.0

#include "tokxform/weights.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>

#include "json.hpp"

namespace tokxform {

namespace {

using json = nlohmann::json;

constexpr const char* kFormat = "tokxform-weights";
constexpr int kVersion = 1;

std::string shape_str(const std::vector<std::size_t>& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        s += (i ? "," : "") + std::to_string(shape[i]);
    }
    return s + "]";
}

std::size_t product(const std::vector<std::size_t>& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
}

std::uint32_t to_little_endian(std::uint32_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        v = ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
    }
    return v;
}

bool is_layernorm_param(const std::string& name) {
    return name.find("norm") != std::string::npos;
}

}  // namespace

void WeightStore::insert(std::string name, std::vector<std::size_t> shape, Matrix values) {
    if (product(shape) != values.size()) {
        throw DimensionError("WeightStore::insert: " + name + " shape " + shape_str(shape) +
                             " does not match " + std::to_string(values.size()) + " values");
    }
    tensors_[std::move(name)] = Tensor{std::move(shape), std::move(values)};
}

const Tensor& WeightStore::at(const std::string& name) const {
    const auto it = tensors_.find(name);
    if (it == tensors_.end()) {
        throw FormatError("weights: missing tensor '" + name + "'");
    }
    return it->second;
}

std::vector<std::string> WeightStore::names() const {
    std::vector<std::string> out;
    out.reserve(tensors_.size());
    for (const auto& [name, _] : tensors_) {
        out.push_back(name);
    }
    return out;
}

std::size_t WeightStore::parameter_count() const noexcept {
    std::size_t n = 0;
    for (const auto& [_, t] : tensors_) {
        n += t.numel();
    }
    return n;
}

std::vector<std::pair<std::string, std::vector<std::size_t>>> expected_tensors(const ModelConfig& cfg) {
    const std::size_t d = cfg.dim;
    const std::size_t h = cfg.hidden_dim();
    std::vector<std::pair<std::string, std::vector<std::size_t>>> out;
    out.push_back({"patch_embed.weight", {d, cfg.patch_features()}});
    out.push_back({"patch_embed.bias", {d}});
    if (cfg.has_class_token) {
        out.push_back({"cls_token", {1, d}});
    }
    out.push_back({"pos_embed", {cfg.tokens, d}});
    for (std::size_t l = 0; l < cfg.layers; ++l) {
        const std::string p = "blocks." + std::to_string(l) + ".";
        out.push_back({p + "norm1.weight", {d}});
        out.push_back({p + "norm1.bias", {d}});
        out.push_back({p + "attn.qkv.weight", {3 * d, d}});
        out.push_back({p + "attn.qkv.bias", {3 * d}});
        out.push_back({p + "attn.proj.weight", {d, d}});
        out.push_back({p + "attn.proj.bias", {d}});
        out.push_back({p + "norm2.weight", {d}});
        out.push_back({p + "norm2.bias", {d}});
        out.push_back({p + "mlp.fc1.weight", {h, d}});
        out.push_back({p + "mlp.fc1.bias", {h}});
        out.push_back({p + "mlp.fc2.weight", {d, h}});
        out.push_back({p + "mlp.fc2.bias", {d}});
    }
    out.push_back({"norm.weight", {d}});
    out.push_back({"norm.bias", {d}});
    out.push_back({"head.weight", {cfg.num_classes, d}});
    out.push_back({"head.bias", {cfg.num_classes}});
    return out;
}

void WeightStore::validate(const ModelConfig& cfg) const {
    for (const auto& [name, shape] : expected_tensors(cfg)) {
        const Tensor& t = at(name);
        if (t.shape != shape) {
            throw FormatError("weights: tensor '" + name + "' has shape " + shape_str(t.shape) + ", expected " +
                              shape_str(shape));
        }
    }
}

void WeightStore::save(const std::filesystem::path& manifest) const {
    std::filesystem::path blob = manifest;
    blob.replace_extension(".bin");

    json doc;
    doc["format"] = kFormat;
    doc["version"] = kVersion;
    doc["blob"] = blob.filename().string();
    doc["tensors"] = json::array();

    std::ofstream bout(blob, std::ios::binary);
    if (!bout) {
        throw FormatError("weights: cannot write " + blob.string());
    }
    std::size_t offset = 0;
    for (const auto& [name, t] : tensors_) {
        doc["tensors"].push_back({{"name", name}, {"shape", t.shape}, {"dtype", "f32"}, {"byte_offset", offset}});
        for (real v : t.values.data()) {
            const std::uint32_t bits = to_little_endian(std::bit_cast<std::uint32_t>(static_cast<float>(v)));
            bout.write(reinterpret_cast<const char*>(&bits), sizeof bits);
        }
        offset += t.numel() * sizeof(float);
    }
    if (!bout) {
        throw FormatError("weights: short write to " + blob.string());
    }

    std::ofstream mout(manifest);
    if (!mout) {
        throw FormatError("weights: cannot write " + manifest.string());
    }
    mout << doc.dump(1) << '\n';
}

WeightStore WeightStore::load(const std::filesystem::path& manifest) {
    std::ifstream min(manifest);
    if (!min) {
        throw FormatError("weights: cannot open manifest " + manifest.string());
    }
    json doc;
    try {
        doc = json::parse(min);
    } catch (const json::parse_error& e) {
        throw FormatError("weights: manifest is not valid JSON: " + std::string(e.what()));
    }
    if (doc.value("format", "") != kFormat || doc.value("version", 0) != kVersion) {
        throw FormatError("weights: unsupported manifest format/version");
    }
    if (!doc.contains("blob") || !doc["blob"].is_string() || !doc.contains("tensors") ||
        !doc["tensors"].is_array()) {
        throw FormatError("weights: manifest needs 'blob' and 'tensors'");
    }

    const std::filesystem::path blob = manifest.parent_path() / doc["blob"].get<std::string>();
    std::ifstream bin(blob, std::ios::binary);
    if (!bin) {
        throw FormatError("weights: cannot open blob " + blob.string());
    }
    const std::vector<char> bytes((std::istreambuf_iterator<char>(bin)), std::istreambuf_iterator<char>());

    struct Span {
        std::size_t begin, end;
        std::string name;
    };
    std::vector<Span> spans;
    WeightStore store;
    for (const auto& entry : doc["tensors"]) {
        std::string name;
        std::vector<std::size_t> shape;
        std::size_t offset = 0;
        try {
            name = entry.at("name").get<std::string>();
            shape = entry.at("shape").get<std::vector<std::size_t>>();
            offset = entry.at("byte_offset").get<std::size_t>();
            if (entry.at("dtype").get<std::string>() != "f32") {
                throw FormatError("weights: tensor '" + name + "' has unsupported dtype");
            }
        } catch (const json::exception& e) {
            throw FormatError("weights: malformed tensor entry: " + std::string(e.what()));
        }
        if (store.contains(name)) {
            throw FormatError("weights: duplicate tensor '" + name + "'");
        }
        const std::size_t count = product(shape);
        const std::size_t end = offset + count * sizeof(float);
        if (end > bytes.size()) {
            throw FormatError("weights: tensor '" + name + "' runs past the end of the blob");
        }
        std::vector<real> values(count);
        for (std::size_t i = 0; i < count; ++i) {
            std::uint32_t bits;
            std::memcpy(&bits, bytes.data() + offset + i * sizeof bits, sizeof bits);
            values[i] = static_cast<real>(std::bit_cast<float>(to_little_endian(bits)));
        }
        const std::size_t rows = shape.size() >= 2 ? shape[0] : 1;
        const std::size_t cols = rows ? count / rows : 0;
        store.insert(name, shape, Matrix(rows, cols, std::move(values)));
        spans.push_back({offset, end, name});
    }

    std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) { return a.begin < b.begin; });
    std::size_t covered = 0;
    for (std::size_t i = 0; i < spans.size(); ++i) {
        if (i > 0 && spans[i].begin < spans[i - 1].end) {
            throw FormatError("weights: tensors '" + spans[i - 1].name + "' and '" + spans[i].name + "' overlap");
        }
        covered += spans[i].end - spans[i].begin;
    }
    if (covered != bytes.size()) {
        throw FormatError("weights: blob is " + std::to_string(bytes.size()) + " bytes but manifest describes " +
                          std::to_string(covered));
    }
    return store;
}

WeightStore WeightStore::synthetic(const ModelConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(cfg.dim)));
    WeightStore store;
    for (auto& [name, shape] : expected_tensors(cfg)) {
        const std::size_t count = product(shape);
        const std::size_t rows = shape.size() >= 2 ? shape[0] : 1;
        Matrix values(rows, count / rows);
        if (is_layernorm_param(name)) {
            const bool gain = name.ends_with(".weight");
            std::fill(values.data().begin(), values.data().end(), gain ? real(1) : real(0));
        } else {
            for (auto& v : values.data()) {
                v = static_cast<real>(static_cast<float>(normal(rng)));
            }
        }
        store.insert(name, shape, std::move(values));
    }
    return store;
}

}  // namespace tokxform
