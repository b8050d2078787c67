// Copyright 2026 The tokxform Authors
// SPDX-License-Identifier: Apache-2.0

#include "tokxform/flops.hpp"

#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "tokxform/reducer.hpp"

namespace tokxform {

BlockCost block_cost(std::size_t tokens, std::size_t dim, double mlp_ratio) {
    const double n = static_cast<double>(tokens);
    const double d = static_cast<double>(dim);
    return BlockCost{4 * n * d * d + 2 * n * n * d, 2 * mlp_ratio * n * d * d};
}

std::vector<std::size_t> token_trajectory(const ModelConfig& cfg) {
    cfg.validate();
    const std::size_t extra = cfg.has_class_token && cfg.reducer.class_token_bypass ? 1 : 0;
    std::vector<std::size_t> counts{cfg.tokens};
    for (std::size_t layer = 0; layer < cfg.layers; ++layer) {
        std::size_t n = counts.back();
        if (cfg.reduces_at(layer)) {
            n = reduced_count(n - extra, cfg.reducer.keep_ratio) + extra;
        }
        counts.push_back(n);
    }
    return counts;
}

CostReport model_cost(const ModelConfig& cfg) {
    const std::vector<std::size_t> counts = token_trajectory(cfg);
    const std::size_t extra = cfg.has_class_token && cfg.reducer.class_token_bypass ? 1 : 0;
    const double d = static_cast<double>(cfg.dim);
    const double mlp = static_cast<double>(cfg.mlp_ratio);

    CostReport report;
    report.patch_embed = static_cast<double>(cfg.patch_tokens()) * d * static_cast<double>(cfg.patch_features());
    report.head = d * static_cast<double>(cfg.num_classes);
    double blocks = 0;
    for (std::size_t layer = 0; layer < cfg.layers; ++layer) {
        LayerCost lc;
        lc.layer = layer;
        lc.tokens_in = counts[layer];
        lc.tokens_out = counts[layer + 1];
        lc.attention = block_cost(lc.tokens_in, cfg.dim, mlp).attention;
        lc.ffn = block_cost(lc.tokens_out, cfg.dim, mlp).ffn;
        if (cfg.reduces_at(layer) && cfg.reducer.mode == ReductionMode::transform) {
            const double m = static_cast<double>(lc.tokens_out - extra);
            const double n = static_cast<double>(lc.tokens_in - extra);
            lc.reduction = 2 * m * n * d;
        } else if (cfg.reduces_at(layer) && cfg.reducer.mode == ReductionMode::merge) {
            // similarity only; group means are additions
            lc.reduction = static_cast<double>(lc.tokens_out - extra) * static_cast<double>(lc.tokens_in - extra) * d;
        }
        blocks += lc.attention + lc.ffn;
        report.reduction_overhead += lc.reduction;
        report.per_layer.push_back(lc);
    }
    report.total_macs = blocks + report.patch_embed + report.head + report.reduction_overhead;
    return report;
}

std::string CostReport::to_json() const {
    nlohmann::json doc;
    doc["unit"] = "MAC";
    doc["total_gflops"] = total_gflops();
    doc["total_macs"] = total_macs;
    doc["patch_embed"] = patch_embed;
    doc["head"] = head;
    doc["reduction_overhead"] = reduction_overhead;
    doc["overhead_fraction"] = overhead_fraction();
    doc["per_layer"] = nlohmann::json::array();
    for (const auto& l : per_layer) {
        doc["per_layer"].push_back({{"layer", l.layer},
                                    {"tokens_in", l.tokens_in},
                                    {"tokens_out", l.tokens_out},
                                    {"attn_cost", l.attention},
                                    {"ffn_cost", l.ffn},
                                    {"reduction_cost", l.reduction}});
    }
    return doc.dump(2);
}

std::string CostReport::to_table() const {
    std::ostringstream os;
    os << std::fixed;
    os << "layer  tokens_in  tokens_out  attn_MMAC   ffn_MMAC  reduce_MMAC\n";
    for (const auto& l : per_layer) {
        os << std::setw(5) << l.layer << std::setw(11) << l.tokens_in << std::setw(12) << l.tokens_out
           << std::setprecision(2) << std::setw(11) << l.attention * 1e-6 << std::setw(11) << l.ffn * 1e-6
           << std::setw(13) << l.reduction * 1e-6 << '\n';
    }
    os << std::setprecision(2);
    os << "patch embed      " << patch_embed * 1e-6 << " MMAC\n";
    os << "head             " << head * 1e-6 << " MMAC\n";
    os << "reduction        " << reduction_overhead * 1e-6 << " MMAC (" << std::setprecision(2)
       << overhead_fraction() * 100 << "% of total)\n";
    os << std::setprecision(3);
    os << "total            " << total_gflops() << " GFLOPs (1 FLOP = 1 multiply-accumulate)\n";
    return os.str();
}

}  // namespace tokxform
