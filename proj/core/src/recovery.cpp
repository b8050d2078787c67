// Copyright 2026 The tokxform Authors
// SPDX-License-Identifier: Apache-2.0

#include "tokxform/recovery.hpp"

#include <string>

namespace tokxform {

RecoveryIndex build_index(const Matrix& original, const Matrix& reduced) {
    if (original.cols() != reduced.cols()) {
        throw DimensionError("build_index: token widths differ");
    }
    if (reduced.rows() == 0 && original.rows() != 0) {
        throw ArgumentError("build_index: no reduced tokens to recover from");
    }
    RecoveryIndex idx;
    idx.source_count = reduced.rows();
    idx.indices.resize(original.rows());
    for (std::size_t m = 0; m < original.rows(); ++m) {
        const auto x = original.row(m);
        std::size_t best = 0;
        real best_dist = 0;
        for (std::size_t i = 0; i < reduced.rows(); ++i) {
            const auto y = reduced.row(i);
            real dist = 0;
            for (std::size_t k = 0; k < x.size(); ++k) {
                const real diff = x[k] - y[k];
                dist += diff * diff;
            }
            if (i == 0 || dist < best_dist) {
                best = i;
                best_dist = dist;
            }
        }
        idx.indices[m] = best;
    }
    return idx;
}

Matrix recover(const Matrix& reduced, const RecoveryIndex& index) {
    if (reduced.rows() < index.source_count) {
        throw ContractError("recover: index built for " + std::to_string(index.source_count) +
                            " tokens, got " + std::to_string(reduced.rows()));
    }
    for (std::size_t i : index.indices) {
        if (i >= reduced.rows()) {
            throw ContractError("recover: index " + std::to_string(i) + " out of range");
        }
    }
    return gather_rows(reduced, index.indices);
}

RecoveryIndex compose(const RecoveryIndex& earlier, const RecoveryIndex& later) {
    if (later.size() != earlier.source_count) {
        throw DimensionError("compose: stage sizes do not chain");
    }
    RecoveryIndex out;
    out.source_count = later.source_count;
    out.indices.resize(earlier.size());
    for (std::size_t m = 0; m < earlier.size(); ++m) {
        out.indices[m] = later.indices[earlier.indices[m]];
    }
    return out;
}

Matrix recover_stages(const Matrix& reduced, std::span<const RecoveryIndex> stages) {
    Matrix out = reduced;
    for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
        out = recover(out, *it);
    }
    return out;
}

}  // namespace tokxform
