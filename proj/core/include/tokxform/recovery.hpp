// Copyright 2026 The tokxform Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "tokxform/numkern.hpp"

namespace tokxform {

// For each of N original tokens, the row of the reduced set it is recovered from.
struct RecoveryIndex {
    IndexList indices;        // length N, each < source_count
    std::size_t source_count = 0;  // M

    std::size_t size() const noexcept { return indices.size(); }
    bool operator==(const RecoveryIndex&) const = default;
};

// indices[m] = argmin_i ||original_m - reduced_i||_2, ties to the lowest i.
RecoveryIndex build_index(const Matrix& original, const Matrix& reduced);

// Row m of the result is row index.indices[m] of `reduced`.
// Throws ContractError if `reduced` has fewer rows than index.source_count.
Matrix recover(const Matrix& reduced, const RecoveryIndex& index);

// Index equivalent to recovering with `later` and then `earlier`:
// result[m] = later.indices[earlier.indices[m]].
RecoveryIndex compose(const RecoveryIndex& earlier, const RecoveryIndex& later);

// Applies per-stage indices in reverse stage order.
Matrix recover_stages(const Matrix& reduced, std::span<const RecoveryIndex> stages);

}  // namespace tokxform
