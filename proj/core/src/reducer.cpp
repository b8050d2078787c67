// Copyright 2026 The tokxform Authors
// SPDX-License-Identifier: Apache-2.0

#include "tokxform/reducer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <string>

namespace tokxform {

namespace {

constexpr real kStochasticTol = real(1e-9);
constexpr real kAttentionTol = real(1e-6);

Reduction reduce_eligible(const Matrix& tokens, const IndexList& selected, const ReducerConfig& cfg) {
    switch (cfg.mode) {
    case ReductionMode::transform: {
        const Matrix gated = gate_similarity(tokens, selected, cfg.kappa);
        return transform(tokens, assignment_matrix(gated, cfg.tau), selected);
    }
    case ReductionMode::prune:
        return prune_matrix(tokens, selected);
    case ReductionMode::merge: {
        // Anchors keep themselves; every other token joins its most similar anchor.
        const Matrix sims = cosine_sim(gather_rows(tokens, selected), tokens);
        std::vector<IndexList> groups(selected.size());
        std::size_t next_anchor = 0;
        for (std::size_t j = 0; j < tokens.rows(); ++j) {
            if (next_anchor < selected.size() && selected[next_anchor] == j) {
                groups[next_anchor++].push_back(j);
                continue;
            }
            std::size_t best = 0;
            for (std::size_t i = 1; i < selected.size(); ++i) {
                if (sims(i, j) > sims(best, j)) {
                    best = i;
                }
            }
            groups[best].push_back(j);
        }
        Reduction r = merge_matrix(tokens, groups);
        r.selected = selected;
        return r;
    }
    case ReductionMode::none:
        break;
    }
    return identity_reduction(tokens);
}

// Re-attach a bypassed token to a reduction computed over the remaining tokens.
Reduction attach_bypass(const Reduction& local, const Matrix& tokens, const IndexList& eligible,
                        std::size_t bypass) {
    const std::size_t n = tokens.rows();
    const std::size_t m = local.output_count() + 1;
    const std::size_t d = tokens.cols();

    Reduction out;
    out.transform = Matrix(m, n);
    out.assignment = Matrix(m, n);
    out.scale.assign(m, 0);
    out.selected.reserve(m);
    out.tokens = Matrix(m, d);

    std::size_t row = 0;
    bool placed = false;
    auto place_bypass = [&] {
        out.transform(row, bypass) = 1;
        out.assignment(row, bypass) = 1;
        out.scale[row] = 1;
        out.selected.push_back(bypass);
        const auto src = tokens.row(bypass);
        std::copy(src.begin(), src.end(), out.tokens.row(row).begin());
        ++row;
        placed = true;
    };
    for (std::size_t i = 0; i < local.output_count(); ++i) {
        const std::size_t anchor = eligible[local.selected[i]];
        if (!placed && bypass < anchor) {
            place_bypass();
        }
        for (std::size_t j = 0; j < eligible.size(); ++j) {
            out.transform(row, eligible[j]) = local.transform(i, j);
            out.assignment(row, eligible[j]) = local.assignment(i, j);
        }
        out.scale[row] = local.scale[i];
        out.selected.push_back(anchor);
        const auto src = local.tokens.row(i);
        std::copy(src.begin(), src.end(), out.tokens.row(row).begin());
        ++row;
    }
    if (!placed) {
        place_bypass();
    }
    return out;
}

}  // namespace

std::string_view to_string(ReductionMode mode) noexcept {
    switch (mode) {
    case ReductionMode::none: return "none";
    case ReductionMode::prune: return "prune";
    case ReductionMode::merge: return "merge";
    case ReductionMode::transform: return "transform";
    }
    return "unknown";
}

ReductionMode parse_mode(std::string_view text) {
    for (auto mode : {ReductionMode::none, ReductionMode::prune, ReductionMode::merge, ReductionMode::transform}) {
        if (text == to_string(mode)) {
            return mode;
        }
    }
    throw ArgumentError("unknown reduction mode '" + std::string(text) + "'");
}

void ReducerConfig::validate() const {
    if (!(keep_ratio > 0 && keep_ratio <= 1)) {
        throw ArgumentError("keep ratio must be in (0, 1], got " + std::to_string(keep_ratio));
    }
    if (!(kappa >= -1 && kappa <= 1)) {
        throw ArgumentError("kappa must be in [-1, 1], got " + std::to_string(kappa));
    }
    if (!(tau > 0) || !std::isfinite(tau)) {
        throw ArgumentError("tau must be > 0, got " + std::to_string(tau));
    }
}

Vector informativeness(const Matrix& attention) {
    if (attention.rows() != attention.cols()) {
        throw DimensionError("informativeness: attention map must be square");
    }
    const Vector rs = row_sums(attention);
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (!(std::abs(rs[i] - 1) <= kAttentionTol)) {
            throw ContractError("informativeness: attention row " + std::to_string(i) + " sums to " +
                                std::to_string(rs[i]));
        }
    }
    return column_sums(attention);
}

std::size_t reduced_count(std::size_t eligible, real keep_ratio) {
    if (!(keep_ratio > 0 && keep_ratio <= 1)) {
        throw ArgumentError("keep ratio must be in (0, 1]");
    }
    if (eligible == 0) {
        return 0;
    }
    const double raw = static_cast<double>(keep_ratio) * static_cast<double>(eligible);
    const double nearest = std::round(raw);
    const double count = std::abs(raw - nearest) <= 1e-9 * std::max(1.0, raw) ? nearest : std::ceil(raw);
    return std::clamp<std::size_t>(static_cast<std::size_t>(count), 1, eligible);
}

IndexList select_informative(std::span<const real> scores, real keep_ratio, std::optional<std::size_t> bypass_index) {
    if (bypass_index && *bypass_index >= scores.size()) {
        throw ArgumentError("select_informative: bypass index out of range");
    }
    IndexList eligible;
    Vector eligible_scores;
    eligible.reserve(scores.size());
    for (std::size_t j = 0; j < scores.size(); ++j) {
        if (bypass_index && j == *bypass_index) {
            continue;
        }
        eligible.push_back(j);
        eligible_scores.push_back(scores[j]);
    }
    const std::size_t keep = reduced_count(eligible.size(), keep_ratio);
    IndexList picked = topk_indices(eligible_scores, keep);
    for (auto& p : picked) {
        p = eligible[p];
    }
    return picked;
}

Matrix gate_similarity(const Matrix& tokens, std::span<const std::size_t> selected, real kappa) {
    Matrix sims = cosine_sim(gather_rows(tokens, selected), tokens);
    for (auto& v : sims.data()) {
        if (!(v >= kappa)) {
            v = 0;
        }
    }
    return sims;
}

Matrix assignment_matrix(const Matrix& gated, real tau) {
    return softmax_cols(gated, tau);
}

Vector scale_vector(const Matrix& assignment) {
    return row_sums(assignment);
}

Reduction transform(const Matrix& tokens, const Matrix& assignment, IndexList selected) {
    const Vector cs = column_sums(assignment);
    for (std::size_t j = 0; j < cs.size(); ++j) {
        if (!(std::abs(cs[j] - 1) <= kStochasticTol)) {
            throw ContractError("transform: assignment column " + std::to_string(j) + " sums to " +
                                std::to_string(cs[j]));
        }
    }
    return weighted_reduction(tokens, assignment, std::move(selected));
}

Reduction weighted_reduction(const Matrix& tokens, const Matrix& assignment, IndexList selected) {
    if (assignment.cols() != tokens.rows()) {
        throw DimensionError("weighted_reduction: assignment has " + std::to_string(assignment.cols()) +
                             " columns for " + std::to_string(tokens.rows()) + " tokens");
    }
    if (!selected.empty() && selected.size() != assignment.rows()) {
        throw DimensionError("weighted_reduction: selected list does not match assignment rows");
    }
    for (real v : assignment.data()) {
        if (!std::isfinite(v) || v < 0) {
            throw ContractError("weighted_reduction: assignment entries must be finite and non-negative");
        }
    }

    Reduction r;
    r.scale = scale_vector(assignment);
    r.transform = assignment;
    for (std::size_t i = 0; i < assignment.rows(); ++i) {
        if (!(r.scale[i] > 0)) {
            throw ContractError("weighted_reduction: assignment row " + std::to_string(i) + " is all zero");
        }
        for (auto& v : r.transform.row(i)) {
            v /= r.scale[i];
        }
    }
    r.assignment = assignment;
    r.selected = std::move(selected);
    r.tokens = matmul(r.transform, tokens);
    return r;
}

Reduction prune_matrix(const Matrix& tokens, std::span<const std::size_t> keep) {
    const std::size_t n = tokens.rows();
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] >= n) {
            throw ArgumentError("prune_matrix: index " + std::to_string(keep[i]) + " out of range");
        }
        if (i > 0 && keep[i] <= keep[i - 1]) {
            throw ArgumentError("prune_matrix: keep list must be strictly increasing without duplicates");
        }
    }
    Reduction r;
    r.transform = Matrix(keep.size(), n);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        r.transform(i, keep[i]) = 1;
    }
    r.assignment = r.transform;
    r.scale.assign(keep.size(), 1);
    r.selected.assign(keep.begin(), keep.end());
    r.tokens = gather_rows(tokens, keep);
    return r;
}

Reduction merge_matrix(const Matrix& tokens, const std::vector<IndexList>& groups) {
    const std::size_t n = tokens.rows();
    std::vector<int> seen(n, 0);
    for (const auto& g : groups) {
        if (g.empty()) {
            throw ArgumentError("merge_matrix: empty group");
        }
        for (std::size_t j : g) {
            if (j >= n) {
                throw ArgumentError("merge_matrix: index " + std::to_string(j) + " out of range");
            }
            if (seen[j]++) {
                throw ArgumentError("merge_matrix: token " + std::to_string(j) + " appears in more than one group");
            }
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
        throw ArgumentError("merge_matrix: groups do not cover every token");
    }

    const std::size_t m = groups.size();
    Reduction r;
    r.transform = Matrix(m, n);
    r.assignment = Matrix(m, n);
    r.scale.resize(m);
    r.selected.resize(m);
    r.tokens = Matrix(m, tokens.cols());
    for (std::size_t i = 0; i < m; ++i) {
        const auto& g = groups[i];
        const real size = static_cast<real>(g.size());
        auto y = r.tokens.row(i);
        for (std::size_t j : g) {
            r.transform(i, j) = real(1) / size;
            r.assignment(i, j) = 1;
            const auto x = tokens.row(j);
            for (std::size_t k = 0; k < y.size(); ++k) {
                y[k] += x[k];
            }
        }
        for (auto& v : y) {
            v /= size;
        }
        r.scale[i] = size;
        r.selected[i] = *std::min_element(g.begin(), g.end());
    }
    return r;
}

Reduction identity_reduction(const Matrix& tokens) {
    const std::size_t n = tokens.rows();
    Reduction r;
    r.transform = Matrix::identity(n);
    r.assignment = r.transform;
    r.scale.assign(n, 1);
    r.selected.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        r.selected[i] = i;
    }
    r.tokens = tokens;
    return r;
}

Reduction reduce(const Matrix& tokens, const Matrix& attention, const ReducerConfig& cfg,
                 std::optional<std::size_t> bypass_index) {
    cfg.validate();
    const std::size_t n = tokens.rows();
    if (attention.rows() != n || attention.cols() != n) {
        throw DimensionError("reduce: attention map does not match token count " + std::to_string(n));
    }
    if (cfg.mode == ReductionMode::none) {
        return identity_reduction(tokens);
    }
    const std::optional<std::size_t> bypass = cfg.class_token_bypass ? bypass_index : std::nullopt;
    if (bypass && *bypass >= n) {
        throw ArgumentError("reduce: bypass index out of range");
    }

    const Vector scores = informativeness(attention);
    const IndexList selected = select_informative(scores, cfg.keep_ratio, bypass);
    if (!bypass) {
        return reduce_eligible(tokens, selected, cfg);
    }

    IndexList eligible;
    eligible.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        if (j != *bypass) {
            eligible.push_back(j);
        }
    }
    IndexList local = selected;
    for (auto& s : local) {
        s -= (s > *bypass) ? 1 : 0;
    }
    const Reduction inner = reduce_eligible(gather_rows(tokens, eligible), local, cfg);
    return attach_bypass(inner, tokens, eligible, *bypass);
}

void write_transform_csv(const Reduction& r, std::ostream& out) {
    out << "row,col,value\n" << std::setprecision(std::numeric_limits<real>::max_digits10);
    for (std::size_t i = 0; i < r.transform.rows(); ++i) {
        for (std::size_t j = 0; j < r.transform.cols(); ++j) {
            out << i << ',' << j << ',' << r.transform(i, j) << '\n';
        }
    }
}

void write_scale_csv(const Reduction& r, std::ostream& out) {
    out << "row,value\n" << std::setprecision(std::numeric_limits<real>::max_digits10);
    for (std::size_t i = 0; i < r.scale.size(); ++i) {
        out << i << ',' << r.scale[i] << '\n';
    }
}

void save_coefficients(const Reduction& r, const std::filesystem::path& dir, std::string_view stem) {
    std::filesystem::create_directories(dir);
    const std::string base(stem);
    std::ofstream w(dir / (base + "_W.csv"));
    std::ofstream s(dir / (base + "_s.csv"));
    if (!w || !s) {
        throw Error("save_coefficients: cannot write to " + dir.string());
    }
    write_transform_csv(r, w);
    write_scale_csv(r, s);
}

}  // namespace tokxform
