// Copyright 2026 The tokxform Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tokxform/model_config.hpp"
#include "tokxform/numkern.hpp"

namespace tokxform::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kBadArguments = 2;
inline constexpr int kAssertionFailed = 3;

struct RunConfig {
    std::string preset = "deit-s";  // deit-ti | deit-s | deit-b | custom
    std::optional<std::size_t> depth, dim, heads, tokens, classes, patch, channels;
    std::optional<double> mlp_ratio;
    bool no_class_token = false;

    std::optional<double> ratio, kappa, tau;
    std::optional<std::string> mode;
    std::vector<std::string> layers;  // reduce_at; {"none"} clears it

    std::uint64_t seed = 0;
    std::size_t batch = 1;
    std::string weights = "synthetic";
    std::string input = "gaussian";  // gaussian | orthogonal
    std::string out;
    std::string format;  // empty: verb default
    std::string assertion;
    std::string report;

    std::vector<double> ratios{0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<std::string> modes;  // empty: verb default
    std::vector<double> kappas{0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
    std::vector<double> taus{1, 20, 100, 150, 200, 250};
    std::size_t trials = 5;
    std::size_t warmup = 1;
    std::string dump_coefficients;
    bool timings = false;
};

// Expands the preset and applies every override. Throws ArgumentError.
ModelConfig model_config(const RunConfig& rc);

// `batch` token matrices of shape tokens x dim, seeded independently of the weights.
std::vector<Matrix> make_inputs(const ModelConfig& cfg, const std::string& kind, std::uint64_t seed,
                                std::size_t batch);

struct Tolerance {
    double target = 0;
    double tol = 0;
    bool relative = false;

    bool accepts(double value) const noexcept;
};

// "4.6±2%", "4.6+-2%" or "3.0+-0.1".
Tolerance parse_assertion(const std::string& text);

// Entry point shared by the binary and the tests; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tokxform::cli
