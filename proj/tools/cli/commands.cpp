// Copyright 2026 The tokxform Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tokxform/flops.hpp"
#include "tokxform/vit.hpp"

namespace tokxform::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct AssertionFailure : Error {
    using Error::Error;
};

// Flat JSON objects as CLI11 config input; flags given on the command line win.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        json j;
        for (const CLI::Option* opt : app->get_options({})) {
            if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
            const std::string name = opt->get_lnames()[0];
            if (opt->count() > 0) {
                j[name] = opt->results().size() == 1 ? json(opt->results()[0]) : json(opt->results());
            } else if (default_also && !opt->get_default_str().empty()) {
                j[name] = opt->get_default_str();
            }
        }
        return j.dump(2);
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json j;
        try {
            j = json::parse(input);
        } catch (const json::exception& e) {
            throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConversionError("config must be a JSON object");
        std::vector<CLI::ConfigItem> items;
        for (auto it = j.begin(); it != j.end(); ++it) {
            CLI::ConfigItem item;
            item.name = it.key();
            if (it->is_array()) {
                for (const auto& v : *it) item.inputs.push_back(scalar(it.key(), v));
            } else {
                item.inputs.push_back(scalar(it.key(), *it));
            }
            items.push_back(std::move(item));
        }
        return items;
    }

private:
    static std::string scalar(const std::string& key, const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number()) return v.dump();
        throw CLI::ConversionError("config key '" + key + "' must be a scalar or a flat array");
    }
};

// Shortest round-trip text for a double.
std::string num(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::size_t parse_index(const std::string& s) {
    std::size_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ArgumentError("--layers: '" + s + "' is not a layer index");
    }
    return v;
}

WeightStore load_weights(const RunConfig& rc, const ModelConfig& cfg) {
    if (rc.weights == "synthetic") return WeightStore::synthetic(cfg, rc.seed);
    WeightStore w = WeightStore::load(rc.weights);
    w.validate(cfg);
    return w;
}

json config_json(const RunConfig& rc, const ModelConfig& cfg) {
    return {{"preset", rc.preset},
            {"layers", cfg.layers},
            {"dim", cfg.dim},
            {"heads", cfg.heads},
            {"mlp_ratio", cfg.mlp_ratio},
            {"tokens", cfg.tokens},
            {"class_token", cfg.has_class_token},
            {"reduce_at", cfg.reduce_at},
            {"mode", to_string(cfg.reducer.mode)},
            {"ratio", cfg.reducer.keep_ratio},
            {"kappa", cfg.reducer.kappa},
            {"tau", cfg.reducer.tau},
            {"seed", rc.seed},
            {"batch", rc.batch},
            {"weights", rc.weights},
            {"input", rc.input}};
}

// Writes to --out when given, otherwise to the command's stream.
void emit(const RunConfig& rc, std::ostream& out, const std::string& text) {
    if (rc.out.empty()) {
        out << text;
        return;
    }
    const fs::path path(rc.out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + rc.out);
    f << text;
}

std::string format_or(const RunConfig& rc, const std::string& fallback) {
    return rc.format.empty() ? fallback : rc.format;
}

std::vector<ReductionMode> modes_or(const RunConfig& rc, std::vector<ReductionMode> fallback) {
    if (rc.modes.empty()) return fallback;
    std::vector<ReductionMode> out;
    for (const auto& m : rc.modes) out.push_back(parse_mode(m));
    return out;
}

std::vector<double> sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<ForwardResult> reference_runs(const std::vector<Matrix>& inputs, const WeightStore& w,
                                          ModelConfig cfg) {
    cfg.reducer.mode = ReductionMode::none;
    std::vector<ForwardResult> out;
    for (const auto& x : inputs) out.push_back(forward(x, w, cfg));
    return out;
}

real mean_error(const std::vector<Matrix>& inputs, const std::vector<ForwardResult>& reference,
                const WeightStore& w, const ModelConfig& cfg) {
    if (!cfg.has_class_token) throw ArgumentError("class-token error needs a model with a class token");
    real total = 0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        total += class_token_error(forward(inputs[i], w, cfg), reference[i]);
    }
    return total / static_cast<real>(inputs.size());
}

int cmd_run(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    const ModelConfig cfg = model_config(rc);
    const WeightStore w = load_weights(rc, cfg);
    const auto inputs = make_inputs(cfg, rc.input, rc.seed, rc.batch);
    const bool want_error = rc.report == "class-token-error";
    if (!rc.report.empty() && !want_error) throw ArgumentError("run: unknown report '" + rc.report + "'");
    std::vector<ForwardResult> reference;
    if (want_error) reference = reference_runs(inputs, w, cfg);

    const CostReport cost = model_cost(cfg);
    json doc{{"command", "run"},
             {"config", config_json(rc, cfg)},
             {"macs", cost.total_macs},
             {"gflops", cost.total_gflops()},
             {"inputs", json::array()}};
    std::ostringstream csv;
    csv << "input,layer,tokens_in,tokens_out,attention_entropy,scale_sum\n";

    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const bool dump = i == 0 && !rc.dump_coefficients.empty();
        const auto t0 = std::chrono::steady_clock::now();
        const ForwardResult r = forward(inputs[i], w, cfg, {.keep_reductions = dump});
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

        json trace = json::array();
        for (const auto& t : r.trace) {
            trace.push_back({{"layer", t.layer},
                             {"tokens_in", t.tokens_in},
                             {"tokens_out", t.tokens_out},
                             {"attention_entropy", t.attention_entropy},
                             {"scale_sum", t.scale_sum}});
            csv << i << ',' << t.layer << ',' << t.tokens_in << ',' << t.tokens_out << ','
                << num(t.attention_entropy) << ',' << num(t.scale_sum) << '\n';
            if (dump && t.reduction) {
                save_coefficients(*t.reduction, rc.dump_coefficients, "layer" + std::to_string(t.layer));
            }
        }
        json entry{{"index", i}, {"logits", r.logits}, {"trace", trace}};
        if (want_error) entry["class_token_error"] = class_token_error(r, reference[i]);
        if (rc.timings) entry["forward_ms"] = ms;
        doc["inputs"].push_back(std::move(entry));
    }

    const std::string fmt = format_or(rc, "json");
    if (fmt == "table") throw ArgumentError("run: --format must be csv or json");
    emit(rc, out, fmt == "csv" ? csv.str() : doc.dump(2) + "\n");
    if (!rc.dump_coefficients.empty()) err << "coefficients written to " << rc.dump_coefficients << '\n';
    return kOk;
}

int cmd_flops(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    const ModelConfig cfg = model_config(rc);
    const CostReport cost = model_cost(cfg);
    const std::string fmt = format_or(rc, "table");
    if (fmt == "json") {
        emit(rc, out, cost.to_json() + "\n");
    } else if (fmt == "csv") {
        std::ostringstream os;
        os << "layer,tokens_in,tokens_out,attn_macs,ffn_macs,reduction_macs\n";
        for (const auto& l : cost.per_layer) {
            os << l.layer << ',' << l.tokens_in << ',' << l.tokens_out << ',' << num(l.attention) << ','
               << num(l.ffn) << ',' << num(l.reduction) << '\n';
        }
        emit(rc, out, os.str());
    } else {
        emit(rc, out, cost.to_table());
    }
    if (!rc.assertion.empty()) {
        const Tolerance t = parse_assertion(rc.assertion);
        const double g = cost.total_gflops();
        if (!t.accepts(g)) {
            throw AssertionFailure("assert failed: " + num(g) + " GFLOPs outside " + rc.assertion);
        }
        err << "assert ok: " << num(g) << " GFLOPs within " << rc.assertion << '\n';
    }
    return kOk;
}

int cmd_compare(const RunConfig& rc, std::ostream& out, std::ostream&) {
    if (!rc.report.empty() && rc.report != "class-token-error") {
        throw ArgumentError("compare: unknown report '" + rc.report + "'");
    }
    const ModelConfig base = model_config(rc);
    const WeightStore w = load_weights(rc, base);
    const auto inputs = make_inputs(base, rc.input, rc.seed, rc.batch);
    const auto reference = reference_runs(inputs, w, base);
    const auto modes = modes_or(rc, {ReductionMode::prune, ReductionMode::merge, ReductionMode::transform});

    std::ostringstream csv;
    csv << "mode,ratio,class_token_error,gflops\n";
    json rows = json::array();
    for (ReductionMode mode : modes) {
        for (double ratio : sorted(rc.ratios)) {
            ModelConfig cfg = base;
            cfg.reducer.mode = mode;
            cfg.reducer.keep_ratio = ratio;
            cfg.validate();
            const real e = mean_error(inputs, reference, w, cfg);
            const double g = model_cost(cfg).total_gflops();
            csv << to_string(mode) << ',' << num(ratio) << ',' << num(e) << ',' << num(g) << '\n';
            rows.push_back({{"mode", to_string(mode)}, {"ratio", ratio}, {"class_token_error", e}, {"gflops", g}});
        }
    }
    const std::string fmt = format_or(rc, "csv");
    if (fmt == "table") throw ArgumentError("compare: --format must be csv or json");
    emit(rc, out, fmt == "csv" ? csv.str() : json{{"command", "compare"}, {"config", config_json(rc, base)}, {"rows", rows}}.dump(2) + "\n");
    return kOk;
}

int cmd_sweep(const RunConfig& rc, std::ostream& out, std::ostream&) {
    const ModelConfig base = model_config(rc);
    const WeightStore w = load_weights(rc, base);
    const auto inputs = make_inputs(base, rc.input, rc.seed, rc.batch);
    // validate the whole grid before running anything
    std::vector<ModelConfig> cells;
    for (double kappa : sorted(rc.kappas)) {
        for (double tau : sorted(rc.taus)) {
            ModelConfig cfg = base;
            cfg.reducer.kappa = kappa;
            cfg.reducer.tau = tau;
            cfg.validate();
            cells.push_back(cfg);
        }
    }
    const auto reference = reference_runs(inputs, w, base);

    std::ostringstream csv;
    csv << "kappa,tau,ratio,mode,class_token_error\n";
    json rows = json::array();
    for (const auto& cfg : cells) {
        const real e = mean_error(inputs, reference, w, cfg);
        const auto& r = cfg.reducer;
        csv << num(r.kappa) << ',' << num(r.tau) << ',' << num(r.keep_ratio) << ',' << to_string(r.mode) << ','
            << num(e) << '\n';
        rows.push_back({{"kappa", r.kappa}, {"tau", r.tau}, {"ratio", r.keep_ratio}, {"mode", to_string(r.mode)},
                        {"class_token_error", e}});
    }
    const std::string fmt = format_or(rc, "csv");
    if (fmt == "table") throw ArgumentError("sweep: --format must be csv or json");
    emit(rc, out, fmt == "csv" ? csv.str() : json{{"command", "sweep"}, {"config", config_json(rc, base)}, {"rows", rows}}.dump(2) + "\n");
    return kOk;
}

int cmd_bench(const RunConfig& rc, std::ostream& out, std::ostream&) {
    if (rc.trials == 0) throw ArgumentError("bench: --trials must be at least 1");
    const ModelConfig base = model_config(rc);
    const WeightStore w = load_weights(rc, base);
    const auto inputs = make_inputs(base, rc.input, rc.seed, rc.batch);
    const auto modes = modes_or(rc, {ReductionMode::none, ReductionMode::transform});

    json results = json::array();
    std::optional<double> none_ips, transform_ips;
    std::ostringstream csv;
    csv << "mode,tokens_final,median_ips,trials,macs\n";
    for (ReductionMode mode : modes) {
        ModelConfig cfg = base;
        cfg.reducer.mode = mode;
        cfg.validate();
        std::size_t tokens_final = 0;
        auto once = [&] {
            for (const auto& x : inputs) tokens_final = forward(x, w, cfg).trace.back().tokens_out;
        };
        for (std::size_t i = 0; i < rc.warmup; ++i) once();
        std::vector<double> ips;
        for (std::size_t i = 0; i < rc.trials; ++i) {
            const auto t0 = std::chrono::steady_clock::now();
            once();
            const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            ips.push_back(static_cast<double>(inputs.size()) / s);
        }
        std::vector<double> order = sorted(ips);
        const std::size_t n = order.size();
        const double median = n % 2 ? order[n / 2] : 0.5 * (order[n / 2 - 1] + order[n / 2]);
        const double macs = model_cost(cfg).total_macs;
        if (mode == ReductionMode::none) none_ips = median;
        if (mode == ReductionMode::transform) transform_ips = median;
        results.push_back({{"mode", to_string(mode)},
                           {"tokens_final", tokens_final},
                           {"median_ips", median},
                           {"trials", rc.trials},
                           {"samples_ips", ips},
                           {"macs", macs},
                           {"gflops", macs / 1e9}});
        csv << to_string(mode) << ',' << tokens_final << ',' << num(median) << ',' << rc.trials << ','
            << num(macs) << '\n';
    }
    json doc{{"command", "bench"}, {"config", config_json(rc, base)}, {"warmup", rc.warmup}, {"results", results}};
    if (none_ips && transform_ips) doc["speedup"] = *transform_ips / *none_ips;
    const std::string fmt = format_or(rc, "json");
    if (fmt == "table") throw ArgumentError("bench: --format must be csv or json");
    emit(rc, out, fmt == "csv" ? csv.str() : doc.dump(2) + "\n");
    return kOk;
}

int cmd_gen_weights(const RunConfig& rc, std::ostream& out, std::ostream&) {
    if (rc.out.empty()) throw ArgumentError("gen-weights: --out <manifest.json> is required");
    const ModelConfig cfg = model_config(rc);
    const WeightStore w = WeightStore::synthetic(cfg, rc.seed);
    const fs::path path(rc.out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    w.save(path);
    out << "wrote " << w.size() << " tensors, " << w.parameter_count() << " parameters to " << rc.out << '\n';
    return kOk;
}

}  // namespace

ModelConfig model_config(const RunConfig& rc) {
    ModelConfig cfg = rc.preset == "custom" ? ModelConfig{} : ModelConfig::preset(rc.preset);
    if (rc.depth) cfg.layers = *rc.depth;
    if (rc.dim) cfg.dim = *rc.dim;
    if (rc.heads) cfg.heads = *rc.heads;
    if (rc.tokens) cfg.tokens = *rc.tokens;
    if (rc.classes) cfg.num_classes = *rc.classes;
    if (rc.patch) cfg.patch_size = *rc.patch;
    if (rc.channels) cfg.channels = *rc.channels;
    if (rc.mlp_ratio) cfg.mlp_ratio = *rc.mlp_ratio;
    if (rc.no_class_token) cfg.has_class_token = false;
    if (rc.ratio) cfg.reducer.keep_ratio = *rc.ratio;
    if (rc.kappa) cfg.reducer.kappa = *rc.kappa;
    if (rc.tau) cfg.reducer.tau = *rc.tau;
    if (rc.mode) cfg.reducer.mode = parse_mode(*rc.mode);
    if (!rc.layers.empty()) {
        cfg.reduce_at.clear();
        if (!(rc.layers.size() == 1 && rc.layers[0] == "none")) {
            for (const auto& s : rc.layers) cfg.reduce_at.push_back(parse_index(s));
        }
    }
    cfg.validate();
    return cfg;
}

std::vector<Matrix> make_inputs(const ModelConfig& cfg, const std::string& kind, std::uint64_t seed,
                                std::size_t batch) {
    if (batch == 0) throw ArgumentError("--batch must be at least 1");
    if (kind != "gaussian" && kind != "orthogonal") throw ArgumentError("unknown input kind '" + kind + "'");
    if (kind == "orthogonal" && cfg.tokens > cfg.dim) {
        throw ArgumentError("orthogonal inputs need tokens <= dim");
    }
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> g(0, 1 / std::sqrt(static_cast<double>(cfg.dim)));
    std::vector<Matrix> out;
    for (std::size_t b = 0; b < batch; ++b) {
        Matrix x(cfg.tokens, cfg.dim);
        for (auto& v : x.data()) v = g(rng);
        if (kind == "orthogonal") {
            // modified Gram-Schmidt, run twice for stability
            for (std::size_t i = 0; i < x.rows(); ++i) {
                auto xi = x.row(i);
                for (int pass = 0; pass < 2; ++pass) {
                    for (std::size_t j = 0; j < i; ++j) {
                        auto xj = x.row(j);
                        real d = 0;
                        for (std::size_t k = 0; k < x.cols(); ++k) d += xi[k] * xj[k];
                        for (std::size_t k = 0; k < x.cols(); ++k) xi[k] -= d * xj[k];
                    }
                }
                real n = 0;
                for (real v : xi) n += v * v;
                n = std::sqrt(n);
                if (n == 0) throw NumericError("degenerate input during orthogonalisation");
                for (auto& v : xi) v /= n;
            }
        }
        out.push_back(std::move(x));
    }
    return out;
}

bool Tolerance::accepts(double value) const noexcept {
    const double allowed = relative ? std::abs(target) * tol : tol;
    return std::abs(value - target) <= allowed;
}

Tolerance parse_assertion(const std::string& text) {
    std::string sep = "\xC2\xB1";  // ±
    std::size_t at = text.find(sep);
    if (at == std::string::npos) {
        sep = "+-";
        at = text.find(sep);
    }
    if (at == std::string::npos) throw ArgumentError("--assert expects target±tol, got '" + text + "'");
    Tolerance t;
    std::string tol = text.substr(at + sep.size());
    if (!tol.empty() && tol.back() == '%') {
        t.relative = true;
        tol.pop_back();
    }
    try {
        std::size_t used = 0;
        t.target = std::stod(text.substr(0, at), &used);
        if (used != at) throw std::invalid_argument("target");
        t.tol = std::stod(tol, &used);
        if (used != tol.size()) throw std::invalid_argument("tol");
    } catch (const std::logic_error&) {
        throw ArgumentError("--assert expects target±tol, got '" + text + "'");
    }
    if (t.tol < 0) throw ArgumentError("--assert tolerance must be non-negative");
    if (t.relative) t.tol /= 100;
    return t;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"tokxform: token reduction experiments on a minimal ViT", "tokxform"};
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON file of flag values; command-line flags override it");
    app.require_subcommand(1);

    RunConfig rc;
    const std::vector<std::string> mode_names{"none", "prune", "merge", "transform"};

    app.add_option("--preset", rc.preset, "deit-ti, deit-s, deit-b or custom")
        ->check(CLI::IsMember({"deit-ti", "deit-s", "deit-b", "custom"}))
        ->capture_default_str();
    app.add_option("--depth", rc.depth, "number of encoder blocks");
    app.add_option("--dim", rc.dim, "embedding width");
    app.add_option("--heads", rc.heads, "attention heads");
    app.add_option("--tokens", rc.tokens, "sequence length, class token included");
    app.add_option("--mlp-ratio", rc.mlp_ratio, "FFN expansion");
    app.add_option("--classes", rc.classes, "classifier outputs");
    app.add_option("--patch", rc.patch, "patch side (cost model only)");
    app.add_option("--channels", rc.channels, "image channels (cost model only)");
    app.add_flag("--no-class-token", rc.no_class_token, "mean-pool instead of a class token");

    app.add_option("--ratio", rc.ratio, "keep ratio per reduction stage");
    app.add_option("--kappa", rc.kappa, "similarity gate");
    app.add_option("--tau", rc.tau, "assignment temperature");
    app.add_option("--mode", rc.mode, "none, prune, merge or transform")->check(CLI::IsMember(mode_names));
    app.add_option("--layers", rc.layers, "reduction layers, e.g. 3,6,9 (or none)")->delimiter(',');

    app.add_option("--seed", rc.seed, "seed for weights and inputs")->capture_default_str();
    app.add_option("--batch", rc.batch, "inputs per run")->capture_default_str();
    app.add_option("--weights", rc.weights, "weight manifest path or 'synthetic'")->capture_default_str();
    app.add_option("--input", rc.input, "gaussian or orthogonal")
        ->check(CLI::IsMember({"gaussian", "orthogonal"}))
        ->capture_default_str();
    app.add_option("--out", rc.out, "output file (default stdout)");
    app.add_option("--format", rc.format, "csv, json or table")->check(CLI::IsMember({"csv", "json", "table"}));
    app.add_option("--assert", rc.assertion, "flops: fail with exit 3 unless GFLOPs is within target±tol");
    app.add_option("--report", rc.report, "class-token-error")->check(CLI::IsMember({"class-token-error"}));

    app.add_option("--ratios", rc.ratios, "compare: keep-ratio grid")->delimiter(',');
    app.add_option("--modes", rc.modes, "compare/bench: modes to run")->delimiter(',')->check(CLI::IsMember(mode_names));
    app.add_option("--kappas", rc.kappas, "sweep: kappa grid")->delimiter(',');
    app.add_option("--taus", rc.taus, "sweep: tau grid")->delimiter(',');
    app.add_option("--trials", rc.trials, "bench: timed trials")->capture_default_str();
    app.add_option("--warmup", rc.warmup, "bench: untimed warmup runs")->capture_default_str();
    app.add_option("--dump-coefficients", rc.dump_coefficients, "run: write W and s CSVs per stage here");
    app.add_flag("--timings", rc.timings, "run: add wall-clock forward times (not deterministic)");

    const std::vector<std::pair<std::string, std::string>> verbs{
        {"run", "forward pass with per-layer trace and logits"},
        {"flops", "analytic cost report"},
        {"compare", "class-token error and GFLOPs for each mode and ratio"},
        {"sweep", "class-token error over a kappa x tau grid"},
        {"bench", "throughput of reduced vs unreduced forwards"},
        {"gen-weights", "write seeded synthetic weights to --out"},
    };
    for (const auto& [name, help] : verbs) app.add_subcommand(name, help)->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kBadArguments;
    }

    const std::string verb = app.get_subcommands().front()->get_name();
    try {
        if (!rc.assertion.empty() && verb != "flops") throw ArgumentError("--assert is only supported by flops");
        if (verb == "run") return cmd_run(rc, out, err);
        if (verb == "flops") return cmd_flops(rc, out, err);
        if (verb == "compare") return cmd_compare(rc, out, err);
        if (verb == "sweep") return cmd_sweep(rc, out, err);
        if (verb == "bench") return cmd_bench(rc, out, err);
        return cmd_gen_weights(rc, out, err);
    } catch (const AssertionFailure& e) {
        err << e.what() << '\n';
        return kAssertionFailed;
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << '\n';
        return kBadArguments;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace tokxform::cli
