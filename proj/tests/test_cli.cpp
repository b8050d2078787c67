// Copyright 2026 The tokxform Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli/commands.hpp"
#include "json.hpp"
#include "support/oracles.hpp"
#include "tokxform/flops.hpp"
#include "tokxform/vit.hpp"

using namespace tokxform;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
    int code;
    std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> small(std::vector<std::string> args, const std::string& tokens = "17") {
    for (const char* a : {"--preset", "custom", "--depth", "4", "--dim", "32", "--heads", "4", "--classes", "10",
                          "--layers", "1,2", "--tokens"}) {
        args.emplace_back(a);
    }
    args.push_back(tokens);
    return args;
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

struct TempDir {
    fs::path path = fs::temp_directory_path() / ("tokxform_cli_" + std::to_string(::getpid()));
    TempDir() { fs::create_directories(path); }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("flops verb") {
    CHECK(invoke({"flops", "--preset", "deit-s", "--mode", "none", "--assert", "4.6±2%"}).code == 0);
    CHECK(invoke({"flops", "--preset", "deit-s", "--ratio", "0.7", "--assert", "3.0+-5%"}).code == 0);
    CHECK(invoke({"flops", "--preset", "deit-s", "--ratio", "0.6", "--assert", "2.6+-7%"}).code == 0);
    CHECK(invoke({"flops", "--preset", "deit-s", "--ratio", "0.6", "--assert", "2.6+-0.01"}).code == 3);
    CHECK(invoke({"flops", "--assert", "about 3"}).code == 2);
    CHECK(invoke({"run", "--assert", "3+-1"}).code == 2);

    const Outcome j = invoke({"flops", "--preset", "deit-s", "--ratio", "0.7", "--format", "json"});
    REQUIRE(j.code == 0);
    ModelConfig cfg = ModelConfig::deit_small();
    CHECK(json::parse(j.out)["total_macs"].get<double>() == model_cost(cfg).total_macs);

    const Outcome c = invoke({"flops", "--preset", "deit-s", "--format", "csv"});
    const auto rows = read_csv(c.out);
    CHECK(rows.size() == 13);
    CHECK(rows[4][2] == "139");
}

TEST_CASE("parse_assertion") {
    const auto t = cli::parse_assertion("4.6±2%");
    CHECK(t.target == 4.6);
    CHECK(t.relative);
    CHECK(t.accepts(4.599));
    CHECK_FALSE(t.accepts(4.7));
    CHECK_FALSE(cli::parse_assertion("3+-0.5").relative);
    CHECK_THROWS_AS(cli::parse_assertion("3"), ArgumentError);
    CHECK_THROWS_AS(cli::parse_assertion("3+-x"), ArgumentError);
}

TEST_CASE("argument errors exit with 2") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"explode"}).code == 2);
    CHECK(invoke({"run", "--mode", "squash"}).code == 2);
    CHECK(invoke({"run", "--bogus"}).code == 2);
    CHECK(invoke({"flops", "--ratio", "1.5"}).code == 2);
    CHECK(invoke({"flops", "--layers", "3,x"}).code == 2);
    CHECK(invoke({"flops", "--layers", "12"}).code == 2);
    CHECK(invoke({"sweep", "--kappas", "0.5,1.1"}).code == 2);
    CHECK(invoke({"flops", "--config", "/nonexistent/cfg.json"}).code == 2);
    CHECK(invoke({"run", "--preset", "deit-ti", "--input", "orthogonal"}).code == 2);
    CHECK(invoke({"gen-weights"}).code == 2);
    const Outcome help = invoke({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("compare") != std::string::npos);
    CHECK(invoke(small({"run", "--weights", "/nonexistent/w.json"})).code == 1);
}

TEST_CASE("run on DeiT-S") {
    TempDir dir;
    const auto a = dir.path / "a.json", b = dir.path / "b.json";
    REQUIRE(invoke({"run", "--preset", "deit-s", "--mode", "none", "--seed", "7", "--out", a.string()}).code == 0);
    REQUIRE(invoke({"run", "--preset", "deit-s", "--mode", "none", "--seed", "7", "--out", b.string()}).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(json::parse(slurp(a))["inputs"][0]["logits"].size() == 1000);

    const Outcome t = invoke({"run", "--preset", "deit-s", "--mode", "transform", "--ratio", "0.7", "--format", "csv"});
    REQUIRE(t.code == 0);
    const auto rows = read_csv(t.out);
    REQUIRE(rows.size() == 13);
    CHECK(rows[1][2] == "197");
    CHECK(rows[4][3] == "139");
    CHECK(rows[7][3] == "98");
    CHECK(rows[10][3] == "69");
    CHECK(rows[12][3] == "69");
}

TEST_CASE("ratio 1 transform approaches the unreduced run on orthogonal inputs") {
    const Outcome full = invoke({"run", "--preset", "deit-s", "--mode", "none", "--input", "orthogonal"});
    const Outcome same = invoke({"run", "--preset", "deit-s", "--mode", "transform", "--ratio", "1.0", "--input",
                              "orthogonal"});
    REQUIRE(full.code == 0);
    REQUIRE(same.code == 0);
    const auto la = json::parse(full.out)["inputs"][0]["logits"].get<std::vector<double>>();
    const auto lb = json::parse(same.out)["inputs"][0]["logits"].get<std::vector<double>>();
    REQUIRE(la.size() == lb.size());
    double diff = 0;
    for (std::size_t i = 0; i < la.size(); ++i) diff = std::max(diff, std::abs(la[i] - lb[i]));
    CHECK(diff < 1e-3);
}

TEST_CASE("run options on a small model") {
    TempDir dir;
    const Outcome base = invoke(small({"run", "--batch", "2", "--report", "class-token-error"}));
    REQUIRE(base.code == 0);
    const json doc = json::parse(base.out);
    CHECK(doc["inputs"].size() == 2);
    CHECK(doc["inputs"][0]["trace"][1]["tokens_out"] == 13);
    CHECK(doc["inputs"][0]["class_token_error"].get<double>() > 0);
    CHECK_FALSE(doc["inputs"][0].contains("forward_ms"));
    CHECK(json::parse(invoke(small({"run", "--timings"})).out)["inputs"][0].contains("forward_ms"));

    SUBCASE("config file values, overridden by flags") {
        const auto cfg = dir.path / "cfg.json";
        std::ofstream(cfg) << R"({"ratio": 0.5, "mode": "prune", "layers": [1]})";
        const json fromfile = json::parse(invoke(small({"run", "--config", cfg.string()})).out);
        CHECK(fromfile["config"]["mode"] == "prune");
        // small() passes --layers on the command line, which wins
        CHECK(fromfile["config"]["reduce_at"] == json::array({1, 2}));
        CHECK(fromfile["config"]["ratio"] == 0.5);
        const json flagged = json::parse(invoke(small({"run", "--config", cfg.string(), "--ratio", "0.9"})).out);
        CHECK(flagged["config"]["ratio"] == 0.9);
        CHECK(flagged["config"]["mode"] == "prune");
        std::ofstream(cfg) << "{ broken";
        CHECK(invoke(small({"run", "--config", cfg.string()})).code == 2);
    }
    SUBCASE("weights written by gen-weights reproduce the synthetic run") {
        const auto manifest = dir.path / "w" / "model.json";
        REQUIRE(invoke(small({"gen-weights", "--seed", "3", "--out", manifest.string()})).code == 0);
        const json a = json::parse(invoke(small({"run", "--seed", "3"})).out);
        const json b = json::parse(invoke(small({"run", "--seed", "3", "--weights", manifest.string()})).out);
        CHECK(a["inputs"] == b["inputs"]);
        CHECK(invoke({"run", "--weights", manifest.string()}).code == 1);  // deit-s shapes do not match
    }
}

TEST_CASE("compare verb") {
    const Outcome a = invoke(small({"compare", "--ratios", "0.9,0.5,0.7", "--batch", "2"}));
    REQUIRE(a.code == 0);
    const auto rows = read_csv(a.out);
    REQUIRE(rows.size() == 1 + 3 * 3);
    CHECK(rows[0] == std::vector<std::string>{"mode", "ratio", "class_token_error", "gflops"});
    CHECK(rows[1][0] == "prune");
    CHECK(rows[1][1] == "0.5");
    CHECK(rows[9][0] == "transform");
    CHECK(rows[9][1] == "0.9");

    cli::RunConfig rc;
    rc.preset = "custom";
    rc.depth = 4;
    rc.dim = 32;
    rc.heads = 4;
    rc.tokens = 17;
    rc.classes = 10;
    rc.layers = {"1", "2"};
    for (std::size_t i = 1; i < rows.size(); ++i) {
        rc.mode = rows[i][0];
        rc.ratio = std::stod(rows[i][1]);
        CHECK(std::stod(rows[i][3]) == model_cost(cli::model_config(rc)).total_gflops());
        CHECK(std::stod(rows[i][2]) > 0);
    }

    CHECK(invoke(small({"compare", "--ratios", "0.9,0.5,0.7", "--batch", "2"})).out == a.out);

    const auto with_none = read_csv(invoke(small({"compare", "--ratios", "0.6", "--modes", "none,transform"})).out);
    REQUIRE(with_none.size() == 3);
    CHECK(with_none[1][0] == "none");
    CHECK(with_none[1][2] == "0");

    const json j = json::parse(invoke(small({"compare", "--ratios", "0.6", "--format", "json"})).out);
    CHECK(j["rows"].size() == 3);
}

TEST_CASE("sweep verb") {
    const Outcome a = invoke(small({"sweep", "--kappas", "0.3,0.5", "--taus", "1,100,200"}));
    REQUIRE(a.code == 0);
    const auto rows = read_csv(a.out);
    REQUIRE(rows.size() == 1 + 2 * 3);
    CHECK(rows[1][0] == "0.3");
    CHECK(rows[1][1] == "1");
    CHECK(invoke(small({"sweep", "--kappas", "0.3,0.5", "--taus", "1,100,200"})).out == a.out);

    const auto defaults = read_csv(invoke(small({"sweep"})).out);
    CHECK(defaults.size() == 1 + 6 * 6);

    // the tau=1 cell equals a single run at the same setting
    const json one = json::parse(invoke(small({"run", "--kappa", "0.5", "--tau", "1", "--report", "class-token-error"})).out);
    CHECK(std::stod(rows[4][4]) == one["inputs"][0]["class_token_error"].get<double>());

    CHECK(invoke(small({"sweep", "--taus", "0"})).code == 2);
    CHECK(invoke(small({"sweep", "--no-class-token"}, "16")).code == 2);
}

TEST_CASE("tau=1 coefficients match the straight-line oracle") {
    TempDir dir;
    std::vector<std::string> args = small(
        {"run", "--no-class-token", "--kappa", "0.4", "--tau", "1", "--seed", "5", "--dump-coefficients",
         dir.path.string()},
        "16");
    REQUIRE(invoke(args).code == 0);

    cli::RunConfig rc;
    rc.preset = "custom";
    rc.depth = 4;
    rc.dim = 32;
    rc.heads = 4;
    rc.tokens = 16;
    rc.classes = 10;
    rc.layers = {"1", "2"};
    rc.no_class_token = true;
    rc.kappa = 0.4;
    rc.tau = 1;
    rc.seed = 5;
    const ModelConfig cfg = cli::model_config(rc);
    const WeightStore w = WeightStore::synthetic(cfg, 5);
    const Matrix x = cli::make_inputs(cfg, "gaussian", 5, 1)[0];
    const ForwardState s = block_forward(initial_state(x, w, cfg), 0, w, cfg);
    const AttentionOutput att = scaled_attention(s.tokens, s.scale, block_weights(w, 1), cfg);
    const auto oracle = testing::transform_oracle(att.tokens, att.attention, 0.7, 0.4, 1.0);

    const auto wrows = read_csv(slurp(dir.path / "layer1_W.csv"));
    REQUIRE(wrows.size() == 1 + oracle.weights.size());
    for (std::size_t k = 1; k < wrows.size(); ++k) {
        const std::size_t i = std::stoul(wrows[k][0]), j = std::stoul(wrows[k][1]);
        REQUIRE(std::abs(std::stod(wrows[k][2]) - oracle.weights(i, j)) < 1e-9);
    }
    const auto srows = read_csv(slurp(dir.path / "layer1_s.csv"));
    REQUIRE(srows.size() == 1 + oracle.scale.size());
    for (std::size_t k = 1; k < srows.size(); ++k) {
        CHECK(std::abs(std::stod(srows[k][1]) - oracle.scale[k - 1]) < 1e-9);
    }
    CHECK(fs::exists(dir.path / "layer2_W.csv"));
}

TEST_CASE("bench verb") {
    const Outcome b = invoke(small({"bench", "--trials", "3", "--warmup", "0"}));
    REQUIRE(b.code == 0);
    const json doc = json::parse(b.out);
    REQUIRE(doc["results"].size() == 2);
    for (const auto& r : doc["results"]) {
        for (const char* key : {"mode", "tokens_final", "median_ips", "trials"}) CHECK(r.contains(key));
        CHECK(r["trials"] == 3);
        CHECK(r["samples_ips"].size() == 3);
        CHECK(r["median_ips"].get<double>() > 0);
    }
    CHECK(doc["results"][0]["mode"] == "none");
    CHECK(doc["results"][0]["tokens_final"] == 17);
    CHECK(doc["results"][1]["tokens_final"] == 10);
    CHECK(doc["results"][1]["macs"].get<double>() < doc["results"][0]["macs"].get<double>());
    CHECK(doc.contains("speedup"));
    CHECK(invoke(small({"bench", "--trials", "0"})).code == 2);
}
