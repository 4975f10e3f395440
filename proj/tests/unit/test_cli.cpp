#include <doctest.h>

#include "cli.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using json = nlohmann::json;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("unilab_cli_test_" + name);
}

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "unilab");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return unilab::app::run(static_cast<int>(argv.size()), argv.data());
}

json read_json(const std::filesystem::path& p) {
    std::ifstream f(p);
    return json::parse(f);
}

std::string read_text(const std::filesystem::path& p) {
    std::ifstream f(p);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("triple report") {
    const auto out = temp_file("triple.json");
    REQUIRE(run_cli({"triple", "--f", "one", "--a", "one", "--b", "one", "--X", "1000", "--H", "16",
                     "--check-identity", "--out", out.string()}) == 0);
    const auto r = read_json(out);
    CHECK(r["payload"]["command"] == "triple");
    CHECK(r["payload"]["config"]["X"] == 1000);
    CHECK(r["payload"]["results"]["value_direct"][0].get<double>() == doctest::Approx(16000.0));
    CHECK(r["metadata"].contains("timestamp"));
    CHECK_FALSE(r["payload"]["config"].contains("out"));
    CHECK_FALSE(r["payload"]["config"].contains("threads"));
    std::filesystem::remove(out);
}

TEST_CASE("payloads are reproducible across runs and thread counts") {
    const auto a = temp_file("a.json"), b = temp_file("b.json");
    const std::vector<std::string> base{"uniformity", "--spec", "liouville", "--X", "1e5", "--H", "64",
                                        "--seed", "3", "--samples", "40"};
    auto args = base;
    args.insert(args.end(), {"--threads", "1", "--out", a.string()});
    REQUIRE(run_cli(args) == 0);
    args = base;
    args.insert(args.end(), {"--threads", "3", "--out", b.string()});
    REQUIRE(run_cli(args) == 0);
    const auto ja = read_json(a), jb = read_json(b);
    CHECK(ja["payload"].dump() == jb["payload"].dump());
    CHECK(ja["metadata"]["threads"] == 1);
    CHECK(jb["metadata"]["threads"] == 3);
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST_CASE("config file values yield to explicit flags") {
    const auto cfg = temp_file("cfg.json"), out = temp_file("cfg_out.json");
    {
        std::ofstream f(cfg);
        f << R"({"command": "triple", "f": "one", "a": "one", "b": "one", "X": 1000, "H": 8, "check-identity": true})";
    }
    REQUIRE(run_cli({"--config", cfg.string(), "--H", "16", "--out", out.string()}) == 0);
    const auto r = read_json(out);
    CHECK(r["payload"]["config"]["H"] == 16);
    CHECK(r["payload"]["config"]["X"] == 1000);
    CHECK(r["payload"]["config"]["check-identity"] == true);
    CHECK(r["payload"]["results"]["value_direct"][0].get<double>() == doctest::Approx(16000.0));
    std::filesystem::remove(cfg);
    std::filesystem::remove(out);
}

TEST_CASE("exit codes") {
    const auto out = temp_file("codes.json");
    CHECK(run_cli({"chowla2", "--spec", "one", "--X", "1000", "--H", "10", "--max", "0.5", "--out", out.string()}) == 1);
    const auto r = read_json(out);
    CHECK(r["payload"]["results"]["assertions"][0]["pass"] == false);
    CHECK(run_cli({"chowla2", "--spec", "one", "--X", "1000", "--H", "10", "--max", "5", "--out", out.string()}) == 0);
    CHECK(run_cli({"triple", "--f", "nonsense", "--out", out.string()}) == 2);
    CHECK(run_cli({"triple", "--X", "10.5", "--out", out.string()}) == 2);
    CHECK(run_cli({"nosuchcommand"}) == 2);
    CHECK(run_cli({"--config", temp_file("missing.json").string()}) == 2);
    std::filesystem::remove(out);
}

TEST_CASE("csv output") {
    const auto csv = temp_file("t.csv"), out = temp_file("t.json");
    REQUIRE(run_cli({"triple", "--f", "liouville", "--a", "one", "--b", "one", "--X", "500", "--H", "5",
                     "--csv", csv.string(), "--out", out.string()}) == 0);
    const auto text = read_text(csv);
    CHECK(text.rfind("X,H,f,a,b,value_direct,value_spectral,rel_gap,normalized\n500,5,\"liouville\"", 0) == 0);
    CHECK(run_cli({"walks", "--graph", "path", "--n", "3", "--k", "2", "--csv", csv.string(), "--out", out.string()}) == 2);
    std::filesystem::remove(csv);
    std::filesystem::remove(out);
}

}
