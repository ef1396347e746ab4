#include "../../tools/cli.hpp"
#include "../support/corpus.hpp"

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using stochcirc::testing::read_file;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::initializer_list<std::string> args) {
    std::vector<std::string> storage{"stochcirc"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : storage) argv.push_back(s.c_str());
    std::ostringstream out, err;
    const int code = stochcirc::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("stochcirc_cli_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string corpus(const char* name) { return (fs::path(STOCHCIRC_CORPUS_DIR) / name).string(); }

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(read_file(p)); }

}  // namespace

TEST_CASE("compile writes a model document and a manifest") {
    const auto dir = scratch("compile");
    const auto r = invoke({"compile", corpus("v01_rlcm_constants.net"), "--out", dir.string(), "--seed", "9"});
    REQUIRE(r.code == 0);
    const auto model = read_json(dir / "model.json");
    CHECK(model.at("derived").at("dissipation").get<std::string>().find("0.3") != std::string::npos);
    const auto manifest = read_json(dir / "manifest.json");
    CHECK(manifest.at("seed") == 9);
    CHECK(manifest.at("config").at("input") == corpus("v01_rlcm_constants.net"));
    CHECK(manifest.contains("timestamp"));
}

TEST_CASE("compiled model documents are accepted as input") {
    const auto a = scratch("model_in_a");
    const auto b = scratch("model_in_b");
    REQUIRE(invoke({"compile", corpus("v05_poly_resistor.net"), "--out", a.string()}).code == 0);
    REQUIRE(invoke({"compile", (a / "model.json").string(), "--out", b.string()}).code == 0);
    auto ma = read_json(a / "model.json");
    auto mb = read_json(b / "model.json");
    CHECK(ma == mb);
}

TEST_CASE("exit codes distinguish parse, I/O and check failures") {
    const auto dir = scratch("codes");
    const auto bad = invoke({"compile", corpus("m01_unknown_key.net"), "--out", dir.string()});
    CHECK(bad.code == 2);
    CHECK(bad.err.find(":3:5: unknown key 'X0'") != std::string::npos);

    CHECK(invoke({"compile", (dir / "missing.net").string(), "--out", dir.string()}).code == 3);
    CHECK(invoke({"compile", "--bogus"}).code == 2);
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"--help"}).code == 0);

    const auto fail = invoke({"verify", "--dilation", "wiener", "--scheme", "em", "--dt", "0.1", "--paths", "2",
                              "--out", dir.string()});
    CHECK(fail.code == 1);
    CHECK(read_json(dir / "report.json").at("all_pass") == false);
}

TEST_CASE("reruns reproduce byte-identical trajectories for any thread count") {
    const auto a = scratch("rerun_a");
    const auto b = scratch("rerun_b");
    const auto c = scratch("rerun_c");
    auto sim = [](const fs::path& d, const char* threads) {
        return invoke({"simulate", "--dilation", "symplectic", "--paths", "6", "--T", "0.2", "--dt", "0.01",
                       "--seed", "5", "--threads", threads, "--out", d.string()})
            .code;
    };
    REQUIRE(sim(a, "1") == 0);
    REQUIRE(sim(b, "1") == 0);
    REQUIRE(sim(c, "3") == 0);
    const auto body = read_file(a / "trajectories.csv");
    CHECK(body.size() > 100);
    CHECK(body == read_file(b / "trajectories.csv"));
    CHECK(body == read_file(c / "trajectories.csv"));

    auto ma = read_json(a / "manifest.json");
    auto mb = read_json(b / "manifest.json");
    for (auto* m : {&ma, &mb}) {
        m->erase("timestamp");
        m->at("config").erase("out");
    }
    CHECK(ma == mb);
}

TEST_CASE("config file keys override flags") {
    const auto dir = scratch("config");
    fs::create_directories(dir);
    {
        std::ofstream(dir / "run.json") << R"({"paths": 3, "T": 0.1, "dt": 0.05})";
    }
    const auto r = invoke({"simulate", "--paths", "50", "--config", (dir / "run.json").string(), "--out",
                           dir.string()});
    REQUIRE(r.code == 0);
    const auto manifest = read_json(dir / "manifest.json");
    CHECK(manifest.at("config").at("paths") == 3);
    const auto csv = read_file(dir / "trajectories.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 * 3);

    {
        std::ofstream(dir / "bad.json") << R"({"pathz": 3})";
    }
    CHECK(invoke({"simulate", "--config", (dir / "bad.json").string(), "--out", dir.string()}).code == 2);
}

TEST_CASE("output directory falls back to the environment") {
    const auto dir = scratch("env");
    ::setenv("STOCHCIRC_OUT", dir.string().c_str(), 1);
    const auto r = invoke({"compile"});
    ::unsetenv("STOCHCIRC_OUT");
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "model.json"));
}

TEST_CASE("dilate and quantum reports pass on the constants model") {
    const auto dir = scratch("reports");
    CHECK(invoke({"dilate", "--dilation", "wiener", "--out", (dir / "w").string()}).code == 0);
    CHECK(read_json(dir / "w" / "report.json").at("all_pass") == true);
    CHECK(invoke({"dilate", "--dilation", "symplectic", "--gamma", "2", "--out", (dir / "s").string()}).code == 0);
    CHECK(invoke({"quantum", "--N", "24", "--m", "6", "--evolve-T", "0.2", "--out", (dir / "q").string()}).code == 0);
    CHECK(fs::exists(dir / "q" / "expectations.csv"));
    CHECK(invoke({"dilate", corpus("v08_parallel.net"), "--out", (dir / "p").string()}).code == 2);
}

TEST_CASE("CLT study writes its statistics") {
    const auto dir = scratch("clt");
    const auto r = invoke({"approx", "clt", "--N", "4", "--T", "4", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(read_json(dir / "clt.json").at("N") == 4);
}
