#pragma once

// Walks the netlist corpus: every <name>.net has a <name>.expect.json sidecar,
// either frozen drift samples (valid) or the expected diagnostic (malformed).

#include "stochcirc/circuit.hpp"
#include "stochcirc/errors.hpp"
#include "stochcirc/netlist.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace stochcirc::testing {

struct CorpusOutcome {
    std::string name;
    bool valid = false;
    bool pass = false;
    double max_drift_error = 0.0;   // valid files: max |drift - oracle| / max(1, |oracle|)
    std::string detail;
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.path().extension() == ".net") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline CorpusOutcome check_corpus_file(const std::filesystem::path& net, double drift_tolerance = 1e-12) {
    CorpusOutcome r;
    r.name = net.stem().string();
    auto sidecar = net;
    sidecar.replace_extension(".expect.json");
    const auto expect = nlohmann::json::parse(read_file(sidecar));
    r.valid = expect.at("valid").get<bool>();
    const std::string text = read_file(net);

    if (r.valid) {
        try {
            const auto model = compile(parse_netlist(text));
            for (const auto& row : expect.at("drift")) {
                const Vec2 v = drift_field(model, row.at("t"), row.at("q"), row.at("p"));
                const double eq = std::abs(v(0) - row.at("dq").get<double>()) /
                                  std::max(1.0, std::abs(row.at("dq").get<double>()));
                const double ep = std::abs(v(1) - row.at("dp").get<double>()) /
                                  std::max(1.0, std::abs(row.at("dp").get<double>()));
                r.max_drift_error = std::max({r.max_drift_error, eq, ep});
            }
            r.pass = r.max_drift_error <= drift_tolerance;
            if (!r.pass) r.detail = "drift error " + std::to_string(r.max_drift_error);
        } catch (const std::exception& e) {
            r.detail = std::string("unexpected error: ") + e.what();
        }
        return r;
    }

    try {
        (void)compile(parse_netlist(text));
        r.detail = "accepted a malformed netlist";
    } catch (const ParseError& e) {
        const auto line = expect.at("line").get<std::size_t>();
        const auto column = expect.at("column").get<std::size_t>();
        const auto message = expect.at("message").get<std::string>();
        r.pass = e.span().line == line && e.span().column == column &&
                 e.bare_message().find(message) != std::string::npos;
        if (!r.pass) r.detail = std::string("got ") + e.what();
    } catch (const std::exception& e) {
        r.detail = std::string("diagnostic without a position: ") + e.what();
    }
    return r;
}

}  // namespace stochcirc::testing
