#pragma once

// Batch front-end. Every run writes manifest.json (resolved config, seed,
// timestamp) next to its artifacts in the output directory.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 parse or usage error,
// 3 I/O error.

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace stochcirc::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kParseError = 2, kIoError = 3 };

struct RunConfig {
    std::string command;          // compile simulate dilate verify quantum approx-wz approx-clt
    std::string input;            // netlist (.net) or model JSON (.json); empty: built-in constants model
    std::string out_dir;          // default: $STOCHCIRC_OUT, else "."
    std::uint64_t seed = 1;
    int threads = 0;

    // integration
    std::string scheme = "heun";
    double dt = 1e-3;
    double horizon = 1.0;
    std::size_t paths = 100;
    std::size_t stride = 1;
    double q0 = 1.0;
    double p0 = 1.0;

    // dilation
    std::string dilation = "wiener";
    double c = 1.0;
    double ell = 1.0;
    double gamma = 1.0;
    std::string signs = "bracket_derived";
    std::vector<std::string> checks{"bracket"};

    // quantum
    std::size_t fock_n = 40;
    std::size_t fock_m = 10;
    double hbar = 1.0;
    double evolve_horizon = 0.0;
    double evolve_dt = 0.005;
    double alpha = 1.0;

    // approximations
    std::string wz_case = "multiplicative";
    std::size_t seeds = 50;
    std::size_t base_steps = 8192;
    std::vector<std::size_t> n_list{8, 16, 32, 64, 128};
    std::size_t assembly_n = 16;
    std::size_t replicates = 1000;
    double clt_horizon = 40.0;
    std::string marginal = "uniform";
};

nlohmann::json to_json(const RunConfig& c);
/// Overwrites every field present in `j`; unknown keys throw std::invalid_argument.
void apply_json(RunConfig& c, const nlohmann::json& j);

/// Parses argv and runs; diagnostics go to `err`, summaries to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs an already resolved configuration.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace stochcirc::cli
