#include "cli.hpp"

#include "stochcirc/approximations.hpp"
#include "stochcirc/dilation.hpp"
#include "stochcirc/ensemble.hpp"
#include "stochcirc/errors.hpp"
#include "stochcirc/model_io.hpp"
#include "stochcirc/netlist.hpp"
#include "stochcirc/quantum.hpp"
#include "stochcirc/verify.hpp"

#include "CLI11.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace stochcirc::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kConstantsNetlist = "circuit { L{L0=1} C{C0=1} R{R0=0.2} M{M0=0.3} }";

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write '" + path.string() + "'");
    return os;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    auto os = open_output(path);
    os << j.dump(2) << '\n';
    if (!os) throw IoError("write failed for '" + path.string() + "'");
}

PhaseSpaceModel load_model(const RunConfig& c) {
    if (c.input.empty()) return compile(parse_netlist(kConstantsNetlist));
    const std::string text = read_file(c.input);
    if (fs::path(c.input).extension() == ".json") return PhaseSpaceModel::from_spec(spec_from_json(nlohmann::json::parse(text)));
    return compile(parse_netlist(text));
}

std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ss;
    ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return ss.str();
}

int finish(const std::vector<CheckResult>& checks, const fs::path& report, nlohmann::json extra, std::ostream& out,
           std::ostream& err) {
    nlohmann::json doc = report_json(checks);
    for (auto& [k, v] : extra.items()) doc[k] = v;
    write_json(report, doc);
    bool ok = true;
    for (const auto& c : checks) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << ": estimate " << c.estimate << ", target " << c.target
            << " +/- " << c.tolerance << '\n';
        ok = ok && c.pass;
    }
    if (!ok) err << "checks failed; see " << report.string() << '\n';
    return ok ? kOk : kCheckFailed;
}

CheckResult upper_bound_check(std::string name, double value, double bound) {
    CheckResult r = make_check(std::move(name), 0.0, value, bound);
    r.pass = value < bound;
    return r;
}

Grid grid_within(const Interval& domain) {
    Grid g;
    g.q_lo = std::max(g.q_lo, domain.lo);
    g.q_hi = std::min(g.q_hi, domain.hi);
    return g;
}

SdeSystem dilation_system(const RunConfig& c, const PhaseSpaceModel& model) {
    if (c.dilation == "wiener") return build_wiener_dilation(model, c.c, c.ell).system;
    if (c.dilation == "symplectic") {
        const auto signs = c.signs == "printed" ? MomentumNoiseSigns::printed : MomentumNoiseSigns::bracket_derived;
        return build_symplectic_dilation(model, c.gamma, signs).system;
    }
    if (c.dilation == "none") return circuit_flow_system(model);
    throw std::invalid_argument("unknown dilation '" + c.dilation + "'");
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_compile(const RunConfig& c, const fs::path& dir, std::ostream& out, std::ostream& err) {
    const auto model = load_model(c);
    write_json(dir / "model.json", model_to_json(model));
    out << "wrote " << (dir / "model.json").string() << " (gamma = " << dissipation_formula(model) << ")\n";
    (void)err;
    return kOk;
}

int cmd_simulate(const RunConfig& c, const fs::path& dir, std::ostream& out, std::ostream&) {
    const auto model = load_model(c);
    const SdeSystem system = dilation_system(c, model);
    EnsembleOptions opts;
    opts.save_stride = c.stride;
    opts.threads = c.threads;
    const auto store = simulate_ensemble(system, Vec2(c.q0, c.p0), c.horizon, c.dt, c.paths, c.seed,
                                         parse_scheme(c.scheme), opts);
    auto os = open_output(dir / "trajectories.csv");
    write_trajectory_csv(os, store);
    out << "wrote " << (dir / "trajectories.csv").string() << " (" << store.n_paths << " paths, " << store.n_saves()
        << " saves)\n";
    return kOk;
}

int cmd_dilate(const RunConfig& c, const fs::path& dir, std::ostream& out, std::ostream& err) {
    const auto model = load_model(c);
    const Grid grid = grid_within(model.spec().domain);
    std::vector<CheckResult> checks;
    nlohmann::json doc;
    double gamma_defect = 0.0, drift_defect = 0.0;

    auto compare_drift = [&](const SdeSystem& system) {
        for (int i = 0; i < grid.n; ++i)
            for (int j = 0; j < grid.n; ++j) {
                const Vec2 x(grid.q(i), grid.p(j));
                const Vec2 want = drift_field(model, 0.0, x(0), x(1));
                drift_defect = std::max(drift_defect, (system.ito_drift()(0.0, x) - want).norm());
            }
    };

    if (c.dilation == "wiener") {
        const auto d = build_wiener_dilation(model, c.c, c.ell);
        const auto fields = scalar_fields(d.generators);
        const auto res = determining_residuals(
            fields, [&](double q, double p) { return model.dissipator_voltage(q, p); }, grid,
            ScalarField::from(d.hamiltonian_shift));
        for (int i = 0; i < grid.n; ++i)
            for (int j = 0; j < grid.n; ++j)
                gamma_defect = std::max(gamma_defect, std::abs(hessian_dissipation(fields, grid.q(i), grid.p(j)) -
                                                               dissipation(model, grid.q(i), grid.p(j))));
        compare_drift(d.system);
        checks.push_back(upper_bound_check("residual_conservative", res.r0, 1e-10));
        checks.push_back(upper_bound_check("residual_voltage", res.rv, 1e-10));
        checks.push_back(upper_bound_check("hessian_dissipation", gamma_defect, 1e-12));
        doc = to_json(d);
    } else if (c.dilation == "symplectic") {
        const auto signs = c.signs == "printed" ? MomentumNoiseSigns::printed : MomentumNoiseSigns::bracket_derived;
        const auto d = build_symplectic_dilation(model, c.gamma, signs);
        const PhaseFunction pair = pair_bracket_dissipation(d);
        for (int i = 0; i < grid.n; ++i)
            for (int j = 0; j < grid.n; ++j)
                gamma_defect = std::max(gamma_defect, std::abs(pair(0.0, grid.q(i), grid.p(j)) -
                                                               dissipation(model, grid.q(i), grid.p(j))));
        compare_drift(d.system);
        checks.push_back(upper_bound_check("pair_bracket_dissipation", gamma_defect, 1e-12));
        doc = to_json(d);
    } else {
        throw std::invalid_argument("dilate needs --dilation wiener or symplectic");
    }
    checks.push_back(upper_bound_check("ito_drift_equals_circuit_velocity", drift_defect, 1e-10));
    write_json(dir / "dilation.json", doc);
    return finish(checks, dir / "report.json", {{"dilation", c.dilation}}, out, err);
}

int cmd_verify(const RunConfig& c, const fs::path& dir, std::ostream& out, std::ostream& err) {
    const auto model = load_model(c);
    const SdeSystem system = dilation_system(c, model);
    const Scheme scheme = parse_scheme(c.scheme);
    const Vec2 x0(c.q0, c.p0);
    std::vector<CheckResult> checks;
    nlohmann::json extra{{"dilation", c.dilation}, {"scheme", to_string(scheme)}};

    auto wants = [&](const char* name) { return std::find(c.checks.begin(), c.checks.end(), name) != c.checks.end(); };

    if (wants("bracket")) {
        const std::size_t steps = step_count(c.horizon, c.dt);
        std::vector<double> plain(c.paths), extended(c.paths, 1.0);
        std::vector<BracketSample> history;
        const bool paired = !system.pairs().empty();
        const int nt = c.threads > 0 ? c.threads : omp_get_max_threads();
        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(c.paths); ++i) {
            try {
                const auto path = static_cast<std::size_t>(i);
                const auto noise = NoisePath::generate(c.seed, path, system.channel_count(), steps, c.dt);
                TangentOptions to;
                to.record_every = path == 0 ? std::max<std::size_t>(1, steps / 100) : 0;
                const auto st = propagate_tangent(scheme, system, noise, x0, to);
                plain[path] = plain_bracket(st);
                if (paired) extended[path] = extended_bracket(st);
                if (path == 0) history = st.history;
            } catch (...) {
#pragma omp critical(stochcirc_cli_failure)
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
        auto worst = [](const std::vector<double>& v, double target) {
            double w = 0.0;
            for (double x : v) w = std::max(w, std::abs(x - target));
            return w;
        };
        if (paired) {
            checks.push_back(make_check("extended_bracket_max_defect", 0.0, worst(extended, 1.0), 1e-2));
        } else if (c.dilation == "none") {
            extra["plain_bracket_path0"] = plain[0];
        } else {
            checks.push_back(make_check("plain_bracket_max_defect", 0.0, worst(plain, 1.0), 5e-3));
        }
        extra["plain_bracket"] = plain;
        if (paired) extra["extended_bracket"] = extended;
        auto os = open_output(dir / "brackets.csv");
        write_bracket_csv(os, history);
    }

    if (wants("drift") || wants("covariation")) {
        EnsembleOptions eo;
        eo.threads = c.threads;
        eo.save_stride = c.stride;
        const auto store = simulate_ensemble(system, x0, c.horizon, c.dt, c.paths, c.seed, Scheme::euler_maruyama, eo);
        EstimatorOptions opts;
        opts.threads = c.threads;
        if (wants("drift")) {
            const auto est = empirical_drift(
                store, [&](double t, const Vec2& x) { return drift_field(model, t, x(0), x(1)); }, opts);
            CheckResult r = make_check("drift_within_3se", 1.0, est.fraction_within(3.0), 0.05);
            r.pass = est.fraction_within(3.0) >= 0.95;
            r.details = {{"valid_bins", est.valid_bins()}};
            checks.push_back(r);
        }
        if (wants("covariation")) {
            const auto est = empirical_covariation(
                store, [&](double t, const Vec2& x) { return system.covariation_rate(t, x); }, opts);
            CheckResult r = make_check("covariation_within_3se", 1.0, est.fraction_within(3.0), 0.05);
            r.pass = est.fraction_within(3.0) >= 0.95;
            r.details = {{"valid_bins", est.valid_bins()}};
            checks.push_back(r);
        }
    }
    return finish(checks, dir / "report.json", extra, out, err);
}

int cmd_quantum(const RunConfig& c, const fs::path& dir, std::ostream& out, std::ostream& err) {
    const auto model = load_model(c);
    const auto l0 = model.constant_inductance();
    if (!l0) throw UnsupportedModelError("quantum: requires a constant inductance L0");
    const double c0 = model.spec().capacitance ? model.spec().capacitance->constant_value() : 1.0;
    const auto fock = fock_model(c.fock_n, c.fock_m, c.hbar, *l0, c0);
    const auto d = build_quantum_dilation(model, fock);
    const auto report = verify_operator_identities(d, fock);
    std::vector<CheckResult> checks{upper_bound_check("drift_q_relative", report.drift_q_rel, 1e-10),
                                    upper_bound_check("drift_p_relative", report.drift_p_rel, 1e-10),
                                    upper_bound_check("noise_coefficients", report.max_noise_residual(), 1e-10),
                                    upper_bound_check("hamiltonian_hermiticity", report.hamiltonian_hermiticity, 1e-12)};
    nlohmann::json extra{{"identities", to_json(report)}};
    if (c.evolve_horizon > 0.0) {
        MasterEquationOptions mo;
        mo.record_every = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(0.05 / c.evolve_dt)));
        const auto rho0 = density_matrix(coherent_state(c.fock_n, Complex(c.alpha, 0.0)));
        const auto res = master_equation_evolve(d, rho0, c.evolve_horizon, c.evolve_dt, mo);
        auto os = open_output(dir / "expectations.csv");
        write_master_equation_csv(os, res);
        checks.push_back(upper_bound_check("trace_drift_per_unit_time", res.trace_drift_rate(), 1e-9));
        CheckResult pos = make_check("min_eigenvalue", 0.0, res.min_eigenvalue(), 1e-6);
        pos.pass = res.min_eigenvalue() >= -1e-6;
        checks.push_back(pos);
    }
    return finish(checks, dir / "report.json", extra, out, err);
}

int cmd_approx_wz(const RunConfig& c, const fs::path& dir, std::ostream& out, std::ostream& err) {
    const auto model = load_model(c);
    const PhaseFunction h = circuit_hamiltonian(model);
    PhaseFunction f;
    if (c.wz_case == "additive") {
        f = PhaseFunction::q();
    } else if (c.wz_case == "multiplicative") {
        f = build_wiener_dilation(model, c.c, c.ell).generators.at(0);
    } else {
        throw std::invalid_argument("unknown Wong-Zakai case '" + c.wz_case + "'");
    }
    const auto study = wong_zakai_study(h, f, Vec2(c.q0, c.p0), c.horizon, c.base_steps, c.n_list, c.seed, c.seeds,
                                        5.0, {}, c.threads);
    auto os = open_output(dir / "wz.csv");
    write_wong_zakai_study_csv(os, study);
    std::vector<CheckResult> checks;
    for (std::size_t k = 0; k < study.decreasing.size(); ++k) {
        CheckResult r = make_check("e_" + std::to_string(c.n_list[k + 1]) + "_below_e_" + std::to_string(c.n_list[k]),
                                   1.0, study.decreasing_fraction(k), 0.1);
        r.pass = study.decreasing_fraction(k) >= 0.9;
        checks.push_back(r);
    }
    if (c.wz_case == "multiplicative") {
        CheckResult r = make_check("ito_gap_exceeds_5x_final_error", 1.0, study.gap_fraction(), 0.0);
        checks.push_back(r);
    }
    return finish(checks, dir / "report.json", {{"case", c.wz_case}, {"seeds", study.seeds.size()}}, out, err);
}

int cmd_approx_clt(const RunConfig& c, const fs::path& dir, std::ostream& out, std::ostream& err) {
    const auto model = load_model(c);
    AssemblyParams params;
    const auto l0 = model.constant_inductance();
    if (!l0) throw UnsupportedModelError("clt: requires a constant inductance L0");
    params.inductance = *l0;
    params.capacitance = model.spec().capacitance ? model.spec().capacitance->constant_value() : 1.0;
    if (c.marginal == "uniform") {
        params.marginal = Marginal::uniform;
    } else if (c.marginal != "gaussian") {
        throw std::invalid_argument("unknown marginal '" + c.marginal + "'");
    }
    CltOptions opts;
    opts.replicates = c.replicates;
    opts.horizon = c.clt_horizon;
    opts.threads = c.threads;
    const auto rep = clt_tests(c.assembly_n, params, c.seed, opts);
    write_json(dir / "clt.json", to_json(rep));
    std::vector<CheckResult> checks{
        make_check("variance_Q1_relative_error", 0.0, rep.variance_rel_error, 0.05),
        make_check("correlation_QP", 0.0, rep.correlation_qp, rep.correlation_bound),
        make_check("bracket_sup_deviation", 1.0 / static_cast<double>(c.assembly_n), rep.bracket_sup_deviation, 0.0)};
    return finish(checks, dir / "report.json", {{"clt", to_json(rep)}}, out, err);
}

void write_manifest(const RunConfig& c, const fs::path& dir) {
    write_json(dir / "manifest.json", {{"tool", "stochcirc"},
                                       {"timestamp", timestamp()},
                                       {"seed", c.seed},
                                       {"threads", c.threads > 0 ? c.threads : omp_get_max_threads()},
                                       {"config", to_json(c)}});
}

}  // namespace

nlohmann::json to_json(const RunConfig& c) {
    return {{"command", c.command},       {"input", c.input},
            {"out", c.out_dir},           {"seed", c.seed},
            {"threads", c.threads},       {"scheme", c.scheme},
            {"dt", c.dt},                 {"T", c.horizon},
            {"paths", c.paths},           {"stride", c.stride},
            {"q0", c.q0},                 {"p0", c.p0},
            {"dilation", c.dilation},     {"c", c.c},
            {"ell", c.ell},               {"gamma", c.gamma},
            {"signs", c.signs},           {"checks", c.checks},
            {"N", c.fock_n},              {"m", c.fock_m},
            {"hbar", c.hbar},             {"evolve_T", c.evolve_horizon},
            {"evolve_dt", c.evolve_dt},   {"alpha", c.alpha},
            {"case", c.wz_case},          {"seeds", c.seeds},
            {"base_steps", c.base_steps}, {"n_list", c.n_list},
            {"assembly_N", c.assembly_n}, {"replicates", c.replicates},
            {"clt_T", c.clt_horizon},     {"marginal", c.marginal}};
}

void apply_json(RunConfig& c, const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("config file must hold a JSON object");
    for (const auto& [key, v] : j.items()) {
        if (key == "command") c.command = v.get<std::string>();
        else if (key == "input") c.input = v.get<std::string>();
        else if (key == "out") c.out_dir = v.get<std::string>();
        else if (key == "seed") c.seed = v.get<std::uint64_t>();
        else if (key == "threads") c.threads = v.get<int>();
        else if (key == "scheme") c.scheme = v.get<std::string>();
        else if (key == "dt") c.dt = v.get<double>();
        else if (key == "T") c.horizon = v.get<double>();
        else if (key == "paths") c.paths = v.get<std::size_t>();
        else if (key == "stride") c.stride = v.get<std::size_t>();
        else if (key == "q0") c.q0 = v.get<double>();
        else if (key == "p0") c.p0 = v.get<double>();
        else if (key == "dilation") c.dilation = v.get<std::string>();
        else if (key == "c") c.c = v.get<double>();
        else if (key == "ell") c.ell = v.get<double>();
        else if (key == "gamma") c.gamma = v.get<double>();
        else if (key == "signs") c.signs = v.get<std::string>();
        else if (key == "checks") c.checks = v.get<std::vector<std::string>>();
        else if (key == "N") c.fock_n = v.get<std::size_t>();
        else if (key == "m") c.fock_m = v.get<std::size_t>();
        else if (key == "hbar") c.hbar = v.get<double>();
        else if (key == "evolve_T") c.evolve_horizon = v.get<double>();
        else if (key == "evolve_dt") c.evolve_dt = v.get<double>();
        else if (key == "alpha") c.alpha = v.get<double>();
        else if (key == "case") c.wz_case = v.get<std::string>();
        else if (key == "seeds") c.seeds = v.get<std::size_t>();
        else if (key == "base_steps") c.base_steps = v.get<std::size_t>();
        else if (key == "n_list") c.n_list = v.get<std::vector<std::size_t>>();
        else if (key == "assembly_N") c.assembly_n = v.get<std::size_t>();
        else if (key == "replicates") c.replicates = v.get<std::size_t>();
        else if (key == "clt_T") c.clt_horizon = v.get<double>();
        else if (key == "marginal") c.marginal = v.get<std::string>();
        else throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
    RunConfig c = config;
    if (c.out_dir.empty()) {
        const char* env = std::getenv("STOCHCIRC_OUT");
        c.out_dir = env && *env ? env : ".";
    }
    if (c.threads > 0) omp_set_num_threads(c.threads);
    try {
        const fs::path dir(c.out_dir);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
        write_manifest(c, dir);
        if (c.command == "compile") return cmd_compile(c, dir, out, err);
        if (c.command == "simulate") return cmd_simulate(c, dir, out, err);
        if (c.command == "dilate") return cmd_dilate(c, dir, out, err);
        if (c.command == "verify") return cmd_verify(c, dir, out, err);
        if (c.command == "quantum") return cmd_quantum(c, dir, out, err);
        if (c.command == "approx-wz") return cmd_approx_wz(c, dir, out, err);
        if (c.command == "approx-clt") return cmd_approx_clt(c, dir, out, err);
        err << "unknown command '" << c.command << "'\n";
        return kParseError;
    } catch (const ParseError& e) {
        err << (c.input.empty() ? std::string("<builtin>") : c.input) << ':' << e.what() << '\n';
        return kParseError;
    } catch (const nlohmann::json::exception& e) {
        err << "invalid JSON: " << e.what() << '\n';
        return kParseError;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::invalid_argument& e) {
        err << "invalid configuration: " << e.what() << '\n';
        return kParseError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kCheckFailed;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    std::string config_file;
    CLI::App app{"Canonical stochastic and quantum dilations of dissipative circuits"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "stochcirc 1.0.0");

    auto common = [&](CLI::App* sub, bool with_input) {
        if (with_input) sub->add_option("input", c.input, "netlist (.net) or model JSON (.json); default: constants model");
        sub->add_option("--out", c.out_dir, "output directory (default $STOCHCIRC_OUT or .)");
        sub->add_option("--config", config_file, "JSON file whose keys override the flags");
        sub->add_option("--seed", c.seed, "random seed");
        sub->add_option("--threads", c.threads, "OpenMP threads (0: all available)");
    };
    auto integration = [&](CLI::App* sub) {
        sub->add_option("--scheme", c.scheme, "em | heun | rk4");
        sub->add_option("--dt", c.dt, "time step");
        sub->add_option("--T", c.horizon, "horizon");
        sub->add_option("--paths", c.paths, "number of paths");
        sub->add_option("--stride", c.stride, "save every k-th step");
        sub->add_option("--q0", c.q0, "initial charge");
        sub->add_option("--p0", c.p0, "initial flux");
    };
    auto dilation = [&](CLI::App* sub) {
        sub->add_option("--dilation", c.dilation, "wiener | symplectic | none");
        sub->add_option("--c", c.c, "Wiener scale c");
        sub->add_option("--ell", c.ell, "Wiener scale ell");
        sub->add_option("--gamma", c.gamma, "symplectic bracket weight");
        sub->add_option("--signs", c.signs, "momentum noise signs: bracket_derived | printed");
    };

    auto* compile_cmd = app.add_subcommand("compile", "netlist -> model JSON");
    common(compile_cmd, true);
    compile_cmd->callback([&] { c.command = "compile"; });

    auto* simulate_cmd = app.add_subcommand("simulate", "ensemble trajectories CSV");
    common(simulate_cmd, true);
    integration(simulate_cmd);
    dilation(simulate_cmd);
    simulate_cmd->callback([&] { c.command = "simulate"; });

    auto* dilate_cmd = app.add_subcommand("dilate", "dilation JSON and residual report");
    common(dilate_cmd, true);
    dilation(dilate_cmd);
    dilate_cmd->callback([&] { c.command = "dilate"; });

    auto* verify_cmd = app.add_subcommand("verify", "bracket, drift and covariation checks");
    common(verify_cmd, true);
    integration(verify_cmd);
    dilation(verify_cmd);
    verify_cmd->add_option("--checks", c.checks, "any of bracket, drift, covariation")->delimiter(',');
    verify_cmd->callback([&] { c.command = "verify"; });

    auto* quantum_cmd = app.add_subcommand("quantum", "truncated-Fock identity report");
    common(quantum_cmd, true);
    quantum_cmd->add_option("--N", c.fock_n, "Fock dimension");
    quantum_cmd->add_option("--m", c.fock_m, "interior margin");
    quantum_cmd->add_option("--hbar", c.hbar, "reduced Planck constant");
    quantum_cmd->add_option("--evolve-T", c.evolve_horizon, "master-equation horizon (0: skip)");
    quantum_cmd->add_option("--evolve-dt", c.evolve_dt, "master-equation step");
    quantum_cmd->add_option("--alpha", c.alpha, "coherent-state amplitude");
    quantum_cmd->callback([&] { c.command = "quantum"; });

    auto* approx_cmd = app.add_subcommand("approx", "Wong-Zakai and central-limit studies");
    approx_cmd->require_subcommand(1);
    auto* wz_cmd = approx_cmd->add_subcommand("wz", "smooth-noise convergence table");
    common(wz_cmd, true);
    wz_cmd->add_option("--case", c.wz_case, "additive | multiplicative");
    wz_cmd->add_option("--seeds", c.seeds, "number of base paths");
    wz_cmd->add_option("--base-steps", c.base_steps, "steps of each base path");
    wz_cmd->add_option("--n", c.n_list, "interpolation sizes")->delimiter(',');
    wz_cmd->add_option("--T", c.horizon, "horizon");
    wz_cmd->add_option("--q0", c.q0, "initial charge");
    wz_cmd->add_option("--p0", c.p0, "initial flux");
    wz_cmd->add_option("--c", c.c, "Wiener scale c");
    wz_cmd->add_option("--ell", c.ell, "Wiener scale ell");
    wz_cmd->callback([&] { c.command = "approx-wz"; });
    auto* clt_cmd = approx_cmd->add_subcommand("clt", "oscillator-assembly statistics");
    common(clt_cmd, true);
    clt_cmd->add_option("--N", c.assembly_n, "oscillators per unit time");
    clt_cmd->add_option("--replicates", c.replicates, "independent assemblies");
    clt_cmd->add_option("--T", c.clt_horizon, "assembly horizon");
    clt_cmd->add_option("--marginal", c.marginal, "uniform | gaussian");
    clt_cmd->callback([&] { c.command = "approx-clt"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kParseError;
    }

    if (!config_file.empty()) {
        try {
            const std::string command = c.command;
            apply_json(c, nlohmann::json::parse(read_file(config_file)));
            c.command = command;
        } catch (const IoError& e) {
            err << "I/O error: " << e.what() << '\n';
            return kIoError;
        } catch (const std::exception& e) {
            err << config_file << ": " << e.what() << '\n';
            return kParseError;
        }
    }
    return execute(c, out, err);
}

}  // namespace stochcirc::cli
