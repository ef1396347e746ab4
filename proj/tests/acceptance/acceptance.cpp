// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run criteria 1-11
//   acceptance 3 4        run a subset
//
// Exit status is 0 iff every requested criterion passes.

#include "../support/corpus.hpp"

#include "stochcirc/approximations.hpp"
#include "stochcirc/dilation.hpp"
#include "stochcirc/ensemble.hpp"
#include "stochcirc/quantum.hpp"
#include "stochcirc/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace stochcirc;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

class Stopwatch {
public:
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

template <typename... Args>
std::string format(const char* fmt, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

// L0 = C0 = 1, R0 = 0.2, M0 = 0.3, e = 0.
PhaseSpaceModel constants_model() {
    CircuitSpec s;
    s.inductance = ScalarFunction::constant(1.0);
    s.capacitance = ScalarFunction::constant(1.0);
    s.resistance = ScalarFunction::constant(0.2);
    s.memristance = ScalarFunction::constant(0.3);
    return PhaseSpaceModel::from_spec(s);
}

double median(std::vector<double> v) {
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2) return *mid;
    return 0.5 * (*mid + *std::max_element(v.begin(), mid));
}

// ---------------------------------------------------------------------------

Verdict canonicity_wiener() {
    const Stopwatch clock;
    const auto d = build_wiener_dilation(constants_model(), 1.0, 1.0);
    const int paths = 100;
    const std::size_t fine_steps = 20000;   // dt = 5e-5; coarsened once for dt = 1e-4
    std::vector<double> coarse(paths), fine(paths);
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < paths; ++k) {
        const auto noise = NoisePath::generate(101, static_cast<std::uint64_t>(k), 2, fine_steps, 1.0 / fine_steps);
        fine[k] = std::abs(plain_bracket(propagate_tangent(Scheme::rk4_stratonovich, d.system, noise, Vec2(1, 1))) - 1);
        coarse[k] = std::abs(
            plain_bracket(propagate_tangent(Scheme::rk4_stratonovich, d.system, noise.coarsened(2), Vec2(1, 1))) - 1);
    }
    const double worst = *std::max_element(coarse.begin(), coarse.end());
    const double ratio = median(coarse) / median(fine);
    const double secs = clock.seconds();
    return {worst < 5e-3 && ratio >= 2.0 && secs < 60.0,
            format("max |plain-1| at dt=1e-4: %.2e (< 5e-3); median defect ratio dt vs dt/2: %.2f (>= 2); %.1f s (< 60)",
                   worst, ratio, secs)};
}

Verdict canonicity_symplectic() {
    const Stopwatch clock;
    const auto d = build_symplectic_dilation(constants_model(), 1.0);
    const int paths = 100;
    const std::size_t steps = 10000;
    std::vector<double> ext(paths), plain(paths);
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < paths; ++k) {
        const auto noise = NoisePath::generate(202, static_cast<std::uint64_t>(k), 4, steps, 1.0 / steps);
        const auto tg = propagate_tangent(Scheme::heun, d.system, noise, Vec2(1, 1));
        ext[k] = std::abs(extended_bracket(tg) - 1.0);
        plain[k] = std::abs(plain_bracket(tg) - std::exp(-0.5));
    }
    const double worst_ext = *std::max_element(ext.begin(), ext.end());
    const double worst_plain = *std::max_element(plain.begin(), plain.end());
    const double secs = clock.seconds();
    return {worst_ext < 1e-2 && worst_plain <= 5e-3 && secs < 120.0,
            format("max |extended-1|: %.2e (< 1e-2); max |plain-exp(-0.5)|: %.2e (<= 5e-3); %.1f s (< 120)", worst_ext,
                   worst_plain, secs)};
}

constexpr std::size_t kEnsemblePaths = 100000;
constexpr double kEnsembleDt = 0.01;
constexpr double kEnsembleHorizon = 0.5;

TrajectoryStore ensemble(const SdeSystem& system, std::uint64_t seed) {
    return simulate_ensemble(system, Vec2(1.0, 1.0), kEnsembleHorizon, kEnsembleDt, kEnsemblePaths, seed,
                             Scheme::euler_maruyama);
}

Verdict drift_correspondence() {
    const Stopwatch clock;
    const auto model = constants_model();
    const DriftTarget target = [](double, const Vec2& x) { return Vec2(x(1), -x(0) - 0.5 * x(1)); };
    const auto w = ensemble(build_wiener_dilation(model).system, 303);
    const auto fw = empirical_drift(w, target);
    const auto s = ensemble(build_symplectic_dilation(model, 1.0).system, 304);
    const auto fs = empirical_drift(s, target);
    const double secs = clock.seconds();
    const double a = fw.fraction_within(3.0), b = fs.fraction_within(3.0);
    return {a >= 0.95 && b >= 0.95 && secs < 300.0,
            format("within 3 SE: wiener %.3f of %zu bins, symplectic %.3f of %zu bins (>= 0.95); %.1f s (< 300)", a,
                   fw.valid_bins(), b, fs.valid_bins(), secs)};
}

Verdict fluctuation_identity() {
    const auto model = constants_model();
    const auto d = build_wiener_dilation(model);
    const auto wp = d.w.derivative();
    const auto gp = d.g.derivative();
    const CovariationTarget wiener_target = [&](double, const Vec2& x) { return -(x(0) * wp(x(1)) + x(1) * gp(x(0))); };
    const auto fw = empirical_covariation(ensemble(d.system, 305), wiener_target);
    const auto lc = lc_symplectic_example(1.0, 1.0, 1.0);
    const auto fl = empirical_covariation(ensemble(lc.system, 306), [](double, const Vec2&) { return 0.0; });
    const double a = fw.fraction_within(3.0), b = fl.fraction_within(3.0);
    return {a >= 0.95 && b >= 0.95,
            format("within 3 SE: wiener -(qW'+pG') %.3f of %zu bins, LC example 0 %.3f of %zu bins (>= 0.95)", a,
                   fw.valid_bins(), b, fl.valid_bins())};
}

Verdict residuals() {
    const auto model = constants_model();
    const auto d = build_wiener_dilation(model);
    const auto fields = scalar_fields(d.generators);
    const Grid grid;
    const auto r = determining_residuals(
        fields, [&](double q, double p) { return model.dissipator_voltage(q, p); }, grid,
        ScalarField::from(d.hamiltonian_shift));
    double gamma_defect = 0.0;
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j)
            gamma_defect = std::max(gamma_defect, std::abs(hessian_dissipation(fields, grid.q(i), grid.p(j)) - 0.5));
    return {r.r0 < 1e-10 && r.rv < 1e-10 && gamma_defect <= 1e-12,
            format("conservative residual %.2e, voltage residual %.2e (< 1e-10); |det-Hessian sum - 0.5| %.2e (<= 1e-12)",
                   r.r0, r.rv, gamma_defect)};
}

Verdict dissipation_identities() {
    const auto model = constants_model();
    const auto d = build_symplectic_dilation(model, 1.0);
    const auto rho_p = d.rho.derivative();
    const auto mu_p = d.mu.derivative();
    const Grid grid;
    double pair_defect = 0.0, div_defect = 0.0;
    const double h = 1e-5;
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j) {
            const double q = grid.q(i), p = grid.p(j);
            const double gamma = dissipation(model, q, p);
            pair_defect = std::max(pair_defect, std::abs(gamma - d.gamma * (rho_p(p) + mu_p(q))));
            const double div = (drift_field(model, 0, q + h, p)(0) - drift_field(model, 0, q - h, p)(0) +
                                drift_field(model, 0, q, p + h)(1) - drift_field(model, 0, q, p - h)(1)) /
                               (2 * h);
            div_defect = std::max(div_defect, std::abs(gamma + div));
        }
    const auto noise = NoisePath::from_increments(std::vector<double>(1000, 0.0), 1, 1e-3);
    const double bracket =
        plain_bracket(propagate_tangent(Scheme::rk4_stratonovich, circuit_flow_system(model), noise, Vec2(1, 1)));
    const double flow_defect = std::abs(bracket - std::exp(-0.5));
    return {pair_defect <= 1e-6 && div_defect <= 1e-6 && flow_defect <= 1e-3,
            format("|gamma - Gamma(rho'+mu')| %.2e, |gamma + div v| %.2e (<= 1e-6); |bracket(1) - exp(-0.5)| %.2e "
                   "(<= 1e-3)",
                   pair_defect, div_defect, flow_defect)};
}

Verdict quantum_identities() {
    const Stopwatch clock;
    const auto model = constants_model();
    // Below this level the identities are exact up to roundoff, which grows mildly with N.
    constexpr double kRoundoffFloor = 1e-12;
    std::vector<double> worst;
    OperatorIdentityReport at40;
    for (std::size_t n : {20ul, 40ul, 60ul}) {
        const auto fock = fock_model(n, n / 4);
        const auto r = verify_operator_identities(build_quantum_dilation(model, fock), fock);
        worst.push_back(std::max({r.drift_q_rel, r.drift_p_rel, r.max_noise_residual()}));
        if (n == 40) at40 = r;
    }
    const bool monotone = worst[1] <= std::max(worst[0], kRoundoffFloor) && worst[2] <= std::max(worst[1], kRoundoffFloor);
    const double secs = clock.seconds();
    const bool ok = at40.drift_q_rel < 1e-10 && at40.drift_p_rel < 1e-10 && at40.max_noise_residual() < 1e-10 &&
                    monotone && secs < 30.0;
    return {ok, format("N=40: charge drift %.2e, flux drift %.2e, noise %.2e (< 1e-10); worst N=20/40/60: %.1e %.1e "
                       "%.1e non-increasing above %.0e; %.1f s (< 30)",
                       at40.drift_q_rel, at40.drift_p_rel, at40.max_noise_residual(), worst[0], worst[1], worst[2],
                       kRoundoffFloor, secs)};
}

Verdict master_equation() {
    const auto model = constants_model();
    const auto fock = fock_model(40, 10);
    const auto d = build_quantum_dilation(model, fock);
    const auto r = master_equation_evolve(d, density_matrix(coherent_state(40, 1.0)), 5.0, 0.005);
    // q'' + 0.5 q' + q = 0 from q(0) = sqrt(2), q'(0) = 0.
    const double wd = std::sqrt(15.0) / 4.0;
    const double q0 = std::sqrt(2.0);
    double sup_gap = 0.0, sup_ref = 0.0;
    for (const auto& s : r.samples) {
        const double e = std::exp(-s.t / 4.0), c = std::cos(wd * s.t), sn = std::sin(wd * s.t);
        const double q = q0 * e * (c + sn / (4.0 * wd));
        const double p = -q0 * e * sn / wd;
        sup_gap = std::max({sup_gap, std::abs(s.mean_q - q), std::abs(s.mean_p - p)});
        sup_ref = std::max({sup_ref, std::abs(q), std::abs(p)});
    }
    const double rel = sup_gap / sup_ref;
    const double drift = r.trace_drift_rate(), min_eig = r.min_eigenvalue();
    return {drift < 1e-9 && min_eig >= -1e-6 && rel <= 1e-3,
            format("trace drift %.2e per unit time (< 1e-9); min eigenvalue %.2e (>= -1e-6); Ehrenfest relative error "
                   "%.2e (<= 1e-3)",
                   drift, min_eig, rel)};
}

Verdict wong_zakai() {
    const auto q = PhaseFunction::q();
    const auto p = PhaseFunction::p();
    const auto h = (q * q + p * p).scaled(0.5);
    const auto d = build_wiener_dilation(constants_model());
    const PhaseFunction additive = q;
    const PhaseFunction& multiplicative = d.generators.front();   // q^2/2 + W(p)
    const std::vector<std::size_t> ns{8, 16, 32, 64, 128};
    bool ok = true;
    std::ostringstream detail;
    for (const auto& [name, f] : {std::pair<const char*, PhaseFunction>{"additive", additive},
                                  std::pair<const char*, PhaseFunction>{"multiplicative", multiplicative}}) {
        const auto study = wong_zakai_study(h, f, Vec2(1.0, 0.0), 1.0, 8192, ns, 1000, 50);
        detail << name << " e_2n<e_n:";
        for (std::size_t k = 0; k + 1 < ns.size(); ++k) {
            detail << ' ' << study.decreasing[k];
            ok = ok && study.decreasing_fraction(k) >= 0.9;
        }
        detail << "/50";
        // Additive noise has identical Ito and Stratonovich solutions, so the gap clause
        // applies to the multiplicative case only.
        if (std::string(name) == "multiplicative") {
            detail << ", Ito gap > 5 e_128 on " << study.gap_exceeds << "/50";
            ok = ok && study.gap_exceeds == study.seeds.size();
        }
        detail << "; ";
    }
    detail << "(each >= 45/50)";
    return {ok, detail.str()};
}

Verdict clt_noise() {
    AssemblyParams params;
    params.marginal = Marginal::uniform;
    std::vector<CltReport> reports;
    bool ok = true;
    std::ostringstream detail;
    for (std::size_t n : {4ul, 16ul, 64ul}) {
        reports.push_back(clt_tests(n, params, 7));
        const auto& r = reports.back();
        ok = ok && r.variance_rel_error <= 0.05 && r.bracket_sup_deviation == 1.0 / static_cast<double>(n);
        detail << "N=" << n << ": var err " << format("%.3f", r.variance_rel_error) << ", KS "
               << format("%.4f", r.ks_statistic) << ", sup|b-t| " << r.bracket_sup_deviation << "; ";
    }
    const bool decreasing =
        reports[1].ks_statistic < reports[0].ks_statistic && reports[2].ks_statistic < reports[1].ks_statistic;
    ok = ok && decreasing;
    detail << "(var err <= 0.05, KS strictly decreasing, sup = 1/N)";
    return {ok, detail.str()};
}

Verdict parser_corpus() {
    const auto files = testing::corpus_files(STOCHCIRC_CORPUS_DIR);
    std::size_t valid = 0, malformed = 0, passed = 0;
    double worst = 0.0;
    std::string failures;
    for (const auto& f : files) {
        const auto r = testing::check_corpus_file(f, 1e-12);
        (r.valid ? valid : malformed) += 1;
        if (r.pass) ++passed;
        else failures += " " + r.name + " (" + r.detail + ")";
        worst = std::max(worst, r.max_drift_error);
    }
    return {files.size() >= 20 && passed == files.size(),
            format("%zu files (%zu valid, %zu malformed), %zu match; worst drift error %.1e (<= 1e-12)", files.size(),
                   valid, malformed, passed, worst) +
                failures};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "canonicity, Wiener dilation", canonicity_wiener},
        {2, "canonicity, symplectic dilation", canonicity_symplectic},
        {3, "drift correspondence", drift_correspondence},
        {4, "fluctuation identity", fluctuation_identity},
        {5, "determining-equation residuals", residuals},
        {6, "dissipation identities", dissipation_identities},
        {7, "quantum identities", quantum_identities},
        {8, "master equation", master_equation},
        {9, "Wong-Zakai convergence", wong_zakai},
        {10, "CLT noise", clt_noise},
        {11, "netlist corpus", parser_corpus},
    };
    std::set<int> wanted;
    for (int k = 1; k < argc; ++k) wanted.insert(std::atoi(argv[k]));

    int failed = 0;
    for (const auto& c : all) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        const Stopwatch clock;
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %2d %s: %s | %s [%.1f s]\n", c.id, v.pass ? "PASS" : "FAIL", c.name, v.detail.c_str(),
                    clock.seconds());
        std::fflush(stdout);
        failed += v.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
