#include "stochcirc/dilation.hpp"
#include "stochcirc/ensemble.hpp"
#include "stochcirc/verify.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

using namespace stochcirc;
using Catch::Approx;

namespace {

PhaseSpaceModel constants_model() {
    CircuitSpec s;
    s.inductance = ScalarFunction::constant(1.0);
    s.capacitance = ScalarFunction::constant(1.0);
    s.resistance = ScalarFunction::constant(0.2);
    s.memristance = ScalarFunction::constant(0.3);
    return PhaseSpaceModel::from_spec(s);
}

}  // namespace

TEST_CASE("deterministic damped flow contracts area at the dissipation rate") {
    const auto sys = circuit_flow_system(constants_model());
    const auto noise = NoisePath::from_increments(std::vector<double>(1000, 0.0), 1, 1e-3);
    const auto tg = propagate_tangent(Scheme::rk4_stratonovich, sys, noise, Vec2(1.0, 1.0));
    CHECK(plain_bracket(tg) == Approx(std::exp(-0.5)).epsilon(1e-10));
    CHECK_THROWS_AS(extended_bracket(tg), std::invalid_argument);
}

TEST_CASE("Wiener dilation paths preserve the bracket") {
    const auto d = build_wiener_dilation(constants_model());
    for (std::uint64_t path = 0; path < 5; ++path) {
        const auto noise = NoisePath::generate(3, path, 2, 2000, 5e-4);
        const auto tg = propagate_tangent(Scheme::rk4_stratonovich, d.system, noise, Vec2(1.0, 1.0));
        CHECK(std::abs(plain_bracket(tg) - 1.0) < 1e-3);
    }
}

TEST_CASE("symplectic dilation preserves the extended bracket only") {
    const auto d = build_symplectic_dilation(constants_model(), 1.0);
    const auto noise = NoisePath::generate(5, 0, 4, 2000, 5e-4);
    TangentOptions opts;
    opts.record_every = 500;
    const auto tg = propagate_tangent(Scheme::heun, d.system, noise, Vec2(1.0, 1.0), opts);
    CHECK(std::abs(extended_bracket(tg) - 1.0) < 1e-3);
    CHECK(plain_bracket(tg) == Approx(std::exp(-0.5)).margin(1e-3));
    REQUIRE(tg.history.size() >= 4);
    CHECK(tg.history.back().t == Approx(1.0));
    std::ostringstream os;
    write_bracket_csv(os, tg.history);
    CHECK(os.str().rfind("t,plain_bracket,extended_bracket", 0) == 0);
}

TEST_CASE("stored noise sensitivities match finite differences") {
    const auto d = build_wiener_dilation(constants_model());
    const std::size_t steps = 50;
    const double dt = 0.02;
    const auto noise = NoisePath::generate(8, 0, 2, steps, dt);
    TangentOptions opts;
    opts.store_sensitivities = true;
    const auto tg = propagate_tangent(Scheme::heun, d.system, noise, Vec2(0.5, -0.2), opts);
    const double eps = 1e-6;
    for (std::size_t k : {0ul, 17ul, 49ul}) {
        for (std::size_t c : {0ul, 1ul}) {
            std::vector<double> up(steps * 2), dn(steps * 2);
            for (std::size_t s = 0; s < steps; ++s)
                for (std::size_t a = 0; a < 2; ++a) up[s * 2 + a] = dn[s * 2 + a] = noise.increment(a, s);
            up[k * 2 + c] += eps;
            dn[k * 2 + c] -= eps;
            const auto xu = integrate_path(Scheme::heun, d.system, Vec2(0.5, -0.2), 0.0,
                                           NoisePath::from_increments(up, 2, dt)).back();
            const auto xd = integrate_path(Scheme::heun, d.system, Vec2(0.5, -0.2), 0.0,
                                           NoisePath::from_increments(dn, 2, dt)).back();
            CHECK((tg.sensitivity(c, k) - (xu - xd) / (2 * eps)).norm() < 1e-7);
        }
    }
}

TEST_CASE("bin boxes index and center consistently") {
    BinBox box{-1.0, 1.0, 0.0, 2.0, 4, 2};
    CHECK(box.index(Vec2(-0.9, 0.1)) == 0);
    CHECK(box.index(Vec2(2.0, 0.1)) == -1);
    const int k = box.index(Vec2(0.6, 1.6));
    REQUIRE(k >= 0);
    CHECK(box.center(k)(0) == Approx(0.75));
    CHECK(box.center(k)(1) == Approx(1.5));
}

TEST_CASE("drift and covariation estimators recover the dilation fields") {
    const auto m = constants_model();
    const auto d = build_wiener_dilation(m);
    EnsembleOptions eo;
    eo.threads = 2;
    const auto store = simulate_ensemble(d.system, Vec2(1.0, 1.0), 0.5, 0.01, 4000, 17, Scheme::euler_maruyama, eo);
    EstimatorOptions opts;
    opts.bins = 8;
    const auto drift = empirical_drift(store, [&](double t, const Vec2& x) { return drift_field(m, t, x(0), x(1)); },
                                       opts);
    CHECK(drift.valid_bins() > 10);
    CHECK(drift.fraction_within(3.0) >= 0.9);
    const auto cov = empirical_covariation(
        store, [&](double t, const Vec2& x) { return d.system.covariation_rate(t, x); }, opts);
    CHECK(cov.fraction_within(3.0) >= 0.9);

    const auto serial = empirical_drift_serial(
        store, [&](double t, const Vec2& x) { return drift_field(m, t, x(0), x(1)); }, opts);
    REQUIRE(serial.bins.size() == drift.bins.size());
    for (std::size_t k = 0; k < serial.bins.size(); ++k) {
        CHECK(serial.bins[k].count == drift.bins[k].count);
        CHECK((serial.bins[k].estimate - drift.bins[k].estimate).norm() < 1e-12);
    }
}

TEST_CASE("check results serialize with a pass verdict") {
    const auto ok = make_check("a", 1.0, 1.0 + 1e-4, 1e-3);
    const auto bad = make_check("b", 0.0, 0.5, 0.1);
    CHECK(ok.pass);
    CHECK_FALSE(bad.pass);
    const auto j = report_json({ok, bad});
    CHECK(j.at("all_pass") == false);
    CHECK(j.at("checks").size() == 2);
}
