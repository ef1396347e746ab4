#include "stochcirc/dilation.hpp"
#include "stochcirc/errors.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace stochcirc;
using Catch::Approx;

namespace {

PhaseSpaceModel make_model(bool nonlinear) {
    CircuitSpec s;
    s.inductance = ScalarFunction::constant(1.0);
    s.capacitance = ScalarFunction::constant(1.0);
    if (nonlinear) {
        s.resistance = ScalarFunction::polynomial({0.2, 0.0, 0.6});
        s.memristance = ScalarFunction::polynomial({0.3, 0.0, 0.2});
        s.drive = ScalarFunction::sinusoid(0.5, 2.0, 0.0, kTimeDomain);
    } else {
        s.resistance = ScalarFunction::constant(0.2);
        s.memristance = ScalarFunction::constant(0.3);
    }
    return PhaseSpaceModel::from_spec(s);
}

double max_drift_defect(const PhaseSpaceModel& m, const SdeSystem& sys, const Grid& g, double t) {
    double worst = 0.0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            const Vec2 x(g.q(i), g.p(j));
            worst = std::max(worst, (sys.ito_drift()(t, x) - drift_field(m, t, x(0), x(1))).norm());
        }
    return worst;
}

}  // namespace

TEST_CASE("Wiener dilation reproduces the circuit as its Ito drift") {
    for (bool nonlinear : {false, true}) {
        for (auto [c, ell] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
            INFO("nonlinear " << nonlinear << " c " << c << " ell " << ell);
            const auto m = make_model(nonlinear);
            const auto d = build_wiener_dilation(m, c, ell);
            const Grid g;
            CHECK(max_drift_defect(m, d.system, g, 0.7) < 1e-10);

            const auto fields = scalar_fields(d.generators);
            const auto res = determining_residuals(
                fields, [&](double q, double p) { return m.dissipator_voltage(q, p); }, g,
                ScalarField::from(d.hamiltonian_shift));
            CHECK(res.r0 < 1e-10);
            CHECK(res.rv < 1e-10);
            for (double q : {-1.0, 0.2, 1.5})
                for (double p : {-0.7, 0.0, 1.1})
                    CHECK(hessian_dissipation(fields, q, p) == Approx(dissipation(m, q, p)).margin(1e-12));
        }
    }
}

TEST_CASE("Wiener covariation is minus q W' minus p G'") {
    const auto m = make_model(false);
    const auto d = build_wiener_dilation(m);
    for (double q : {-1.0, 0.5})
        for (double p : {-0.3, 2.0})
            CHECK(d.system.covariation_rate(0.0, Vec2(q, p)) ==
                  Approx(-(q * d.w.derivative()(p) + p * d.g.derivative()(q))).margin(1e-14));
}

TEST_CASE("componentwise and compact Ito drifts agree") {
    const auto m = make_model(true);
    const auto d = build_wiener_dilation(m);
    const auto h = ScalarField::from(d.hamiltonian);
    const auto fields = scalar_fields(d.generators);
    for (double q : {-0.5, 0.9})
        for (double p : {-1.2, 0.4}) {
            const Vec2 a = ito_drift_componentwise(h, fields, q, p);
            const Vec2 b = ito_drift_compact(h, fields, q, p);
            CHECK((a - b).norm() < 1e-12);
            CHECK((a - drift_field(m, 0.0, q, p)).norm() < 1e-10);
        }
}

TEST_CASE("symplectic dilation pairs dissipation with its bracket") {
    for (bool nonlinear : {false, true}) {
        for (double gamma : {1.0, 2.0}) {
            INFO("nonlinear " << nonlinear << " gamma " << gamma);
            const auto m = make_model(nonlinear);
            const auto d = build_symplectic_dilation(m, gamma);
            const auto pair = pair_bracket_dissipation(d);
            for (double q : {-1.0, 0.3})
                for (double p : {-0.5, 1.4}) {
                    CHECK(pair(0.0, q, p) == Approx(dissipation(m, q, p)).margin(1e-12));
                    CHECK(gamma * (d.rho.derivative()(p) + d.mu.derivative()(q)) ==
                          Approx(dissipation(m, q, p)).margin(1e-12));
                }
            CHECK(max_drift_defect(m, d.system, Grid{}, 0.4) < 1e-10);
            CHECK(d.system.pairs().size() == 2);
        }
    }
}

TEST_CASE("printed momentum signs change the noise but not the drift") {
    const auto m = make_model(false);
    const auto a = build_symplectic_dilation(m, 1.0, MomentumNoiseSigns::bracket_derived);
    const auto b = build_symplectic_dilation(m, 1.0, MomentumNoiseSigns::printed);
    const Vec2 x(0.4, -0.8);
    CHECK((a.system.ito_drift()(0.0, x) - b.system.ito_drift()(0.0, x)).norm() < 1e-12);
    const Vec2 sa = a.system.channels()[1].field(0.0, x);
    const Vec2 sb = b.system.channels()[1].field(0.0, x);
    CHECK(sa(1) == Approx(-sb(1)));
}

TEST_CASE("divergence field has the prescribed divergence") {
    const auto m = make_model(true);
    const auto d = build_symplectic_dilation(m, 1.5);
    for (double q : {-0.4, 0.8})
        for (double p : {-1.0, 0.6})
            CHECK(d.u.divergence(0.0, Vec2(q, p)) == Approx(-d.gamma * (d.rho.derivative()(p) + d.mu.derivative()(q))));
    const auto fields_u = u_field(d.f, d.g, d.gamma, UFieldForm::particular);
    CHECK(fields_u.divergence(0.0, Vec2(0.3, 0.2)) == Approx(d.u.divergence(0.0, Vec2(0.3, 0.2))));
}

TEST_CASE("LC example has no covariation and unit-rate damping") {
    const auto d = lc_symplectic_example(1.0, 1.0, 1.0);
    CHECK(d.system.covariation_rate(0.0, Vec2(0.5, 0.5)) == 0.0);
    CHECK(d.u(0.0, Vec2(0.3, 2.0))(1) == Approx(-2.0));
}

TEST_CASE("single-generator ratio test") {
    const auto q = PhaseFunction::q();
    const auto p = PhaseFunction::p();
    Grid g;
    g.p_lo = 0.5;
    g.p_hi = 2.0;
    // F = q + p^2: F_q / F_p = 1 / 2p depends on p.
    const auto bad = xi_condition(ScalarField::from(q + p * p), g);
    CHECK_FALSE(bad.ok);
    // F = q + p: the ratio is 1.
    const auto good = xi_condition(ScalarField::from(q + p), g);
    CHECK(good.ok);
    CHECK(good(0.3) == Approx(1.0));
}

TEST_CASE("dilations require a series model with constant inductance") {
    CircuitSpec s;
    s.inductance = ScalarFunction::polynomial({1.0, 0.0, 1.0});
    s.capacitance = ScalarFunction::constant(1.0);
    s.resistance = ScalarFunction::constant(0.2);
    const auto nonlinear_l = PhaseSpaceModel::from_spec(s);
    CHECK_THROWS_AS(build_wiener_dilation(nonlinear_l), UnsupportedModelError);
    CHECK_THROWS_AS(build_symplectic_dilation(nonlinear_l, 1.0), UnsupportedModelError);

    s.inductance = ScalarFunction::constant(1.0);
    s.memristance = ScalarFunction::constant(0.3);
    s.topology = DissipatorTopology::parallel;
    CHECK_THROWS_AS(build_wiener_dilation(PhaseSpaceModel::from_spec(s)), UnsupportedModelError);
}
