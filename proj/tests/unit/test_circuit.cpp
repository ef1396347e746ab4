#include "stochcirc/circuit.hpp"
#include "stochcirc/errors.hpp"
#include "stochcirc/model_io.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace stochcirc;
using Catch::Approx;

namespace {

CircuitSpec constants_spec() {
    CircuitSpec s;
    s.inductance = ScalarFunction::constant(1.0);
    s.capacitance = ScalarFunction::constant(1.0);
    s.resistance = ScalarFunction::constant(0.2);
    s.memristance = ScalarFunction::constant(0.3);
    return s;
}

}  // namespace

TEST_CASE("scalar functions differentiate and integrate exactly") {
    const auto f = ScalarFunction::polynomial({1.0, -2.0, 3.0}) + ScalarFunction::sinusoid(2.0, 3.0, 0.5);
    CHECK(f(0.4) == Approx(1.0 - 0.8 + 0.48 + 2.0 * std::sin(1.7)));
    CHECK(f.derivative()(0.4) == Approx(-2.0 + 2.4 + 6.0 * std::cos(1.7)));
    const auto big = f.antiderivative();
    CHECK(big.derivative()(0.9) == Approx(f(0.9)).epsilon(1e-14));
    CHECK(big(0.0) == Approx(0.0).margin(1e-15));
}

TEST_CASE("scalar functions enforce their domain") {
    const auto f = ScalarFunction::polynomial({0.0, 1.0}, Interval{-1.0, 1.0});
    CHECK_THROWS_AS(f(1.5), DomainError);
    CHECK(f.evaluate_unchecked(1.5) == 1.5);
    CHECK_THROWS_AS(ScalarFunction::sinusoid(1, 1, 0) * ScalarFunction::identity(), NotRepresentableError);
}

TEST_CASE("elements reject non-passive characteristics") {
    CHECK_THROWS_AS(make_element(ElementKind::resistor, ScalarFunction::constant(-0.1)), PassivityError);
    CHECK_THROWS_AS(make_element(ElementKind::inductor, ScalarFunction::constant(0.0)), PassivityError);
    CHECK_THROWS_AS(make_element(ElementKind::memristor, ScalarFunction::polynomial({0.3, 0.2})), PassivityError);
    CHECK_NOTHROW(make_element(ElementKind::memristor,
                               ScalarFunction::polynomial({0.3, 0.2}, Interval{-1.4, 10.0})));
}

TEST_CASE("constant inductance gives a linear current map") {
    const auto k = legendre_from_inductance(ScalarFunction::constant(2.0));
    REQUIRE(k.constant_inductance().has_value());
    CHECK(k.current(3.0) == Approx(1.5));
    CHECK(k.kinetic_energy(3.0) == Approx(9.0 / 4.0));
}

TEST_CASE("nonlinear inductance inverts the flux map") {
    // L = 1 + I^2, flux K'(I) = I + I^3/3.
    const auto k = legendre_from_inductance(ScalarFunction::polynomial({1.0, 0.0, 1.0}));
    CHECK_FALSE(k.constant_inductance().has_value());
    for (double i : {-1.3, -0.2, 0.0, 0.7, 2.1}) {
        const double p = i + i * i * i / 3.0;
        CHECK(k.current(p) == Approx(i).margin(1e-12));
        CHECK(k.inductance(p) == Approx(1.0 + i * i).epsilon(1e-10));
        // K(p) = p I - K(I) with K(I) = I^2/2 + I^4/12.
        CHECK(k.kinetic_energy(p) == Approx(p * i - (i * i / 2.0 + i * i * i * i / 12.0)).margin(1e-12));
    }
}

TEST_CASE("constants model drift and dissipation") {
    const auto m = PhaseSpaceModel::from_spec(constants_spec());
    CHECK(m.is_series());
    const Vec2 v = drift_field(m, 0.0, 0.7, -0.4);
    CHECK(v(0) == Approx(-0.4));
    CHECK(v(1) == Approx(-0.7 + 0.5 * 0.4));
    CHECK(dissipation(m, 0.3, 1.1) == Approx(0.5));
    CHECK(energy(m, 0.0, 1.0, 1.0) == Approx(1.0));
    CHECK(resonant_frequency(1.0, 1.0) == 1.0);
}

TEST_CASE("parallel dissipator combines branch voltages harmonically") {
    auto s = constants_spec();
    s.resistance = ScalarFunction::constant(0.4);
    s.memristance = ScalarFunction::constant(0.6);
    s.topology = DissipatorTopology::parallel;
    const auto m = PhaseSpaceModel::from_spec(s);
    const double i = 0.8;
    CHECK(m.dissipator_voltage(0.1, i) == Approx(0.4 * i * 0.6 * i / (0.4 * i + 0.6 * i)));
    CHECK(m.dissipator_voltage(0.1, 0.0) == 0.0);
    CHECK(dissipation(m, 0.1, i) == Approx(0.24).epsilon(1e-6));
}

TEST_CASE("polynomial resistor voltage integrates the incremental resistance") {
    auto s = constants_spec();
    s.resistance = ScalarFunction::polynomial({0.2, 0.0, 0.6});
    s.memristance.reset();
    const auto m = PhaseSpaceModel::from_spec(s);
    CHECK(m.resistor_voltage(1.5) == Approx(0.2 * 1.5 + 0.2 * 1.5 * 1.5 * 1.5));
    CHECK(dissipation(m, 0.0, 1.5) == Approx(0.2 + 0.6 * 2.25));
}

TEST_CASE("model documents round-trip through JSON") {
    auto s = constants_spec();
    s.drive = ScalarFunction::sinusoid(2.0, 3.0, 0.5, kTimeDomain);
    const auto m = PhaseSpaceModel::from_spec(s);
    const auto doc = model_to_json(m);
    CHECK(doc.at("format") == kModelFormat);
    CHECK(doc.at("flags").at("series") == true);
    CHECK(spec_from_json(doc) == s);
}
