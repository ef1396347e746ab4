#include "stochcirc/approximations.hpp"
#include "stochcirc/rng.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <sstream>

using namespace stochcirc;
using Catch::Approx;

namespace {

const PhaseFunction kQ = PhaseFunction::q();
const PhaseFunction kP = PhaseFunction::p();
const PhaseFunction kOscillator = (kQ * kQ + kP * kP).scaled(0.5);

}  // namespace

TEST_CASE("smooth noise interpolates the base path at its nodes") {
    const auto base = NoisePath::generate(4, 0, 1, 64, 1.0 / 64);
    const SmoothNoise s(base, 0, 8);
    CHECK(s.intervals() == 8);
    CHECK(s.horizon() == Approx(1.0));
    for (std::size_t j = 0; j <= 8; ++j) {
        CHECK(s.node_value(j) == Approx(base.value(0, 8 * j)).margin(1e-15));
        CHECK(s.value(j / 8.0) == Approx(base.value(0, 8 * j)).margin(1e-14));
    }
    const double mid = 0.5 * (s.node_value(3) + s.node_value(4));
    CHECK(s.value(3.5 / 8.0) == Approx(mid).margin(1e-14));
    CHECK(s.slope(3.2 / 8.0) == Approx((s.node_value(4) - s.node_value(3)) * 8.0));
    CHECK_THROWS_AS(SmoothNoise(base, 0, 7), std::invalid_argument);
}

TEST_CASE("without noise the smooth and Stratonovich solutions coincide") {
    const auto base = NoisePath::generate(1, 0, 1, 8192, 1.0 / 8192);
    const auto t = wong_zakai_compare(kOscillator, PhaseFunction{}, Vec2(1.0, 0.0), base, {8, 16});
    CHECK(t.strat_ode_gap <= 1e-8);
    for (const auto& row : t.rows) CHECK(row.error <= 1e-8);
}

TEST_CASE("smooth-noise error shrinks on average under refinement") {
    const auto f = (kQ * kQ).scaled(0.5) + (kP * kP).scaled(0.1);
    const auto study = wong_zakai_study(kOscillator, f, Vec2(1.0, 0.0), 1.0, 2048, {8, 16, 32}, 1000, 12);
    REQUIRE(study.tables.size() == 12);
    double e8 = 0.0, e32 = 0.0;
    for (const auto& t : study.tables) {
        e8 += t.rows[0].error;
        e32 += t.rows[2].error;
    }
    CHECK(e32 < 0.5 * e8);
    double gap = 0.0;
    for (const auto& t : study.tables) gap += t.ito_terminal_gap;
    CHECK(gap > 5.0 * e32);   // the Ito reading differs at order one
    std::ostringstream os;
    write_wong_zakai_study_csv(os, study);
    CHECK(os.str().rfind("seed,n,e_n,terminal_error,ito_gap\n", 0) == 0);
}

TEST_CASE("additive noise has no Ito-Stratonovich gap") {
    const auto base = NoisePath::generate(2, 0, 1, 2048, 1.0 / 2048);
    const auto t = wong_zakai_compare(kOscillator, kQ, Vec2(1.0, 0.0), base, {8, 16});
    CHECK(t.ito_terminal_gap < 0.02);
}

TEST_CASE("Wong-Zakai study is deterministic across thread counts") {
    const auto f = (kQ * kQ).scaled(0.5);
    const auto a = wong_zakai_study(kOscillator, f, Vec2(1.0, 0.0), 1.0, 512, {8, 16}, 7, 4, 5.0, {}, 1);
    const auto b = wong_zakai_study(kOscillator, f, Vec2(1.0, 0.0), 1.0, 512, {8, 16}, 7, 4, 5.0, {}, 3);
    for (std::size_t s = 0; s < 4; ++s) CHECK(a.tables[s].rows[1].error == b.tables[s].rows[1].error);
}

TEST_CASE("bracket metadata is a step function with deviation 1/N") {
    CHECK(bracket_value(4, 0.5) == 0.5);
    CHECK(bracket_value(4, 0.49) == 0.25);
    CHECK(bracket_value(3, 1.0 / 3.0) == Approx(1.0 / 3.0));
    for (std::size_t n : {1ul, 4ul, 16ul, 64ul}) CHECK(bracket_sup_deviation(n) == 1.0 / static_cast<double>(n));
}

TEST_CASE("assembly processes are scaled partial sums") {
    AssemblyParams params;
    params.capacitance = 2.0;
    const auto a = sample_assembly(4, 2.0, params, 3, 0);
    REQUIRE(a.q_samples().size() == 8);
    const double s3 = a.q_samples()[0] + a.q_samples()[1] + a.q_samples()[2];
    CHECK(a.charge_process(0.8) == Approx(s3 / 2.0));
    CHECK(a.charge_process(0.0) == 0.0);
    CHECK(a.bracket(0.8) == 0.75);
    CHECK_THROWS(a.charge_process(2.5));
}

TEST_CASE("uniform marginals are bounded with the requested variance") {
    AssemblyParams params;
    params.marginal = Marginal::uniform;
    params.capacitance = 3.0;
    const auto a = sample_assembly(1, 20000, params, 5, 0);
    const double bound = std::sqrt(3.0) * std::sqrt(3.0);
    double var = 0.0;
    for (double x : a.q_samples()) {
        CHECK(std::abs(x) <= bound);
        var += x * x / a.q_samples().size();
    }
    CHECK(var == Approx(3.0).epsilon(0.03));
}

TEST_CASE("KS statistic against the standard normal") {
    CHECK(ks_statistic_normal({0.0}) == Approx(0.5));
    std::vector<double> z;
    for (std::uint32_t k = 0; k < 20000; ++k) z.push_back(standard_normal(12, 0, 0, k));
    CHECK(ks_statistic_normal(z) < 1.36 / std::sqrt(20000.0) * 1.5);
}

TEST_CASE("CLT report is thread-count independent and meets its targets") {
    AssemblyParams params;
    params.marginal = Marginal::uniform;
    CltOptions opts;
    opts.horizon = 8;
    opts.threads = 2;
    const auto par = clt_tests(16, params, 7, opts);
    const auto ser = clt_tests_serial(16, params, 7, opts);
    CHECK(par.variance_q1 == ser.variance_q1);
    CHECK(par.ks_statistic == ser.ks_statistic);
    CHECK(par.variance_rel_error < 0.05);
    CHECK(std::abs(par.correlation_qp) < par.correlation_bound);
    CHECK(par.bracket_sup_deviation == 1.0 / 16.0);
    CHECK(to_json(par).at("N") == 16);
    opts.replicates = 999;
    CHECK_THROWS_AS(clt_tests(16, params, 7, opts), std::invalid_argument);
}
