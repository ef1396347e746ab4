#pragma once

// Smooth-noise (Wong-Zakai) approximation of Stratonovich dynamics, and the
// central-limit construction of symplectic noise from an assembly of
// thermally populated oscillators.

#include "stochcirc/sde.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace stochcirc {

// -----------------------------------------------------------------------------
// Wong-Zakai
// -----------------------------------------------------------------------------

/// Piecewise-linear interpolation of one channel of a base path on n equal intervals.
class SmoothNoise {
public:
    SmoothNoise(const NoisePath& base, std::size_t channel, std::size_t n);

    [[nodiscard]] double value(double t) const;
    /// Slope on the interval containing t (right-continuous at nodes).
    [[nodiscard]] double slope(double t) const;
    [[nodiscard]] std::size_t intervals() const noexcept { return node_values_.size() - 1; }
    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    [[nodiscard]] double node_value(std::size_t j) const { return node_values_.at(j); }

private:
    std::vector<double> node_values_;
    double horizon_ = 0.0;
};

struct WongZakaiRow {
    std::size_t n = 0;
    double error = 0.0;            // sup over the grid nodes of |x_n - x_strat|
    double terminal_error = 0.0;   // |x_n(T) - x_strat(T)|
};

struct WongZakaiTable {
    std::vector<WongZakaiRow> rows;
    double ito_terminal_gap = 0.0;   // |x_ito(T) - x_strat(T)| on the same base path
    double strat_ode_gap = 0.0;      // only meaningful with zero noise: sup |RK4 - Heun|
};

/// Time points over which the sup-norm error e_n is taken.
enum class ErrorNodes {
    own_grid,        // t = j T / n
    coarsest_grid,   // t = j T / n_list.front(), shared by every n
    base_grid,       // every step of the base path
};

struct WongZakaiOptions {
    std::size_t substeps = 32;   // RK4 steps per interpolation interval (>= 20)
    ErrorNodes nodes = ErrorNodes::own_grid;
};

/// Integrates x' = J grad H + J grad F * dB^(n)/dt with RK4 for each n, and the
/// Stratonovich equation (Heun) on the fine base path. The Ito reference reads the
/// same coefficients as an Ito equation (drift J grad H, Euler-Maruyama).
/// Requires every n to divide the base step count and n * substeps to divide it too.
WongZakaiTable wong_zakai_compare(const PhaseFunction& h, const PhaseFunction& f, const Vec2& x0,
                                  const NoisePath& base, const std::vector<std::size_t>& n_list,
                                  const WongZakaiOptions& options = {});

void write_wong_zakai_csv(std::ostream& os, const WongZakaiTable& table);

/// wong_zakai_compare over consecutive seeds, one base path per seed.
struct WongZakaiStudy {
    std::vector<std::uint64_t> seeds;
    std::vector<WongZakaiTable> tables;
    /// Entry k counts seeds with e(n_list[k+1]) < e(n_list[k]).
    std::vector<std::size_t> decreasing;
    /// Seeds whose Ito terminal gap exceeds gap_factor times the final e_n.
    std::size_t gap_exceeds = 0;
    double gap_factor = 5.0;

    [[nodiscard]] double decreasing_fraction(std::size_t k) const;
    [[nodiscard]] double gap_fraction() const;
};

WongZakaiStudy wong_zakai_study(const PhaseFunction& h, const PhaseFunction& f, const Vec2& x0, double horizon,
                                std::size_t base_steps, const std::vector<std::size_t>& n_list,
                                std::uint64_t first_seed, std::size_t n_seeds, double gap_factor = 5.0,
                                const WongZakaiOptions& options = {}, int threads = 0);

/// Rows seed,n,e_n,terminal_error,ito_gap.
void write_wong_zakai_study_csv(std::ostream& os, const WongZakaiStudy& study);

// -----------------------------------------------------------------------------
// Oscillator assembly
// -----------------------------------------------------------------------------

enum class Marginal { gaussian, uniform };

struct AssemblyParams {
    double inductance = 1.0;     // L0
    double capacitance = 1.0;    // C0
    double thermal_energy = 1.0; // k_B T
    Marginal marginal = Marginal::gaussian;
};

/// Step-function partial-sum processes of i.i.d. oscillator samples,
///   Q(t) = N^{-1/2} sum_{k <= floor(N t)} q_k,  Var q_k = C0 k_B T,
///   P(t) = N^{-1/2} sum_{k <= floor(N t)} p_k,  Var p_k = L0 k_B T.
class OscillatorAssembly {
public:
    OscillatorAssembly(std::size_t n, double horizon, const AssemblyParams& params, std::vector<double> q,
                       std::vector<double> p);

    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    [[nodiscard]] const std::vector<double>& q_samples() const noexcept { return q_; }
    [[nodiscard]] const std::vector<double>& p_samples() const noexcept { return p_; }

    [[nodiscard]] double charge_process(double t) const;     // Q^(N)(t)
    [[nodiscard]] double momentum_process(double t) const;   // P^(N)(t)
    /// Bracket value function b(t) = floor(N t) / N.
    [[nodiscard]] double bracket(double t) const;

private:
    [[nodiscard]] std::size_t count(double t) const;

    std::size_t n_;
    double horizon_;
    AssemblyParams params_;
    std::vector<double> q_, p_;
    std::vector<double> q_partial_, p_partial_;
};

/// floor(N t + 1e-9) / N, robust to t landing a rounding error below a grid point.
double bracket_value(std::size_t n, double t);
/// sup_{0 <= t <= 1} |b(t) - t| = 1/N, attained as a left limit at each jump.
double bracket_sup_deviation(std::size_t n);

/// Samples one assembly; replicate r of seed s is reproducible. Throws if N < 1.
OscillatorAssembly sample_assembly(std::size_t n, double horizon, const AssemblyParams& params, std::uint64_t seed,
                                   std::uint64_t replicate = 0);

struct CltReport {
    std::size_t n = 0;
    std::size_t replicates = 0;
    double variance_q1 = 0.0;         // pooled over unit windows
    double variance_target = 0.0;     // C0 k_B T b(1)
    double variance_rel_error = 0.0;
    double correlation_qp = 0.0;      // corr(Q(1), P(1)) across replicates
    double correlation_bound = 0.0;   // 3 / sqrt(replicates)
    double ks_statistic = 0.0;        // normalized quarter-window increments vs N(0, 1)
    double lag1_correlation = 0.0;    // between consecutive quarter-window increments
    std::size_t increments = 0;
    double bracket_sup_deviation = 0.0;
};

struct CltOptions {
    std::size_t replicates = 1000;
    double horizon = 40.0;
    double window = 0.25;
    int threads = 0;
};

/// Throws std::invalid_argument with fewer than 1000 replicates.
CltReport clt_tests(std::size_t n, const AssemblyParams& params, std::uint64_t seed, const CltOptions& options = {});
CltReport clt_tests_serial(std::size_t n, const AssemblyParams& params, std::uint64_t seed,
                           const CltOptions& options = {});

/// Two-sided Kolmogorov-Smirnov statistic of a sample against the standard normal.
double ks_statistic_normal(std::vector<double> sample);

nlohmann::json to_json(const CltReport& r);

}  // namespace stochcirc
