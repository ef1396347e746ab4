#pragma once

// Pathwise canonicity certificates and ensemble estimators of drift and
// quadratic covariation.

#include "stochcirc/circuit.hpp"
#include "stochcirc/ensemble.hpp"

#include "json.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace stochcirc {

// -----------------------------------------------------------------------------
// Tangent flow
// -----------------------------------------------------------------------------

struct BracketSample {
    double t = 0.0;
    double plain = 1.0;
    double extended = 1.0;
};

/// Linearized flow of one path. Sensitivities to the increment of step k are
/// kept pulled back to time 0 (s^_k = J_{k+1}^{-1} dx_{k+1}/d dW_k), so the
/// sensitivity at the final time is J_T s^_k and storage stays O(steps).
struct TangentFlowState {
    Vec2 state = Vec2::Zero();
    Mat2 jacobian = Mat2::Identity();
    double dt = 0.0;
    std::size_t steps = 0;
    std::size_t channels = 0;
    std::vector<SymplecticPair> pairs;
    /// Per pair: dt * sum_k s^Q_k x s^P_k.
    std::vector<double> pair_sums;
    /// Optional per-step pulled-back sensitivities, [step * channels + channel].
    std::vector<Vec2> pulled_back;
    /// Optional bracket history.
    std::vector<BracketSample> history;

    /// d x_T / d dW^a_k; requires stored sensitivities.
    [[nodiscard]] Vec2 sensitivity(std::size_t channel, std::size_t step) const;
};

struct TangentOptions {
    bool store_sensitivities = false;
    std::size_t record_every = 0;   // 0: no bracket history
    double t0 = 0.0;
};

/// Propagates state, Jacobian and noise sensitivities with the exact derivative of the chosen scheme.
TangentFlowState propagate_tangent(Scheme scheme, const SdeSystem& system, const NoisePath& noise, const Vec2& x0,
                                   const TangentOptions& options = {});

/// {q_T, p_T} with respect to the initial point: det J_T.
double plain_bracket(const TangentFlowState& tangent);

/// det J_T + sum_pairs Gamma dt sum_k (S^Q_k x S^P_k). Throws std::invalid_argument without pairs.
double extended_bracket(const TangentFlowState& tangent);

void write_bracket_csv(std::ostream& os, const std::vector<BracketSample>& series);

/// Deterministic circuit flow as a system with one zero diffusion channel, so any
/// one-channel noise path (e.g. all zeros) drives it.
SdeSystem circuit_flow_system(const PhaseSpaceModel& model);

// -----------------------------------------------------------------------------
// Binned estimators
// -----------------------------------------------------------------------------

struct BinBox {
    double q_lo = 0.0, q_hi = 1.0;
    double p_lo = 0.0, p_hi = 1.0;
    int nq = 20, np = 20;

    /// Bin index, or -1 outside the box.
    [[nodiscard]] int index(const Vec2& x) const noexcept;
    [[nodiscard]] Vec2 center(int bin) const noexcept;
};

/// The lo/hi percentile box of every stored state that has a successor.
BinBox percentile_box(const TrajectoryStore& store, double lo_percent = 1.0, double hi_percent = 99.0, int bins = 20);

struct BinEstimate {
    std::size_t count = 0;
    bool valid = false;
    Vec2 center = Vec2::Zero();
    Vec2 estimate = Vec2::Zero();
    Vec2 standard_error = Vec2::Zero();
    Vec2 target = Vec2::Zero();   // target averaged over the bin's samples
};

struct FieldEstimate {
    BinBox box;
    int components = 2;
    std::vector<BinEstimate> bins;

    [[nodiscard]] std::size_t valid_bins() const;
    /// Fraction of valid bins where every component is within k standard errors of its target.
    [[nodiscard]] double fraction_within(double k) const;
};

struct EstimatorOptions {
    std::size_t min_samples = 30;
    int bins = 20;
    int threads = 0;
};

using DriftTarget = std::function<Vec2(double t, const Vec2& x)>;
using CovariationTarget = std::function<double(double t, const Vec2& x)>;

/// Bin-wise E[dx | x] / dt over consecutive stored states.
FieldEstimate empirical_drift(const TrajectoryStore& store, const DriftTarget& target, const EstimatorOptions& options = {});
FieldEstimate empirical_drift_serial(const TrajectoryStore& store, const DriftTarget& target,
                                     const EstimatorOptions& options = {});

/// Bin-wise Cov(dq, dp | x) / dt (centered within the bin). Component 0 only.
FieldEstimate empirical_covariation(const TrajectoryStore& store, const CovariationTarget& target,
                                    const EstimatorOptions& options = {});
FieldEstimate empirical_covariation_serial(const TrajectoryStore& store, const CovariationTarget& target,
                                           const EstimatorOptions& options = {});

// -----------------------------------------------------------------------------
// Reports
// -----------------------------------------------------------------------------

struct CheckResult {
    std::string name;
    double target = 0.0;
    double estimate = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    nlohmann::json details = nlohmann::json::object();
};

/// |estimate - target| <= tolerance.
CheckResult make_check(std::string name, double target, double estimate, double tolerance);

nlohmann::json report_json(const std::vector<CheckResult>& checks);

}  // namespace stochcirc
