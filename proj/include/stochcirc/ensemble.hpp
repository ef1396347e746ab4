#pragma once

// Monte Carlo ensembles. Path i draws its increments from the counter stream
// (seed, i, channel, step), so results do not depend on the thread count.

#include "stochcirc/sde.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace stochcirc {

struct EnsembleOptions {
    std::size_t save_stride = 1;   // keep every k-th state (the final state is always kept)
    int threads = 0;               // 0: OpenMP default
};

/// States of every path at the save times, stored path-major.
struct TrajectoryStore {
    std::size_t n_paths = 0;
    std::vector<double> times;
    std::vector<Vec2> states;
    double dt = 0.0;               // integration step
    std::size_t save_stride = 1;

    [[nodiscard]] std::size_t n_saves() const noexcept { return times.size(); }
    [[nodiscard]] const Vec2& state(std::size_t path, std::size_t save) const { return states[path * times.size() + save]; }
};

/// Number of steps T/dt; throws std::invalid_argument unless T is a whole multiple of dt.
std::size_t step_count(double horizon, double dt);

TrajectoryStore simulate_ensemble(const SdeSystem& system, const Vec2& x0, double horizon, double dt,
                                  std::size_t n_paths, std::uint64_t seed, Scheme scheme,
                                  const EnsembleOptions& options = {});

/// Single-threaded reference with identical output.
TrajectoryStore simulate_ensemble_serial(const SdeSystem& system, const Vec2& x0, double horizon, double dt,
                                         std::size_t n_paths, std::uint64_t seed, Scheme scheme,
                                         const EnsembleOptions& options = {});

/// CSV with header t,q,p[,path]; rows ordered by path then time.
void write_trajectory_csv(std::ostream& os, const TrajectoryStore& store, bool with_path_column = true);

}  // namespace stochcirc
