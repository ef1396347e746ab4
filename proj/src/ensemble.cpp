#include "stochcirc/ensemble.hpp"

#include "stochcirc/errors.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <omp.h>

namespace stochcirc {

namespace {

struct Layout {
    std::size_t steps;
    std::vector<double> times;
};

Layout layout(double horizon, double dt, std::size_t stride) {
    if (stride == 0) throw std::invalid_argument("save stride must be at least 1");
    Layout l;
    l.steps = step_count(horizon, dt);
    for (std::size_t k = 0; k <= l.steps; ++k) {
        if (k % stride == 0 || k == l.steps) l.times.push_back(static_cast<double>(k) * dt);
    }
    return l;
}

void run_path(const SdeSystem& system, const Vec2& x0, double dt, std::size_t steps, std::size_t stride,
              const NoiseStream& noise, std::uint64_t path, Scheme scheme, Vec2* out) {
    std::vector<double> dw(system.channel_count());
    Vec2 x = x0;
    std::size_t slot = 0;
    out[slot++] = x;
    try {
        for (std::size_t k = 0; k < steps; ++k) {
            noise.increments(path, k, dw);
            x = step(scheme, system, x, static_cast<double>(k) * dt, dt, dw, k);
            if ((k + 1) % stride == 0 || k + 1 == steps) out[slot++] = x;
        }
    } catch (const IntegrationError& e) {
        throw IntegrationError("integration failed", e.step(), static_cast<std::ptrdiff_t>(path));
    }
}

TrajectoryStore prepare(const Layout& l, std::size_t n_paths, double dt, std::size_t stride) {
    if (n_paths == 0) throw std::invalid_argument("n_paths must be at least 1");
    TrajectoryStore store;
    store.n_paths = n_paths;
    store.times = l.times;
    store.states.resize(n_paths * l.times.size());
    store.dt = dt;
    store.save_stride = stride;
    return store;
}

}  // namespace

std::size_t step_count(double horizon, double dt) {
    if (!(dt > 0.0) || !(horizon >= 0.0)) throw std::invalid_argument("need dt > 0 and T >= 0");
    const double n = std::round(horizon / dt);
    if (std::abs(n * dt - horizon) > 1e-9 * std::max(1.0, horizon)) {
        throw std::invalid_argument("T must be an integer multiple of dt");
    }
    return static_cast<std::size_t>(n);
}

TrajectoryStore simulate_ensemble(const SdeSystem& system, const Vec2& x0, double horizon, double dt,
                                  std::size_t n_paths, std::uint64_t seed, Scheme scheme,
                                  const EnsembleOptions& options) {
    const Layout l = layout(horizon, dt, options.save_stride);
    TrajectoryStore store = prepare(l, n_paths, dt, options.save_stride);
    const NoiseStream noise(seed, dt);
    const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();

    // The lowest failing path index wins so the reported error is thread-count independent.
    std::size_t failed_path = std::numeric_limits<std::size_t>::max();
    std::exception_ptr failure;
    const auto n = static_cast<std::ptrdiff_t>(n_paths);
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto path = static_cast<std::size_t>(i);
        try {
            run_path(system, x0, dt, l.steps, options.save_stride, noise, path, scheme,
                     &store.states[path * l.times.size()]);
        } catch (...) {
#pragma omp critical(stochcirc_ensemble_failure)
            if (path < failed_path) {
                failed_path = path;
                failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
    return store;
}

TrajectoryStore simulate_ensemble_serial(const SdeSystem& system, const Vec2& x0, double horizon, double dt,
                                         std::size_t n_paths, std::uint64_t seed, Scheme scheme,
                                         const EnsembleOptions& options) {
    const Layout l = layout(horizon, dt, options.save_stride);
    TrajectoryStore store = prepare(l, n_paths, dt, options.save_stride);
    const NoiseStream noise(seed, dt);
    for (std::size_t path = 0; path < n_paths; ++path) {
        run_path(system, x0, dt, l.steps, options.save_stride, noise, path, scheme, &store.states[path * l.times.size()]);
    }
    return store;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryStore& store, bool with_path_column) {
    const auto old_precision = os.precision(17);
    os << (with_path_column ? "t,q,p,path\n" : "t,q,p\n");
    for (std::size_t i = 0; i < store.n_paths; ++i) {
        for (std::size_t s = 0; s < store.n_saves(); ++s) {
            const Vec2& x = store.state(i, s);
            os << store.times[s] << ',' << x(0) << ',' << x(1);
            if (with_path_column) os << ',' << i;
            os << '\n';
        }
    }
    os.precision(old_precision);
}

}  // namespace stochcirc
