#include "stochcirc/approximations.hpp"

#include "stochcirc/errors.hpp"
#include "stochcirc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <omp.h>

namespace stochcirc {

// -----------------------------------------------------------------------------
// Wong-Zakai
// -----------------------------------------------------------------------------

SmoothNoise::SmoothNoise(const NoisePath& base, std::size_t channel, std::size_t n) {
    if (n == 0 || base.steps() % n != 0) throw std::invalid_argument("refinement must divide the base step count");
    if (channel >= base.channels()) throw std::out_of_range("noise channel out of range");
    const std::size_t per = base.steps() / n;
    horizon_ = base.dt() * static_cast<double>(base.steps());
    node_values_.assign(n + 1, 0.0);
    double w = 0.0;
    for (std::size_t k = 0; k < base.steps(); ++k) {
        w += base.increment(channel, k);
        if ((k + 1) % per == 0) node_values_[(k + 1) / per] = w;
    }
}

namespace {

std::size_t interval_of(double t, double horizon, std::size_t n) {
    if (t < 0.0 || t > horizon) throw DomainError("time outside the noise horizon");
    const auto j = static_cast<std::size_t>(std::floor(t / horizon * static_cast<double>(n)));
    return std::min(j, n - 1);
}

}  // namespace

double SmoothNoise::value(double t) const {
    const std::size_t n = intervals();
    const std::size_t j = interval_of(t, horizon_, n);
    const double h = horizon_ / static_cast<double>(n);
    const double s = (t - static_cast<double>(j) * h) / h;
    return node_values_[j] + s * (node_values_[j + 1] - node_values_[j]);
}

double SmoothNoise::slope(double t) const {
    const std::size_t n = intervals();
    const std::size_t j = interval_of(t, horizon_, n);
    return (node_values_[j + 1] - node_values_[j]) * static_cast<double>(n) / horizon_;
}

WongZakaiTable wong_zakai_compare(const PhaseFunction& h, const PhaseFunction& f, const Vec2& x0,
                                  const NoisePath& base, const std::vector<std::size_t>& n_list,
                                  const WongZakaiOptions& options) {
    if (n_list.empty()) throw std::invalid_argument("n_list is empty");
    if (!std::is_sorted(n_list.begin(), n_list.end()) ||
        std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end())
        throw std::invalid_argument("n_list must be strictly ascending");
    if (options.substeps < 20) throw std::invalid_argument("at least 20 RK4 substeps per interval are required");
    if (base.channels() != 1) throw std::invalid_argument("base path must have exactly one channel");

    const VectorField drift = VectorField::hamiltonian(h);
    const std::vector<DiffusionChannel> channel{{{"F", ChannelKind::plain}, VectorField::hamiltonian(f)}};
    const SdeSystem system = SdeSystem::from_stratonovich(drift, channel);
    const SdeSystem ito_reading = SdeSystem::from_ito(drift, channel);
    const std::size_t steps = base.steps();
    const double dt = base.dt();
    if (steps % n_list.front() != 0) throw std::invalid_argument("every n must divide the base step count");
    const std::size_t coarse = steps / n_list.front();

    WongZakaiTable table;
    const std::vector<Vec2> strat = integrate_path(Scheme::heun, system, x0, 0.0, base);
    const std::vector<Vec2> ito = integrate_path(Scheme::euler_maruyama, ito_reading, x0, 0.0, base);
    table.ito_terminal_gap = (ito.back() - strat.back()).norm();

    for (std::size_t n : n_list) {
        if (steps % n != 0) throw std::invalid_argument("every n must divide the base step count");
        const SmoothNoise smooth(base, 0, n);
        const std::size_t per = steps / n;
        const double interval = dt * static_cast<double>(per);
        const double sub = interval / static_cast<double>(options.substeps);

        WongZakaiRow row;
        row.n = n;
        Vec2 x = x0;
        for (std::size_t j = 0; j < n; ++j) {
            const double slope = (smooth.node_value(j + 1) - smooth.node_value(j)) / interval;
            const double dw[1] = {slope * sub};
            const double t_j = static_cast<double>(j) * interval;
            for (std::size_t s = 0; s < options.substeps; ++s) {
                try {
                    x = rk4_stratonovich_step(system, x, t_j + static_cast<double>(s) * sub, sub, dw,
                                              j * options.substeps + s);
                } catch (const IntegrationError& e) {
                    throw IntegrationError("RK4 blow-up for n = " + std::to_string(n), e.step());
                }
                // Substep ends that land on a base node.
                if (((s + 1) * per) % options.substeps != 0) continue;
                const std::size_t k = j * per + (s + 1) * per / options.substeps;
                const bool compare = options.nodes == ErrorNodes::base_grid ||
                                     (options.nodes == ErrorNodes::own_grid && k % per == 0) ||
                                     (options.nodes == ErrorNodes::coarsest_grid && k % coarse == 0);
                if (compare) row.error = std::max(row.error, (x - strat[k]).norm());
            }
        }
        row.terminal_error = (x - strat.back()).norm();
        table.rows.push_back(row);
    }
    if (f.is_zero()) {
        // Noise-free: the RK4 path on the base grid against Heun.
        const auto rk = integrate_path(Scheme::rk4_stratonovich, system, x0, 0.0, base);
        for (std::size_t k = 0; k <= steps; ++k) table.strat_ode_gap = std::max(table.strat_ode_gap, (rk[k] - strat[k]).norm());
    }
    return table;
}

void write_wong_zakai_csv(std::ostream& os, const WongZakaiTable& table) {
    const auto old = os.precision(17);
    os << "n,e_n,terminal_error\n";
    for (const auto& r : table.rows) os << r.n << ',' << r.error << ',' << r.terminal_error << '\n';
    os.precision(old);
}

double WongZakaiStudy::decreasing_fraction(std::size_t k) const {
    return seeds.empty() ? 0.0 : static_cast<double>(decreasing.at(k)) / static_cast<double>(seeds.size());
}

double WongZakaiStudy::gap_fraction() const {
    return seeds.empty() ? 0.0 : static_cast<double>(gap_exceeds) / static_cast<double>(seeds.size());
}

WongZakaiStudy wong_zakai_study(const PhaseFunction& h, const PhaseFunction& f, const Vec2& x0, double horizon,
                                std::size_t base_steps, const std::vector<std::size_t>& n_list,
                                std::uint64_t first_seed, std::size_t n_seeds, double gap_factor,
                                const WongZakaiOptions& options, int threads) {
    if (n_seeds == 0) throw std::invalid_argument("at least one seed is required");
    if (base_steps == 0 || !(horizon > 0.0)) throw std::invalid_argument("base path needs steps and a positive horizon");
    WongZakaiStudy study;
    study.gap_factor = gap_factor;
    study.tables.resize(n_seeds);
    for (std::size_t s = 0; s < n_seeds; ++s) study.seeds.push_back(first_seed + s);
    const double dt = horizon / static_cast<double>(base_steps);

    std::exception_ptr failure;
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
    for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(n_seeds); ++s) {
        try {
            const auto base = NoisePath::generate(study.seeds[static_cast<std::size_t>(s)], 0, 1, base_steps, dt);
            study.tables[static_cast<std::size_t>(s)] = wong_zakai_compare(h, f, x0, base, n_list, options);
        } catch (...) {
#pragma omp critical(stochcirc_wz_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    study.decreasing.assign(n_list.size() > 1 ? n_list.size() - 1 : 0, 0);
    for (const auto& t : study.tables) {
        for (std::size_t k = 0; k + 1 < t.rows.size(); ++k)
            if (t.rows[k + 1].error < t.rows[k].error) ++study.decreasing[k];
        if (t.ito_terminal_gap > gap_factor * t.rows.back().error) ++study.gap_exceeds;
    }
    return study;
}

void write_wong_zakai_study_csv(std::ostream& os, const WongZakaiStudy& study) {
    const auto old = os.precision(17);
    os << "seed,n,e_n,terminal_error,ito_gap\n";
    for (std::size_t s = 0; s < study.seeds.size(); ++s)
        for (const auto& r : study.tables[s].rows)
            os << study.seeds[s] << ',' << r.n << ',' << r.error << ',' << r.terminal_error << ','
               << study.tables[s].ito_terminal_gap << '\n';
    os.precision(old);
}

// -----------------------------------------------------------------------------
// Oscillator assembly
// -----------------------------------------------------------------------------

double bracket_value(std::size_t n, double t) {
    if (n == 0) throw std::invalid_argument("N must be at least 1");
    return std::floor(static_cast<double>(n) * t + 1e-9) / static_cast<double>(n);
}

double bracket_sup_deviation(std::size_t n) {
    if (n == 0) throw std::invalid_argument("N must be at least 1");
    // On [(k-1)/N, k/N) the deviation t - (k-1)/N rises to its left limit (k - (k-1))/N.
    double sup = 0.0;
    for (std::size_t k = 1; k <= n; ++k) sup = std::max(sup, static_cast<double>(k - (k - 1)) / static_cast<double>(n));
    return sup;
}

OscillatorAssembly::OscillatorAssembly(std::size_t n, double horizon, const AssemblyParams& params,
                                       std::vector<double> q, std::vector<double> p)
    : n_(n), horizon_(horizon), params_(params), q_(std::move(q)), p_(std::move(p)) {
    if (n_ == 0) throw std::invalid_argument("N must be at least 1");
    if (!(horizon_ >= 0.0)) throw std::invalid_argument("horizon must be non-negative");
    if (q_.size() != p_.size()) throw std::invalid_argument("q and p sample counts differ");
    if (count(horizon_) > q_.size()) throw std::invalid_argument("horizon exceeds the sample count");
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    q_partial_.assign(q_.size() + 1, 0.0);
    p_partial_.assign(p_.size() + 1, 0.0);
    for (std::size_t k = 0; k < q_.size(); ++k) {
        q_partial_[k + 1] = q_partial_[k] + scale * q_[k];
        p_partial_[k + 1] = p_partial_[k] + scale * p_[k];
    }
}

std::size_t OscillatorAssembly::count(double t) const {
    if (t < 0.0) throw DomainError("negative time");
    return static_cast<std::size_t>(std::floor(static_cast<double>(n_) * t + 1e-9));
}

double OscillatorAssembly::charge_process(double t) const {
    if (t > horizon_ + 1e-12) throw DomainError("time beyond the assembly horizon");
    return q_partial_[count(t)];
}

double OscillatorAssembly::momentum_process(double t) const {
    if (t > horizon_ + 1e-12) throw DomainError("time beyond the assembly horizon");
    return p_partial_[count(t)];
}

double OscillatorAssembly::bracket(double t) const { return bracket_value(n_, t); }

namespace {

double draw(Marginal marginal, double sd, std::uint64_t seed, std::uint64_t replicate, std::uint32_t channel,
            std::uint32_t k) {
    if (marginal == Marginal::gaussian) return sd * standard_normal(seed, replicate, channel, k);
    const double u = uniform_open(seed, replicate, channel, k);
    return sd * std::numbers::sqrt3 * (2.0 * u - 1.0);
}

}  // namespace

OscillatorAssembly sample_assembly(std::size_t n, double horizon, const AssemblyParams& params, std::uint64_t seed,
                                   std::uint64_t replicate) {
    if (n == 0) throw std::invalid_argument("N must be at least 1");
    if (!(params.inductance > 0.0) || !(params.capacitance > 0.0) || !(params.thermal_energy > 0.0))
        throw std::invalid_argument("L0, C0 and k_B T must be positive");
    const auto count = static_cast<std::size_t>(std::floor(static_cast<double>(n) * horizon + 1e-9));
    const double sd_q = std::sqrt(params.capacitance * params.thermal_energy);
    const double sd_p = std::sqrt(params.inductance * params.thermal_energy);
    std::vector<double> q(count), p(count);
    for (std::size_t k = 0; k < count; ++k) {
        q[k] = draw(params.marginal, sd_q, seed, replicate, 0, static_cast<std::uint32_t>(k));
        p[k] = draw(params.marginal, sd_p, seed, replicate, 1, static_cast<std::uint32_t>(k));
    }
    return OscillatorAssembly(n, horizon, params, std::move(q), std::move(p));
}

double ks_statistic_normal(std::vector<double> sample) {
    if (sample.empty()) throw std::invalid_argument("empty sample");
    std::sort(sample.begin(), sample.end());
    const double m = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double cdf = 0.5 * std::erfc(-sample[i] / std::numbers::sqrt2);
        d = std::max({d, static_cast<double>(i + 1) / m - cdf, cdf - static_cast<double>(i) / m});
    }
    return d;
}

namespace {

struct ReplicateStats {
    std::vector<double> unit_q;        // Q(j+1) - Q(j)
    double q1 = 0.0, p1 = 0.0;         // Q(1), P(1)
    std::vector<double> normalized;    // Q then P window increments / sd
    double lag_sum = 0.0;              // sum of products of consecutive Q window increments
    std::size_t lag_pairs = 0;
};

ReplicateStats replicate_stats(std::size_t n, const AssemblyParams& params, std::uint64_t seed, std::uint64_t r,
                               const CltOptions& o) {
    const auto a = sample_assembly(n, o.horizon, params, seed, r);
    ReplicateStats s;
    const auto units = static_cast<std::size_t>(std::floor(o.horizon + 1e-9));
    for (std::size_t j = 0; j < units; ++j)
        s.unit_q.push_back(a.charge_process(static_cast<double>(j + 1)) - a.charge_process(static_cast<double>(j)));
    s.q1 = a.charge_process(1.0);
    s.p1 = a.momentum_process(1.0);

    const auto windows = static_cast<std::size_t>(std::floor(o.horizon / o.window + 1e-9));
    const double var_q = params.capacitance * params.thermal_energy;
    const double var_p = params.inductance * params.thermal_energy;
    std::vector<double> dq;
    for (std::size_t j = 0; j < windows; ++j) {
        const double t0 = static_cast<double>(j) * o.window, t1 = static_cast<double>(j + 1) * o.window;
        const double db = bracket_value(n, t1) - bracket_value(n, t0);
        if (db <= 0.0) continue;
        const double zq = (a.charge_process(t1) - a.charge_process(t0)) / std::sqrt(var_q * db);
        const double zp = (a.momentum_process(t1) - a.momentum_process(t0)) / std::sqrt(var_p * db);
        s.normalized.push_back(zq);
        s.normalized.push_back(zp);
        dq.push_back(zq);
    }
    for (std::size_t j = 1; j < dq.size(); ++j) {
        s.lag_sum += dq[j - 1] * dq[j];
        ++s.lag_pairs;
    }
    return s;
}

CltReport clt_impl(std::size_t n, const AssemblyParams& params, std::uint64_t seed, const CltOptions& o,
                   bool parallel) {
    if (o.replicates < 1000) throw std::invalid_argument("clt_tests needs at least 1000 replicates");
    if (!(o.horizon >= 1.0)) throw std::invalid_argument("horizon must be at least 1");
    if (!(o.window > 0.0)) throw std::invalid_argument("window must be positive");
    if (n == 0) throw std::invalid_argument("N must be at least 1");

    std::vector<ReplicateStats> stats(o.replicates);
    if (parallel) {
        const int threads = o.threads > 0 ? o.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
        for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(o.replicates); ++r)
            stats[static_cast<std::size_t>(r)] = replicate_stats(n, params, seed, static_cast<std::uint64_t>(r), o);
    } else {
        for (std::size_t r = 0; r < o.replicates; ++r) stats[r] = replicate_stats(n, params, seed, r, o);
    }

    CltReport rep;
    rep.n = n;
    rep.replicates = o.replicates;

    // Unit-window increments are i.i.d. copies of Q(1); the mean is known to be 0.
    double sum_sq = 0.0;
    std::size_t count = 0;
    for (const auto& s : stats)
        for (double d : s.unit_q) {
            sum_sq += d * d;
            ++count;
        }
    rep.variance_q1 = sum_sq / static_cast<double>(count);
    rep.variance_target = params.capacitance * params.thermal_energy * bracket_value(n, 1.0);
    rep.variance_rel_error = std::abs(rep.variance_q1 - rep.variance_target) / rep.variance_target;

    double mq = 0.0, mp = 0.0;
    for (const auto& s : stats) {
        mq += s.q1;
        mp += s.p1;
    }
    const double m = static_cast<double>(o.replicates);
    mq /= m;
    mp /= m;
    double sqq = 0.0, spp = 0.0, sqp = 0.0;
    for (const auto& s : stats) {
        sqq += (s.q1 - mq) * (s.q1 - mq);
        spp += (s.p1 - mp) * (s.p1 - mp);
        sqp += (s.q1 - mq) * (s.p1 - mp);
    }
    rep.correlation_qp = sqp / std::sqrt(sqq * spp);
    rep.correlation_bound = 3.0 / std::sqrt(m);

    std::vector<double> all;
    double lag_sum = 0.0;
    std::size_t lag_pairs = 0;
    for (const auto& s : stats) {
        all.insert(all.end(), s.normalized.begin(), s.normalized.end());
        lag_sum += s.lag_sum;
        lag_pairs += s.lag_pairs;
    }
    rep.increments = all.size();
    rep.ks_statistic = ks_statistic_normal(std::move(all));
    rep.lag1_correlation = lag_pairs ? lag_sum / static_cast<double>(lag_pairs) : 0.0;
    rep.bracket_sup_deviation = bracket_sup_deviation(n);
    return rep;
}

}  // namespace

CltReport clt_tests(std::size_t n, const AssemblyParams& params, std::uint64_t seed, const CltOptions& options) {
    return clt_impl(n, params, seed, options, true);
}

CltReport clt_tests_serial(std::size_t n, const AssemblyParams& params, std::uint64_t seed,
                           const CltOptions& options) {
    return clt_impl(n, params, seed, options, false);
}

nlohmann::json to_json(const CltReport& r) {
    return {{"N", r.n},
            {"replicates", r.replicates},
            {"variance_Q1", r.variance_q1},
            {"variance_target", r.variance_target},
            {"variance_rel_error", r.variance_rel_error},
            {"correlation_QP", r.correlation_qp},
            {"correlation_bound", r.correlation_bound},
            {"ks_statistic", r.ks_statistic},
            {"increments", r.increments},
            {"lag1_correlation", r.lag1_correlation},
            {"bracket_sup_deviation", r.bracket_sup_deviation}};
}

}  // namespace stochcirc
