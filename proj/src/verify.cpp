#include "stochcirc/verify.hpp"

#include "stochcirc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <omp.h>

namespace stochcirc {

// ---------------------------------------------------------------------------
// Tangent flow
// ---------------------------------------------------------------------------

Vec2 TangentFlowState::sensitivity(std::size_t channel, std::size_t step) const {
    if (pulled_back.empty()) throw std::logic_error("sensitivities were not stored");
    if (step >= steps || channel >= channels) return Vec2::Zero();
    return jacobian * pulled_back[step * channels + channel];
}

namespace {

double extended_from(const Mat2& jacobian, const std::vector<SymplecticPair>& pairs, const std::vector<double>& sums) {
    double noise = 0.0;
    for (std::size_t k = 0; k < pairs.size(); ++k) noise += pairs[k].gamma * sums[k];
    return jacobian.determinant() * (1.0 + noise);
}

}  // namespace

TangentFlowState propagate_tangent(Scheme scheme, const SdeSystem& system, const NoisePath& noise, const Vec2& x0,
                                   const TangentOptions& options) {
    if (noise.channels() != system.channel_count()) {
        throw std::invalid_argument("noise path channel count does not match the system");
    }
    TangentFlowState st;
    st.state = x0;
    st.dt = noise.dt();
    st.steps = noise.steps();
    st.channels = noise.channels();
    st.pairs = system.pairs();
    st.pair_sums.assign(st.pairs.size(), 0.0);
    if (options.store_sensitivities) st.pulled_back.reserve(st.steps * st.channels);
    if (options.record_every) st.history.push_back({options.t0, 1.0, 1.0});

    std::vector<Vec2> pulled(st.channels);
    for (std::size_t k = 0; k < st.steps; ++k) {
        const double t = options.t0 + static_cast<double>(k) * st.dt;
        const LinearizedStep ls = linearized_step(scheme, system, st.state, t, st.dt, noise.at_step(k), k);
        st.state = ls.next;
        st.jacobian = ls.jacobian * st.jacobian;
        const Mat2 inverse = st.jacobian.inverse();
        if (!inverse.allFinite()) throw IntegrationError("singular tangent map", k);
        for (std::size_t a = 0; a < st.channels; ++a) pulled[a] = inverse * ls.sensitivities[a];
        for (std::size_t j = 0; j < st.pairs.size(); ++j) {
            st.pair_sums[j] += st.dt * cross(pulled[st.pairs[j].q_channel], pulled[st.pairs[j].p_channel]);
        }
        if (options.store_sensitivities) st.pulled_back.insert(st.pulled_back.end(), pulled.begin(), pulled.end());
        if (options.record_every && ((k + 1) % options.record_every == 0 || k + 1 == st.steps)) {
            st.history.push_back({t + st.dt, st.jacobian.determinant(), extended_from(st.jacobian, st.pairs, st.pair_sums)});
        }
    }
    return st;
}

double plain_bracket(const TangentFlowState& tangent) { return tangent.jacobian.determinant(); }

double extended_bracket(const TangentFlowState& tangent) {
    if (tangent.pairs.empty()) throw std::invalid_argument("extended bracket needs symplectic pairing metadata");
    return extended_from(tangent.jacobian, tangent.pairs, tangent.pair_sums);
}

void write_bracket_csv(std::ostream& os, const std::vector<BracketSample>& series) {
    const auto old = os.precision(17);
    os << "t,plain_bracket,extended_bracket\n";
    for (const auto& s : series) os << s.t << ',' << s.plain << ',' << s.extended << '\n';
    os.precision(old);
}

SdeSystem circuit_flow_system(const PhaseSpaceModel& model) {
    return SdeSystem::from_stratonovich(
        VectorField::callable([model](double t, const Vec2& x) { return drift_field(model, t, x(0), x(1)); }),
        {DiffusionChannel{ChannelInfo{"none"}, VectorField()}});
}

// ---------------------------------------------------------------------------
// Binning
// ---------------------------------------------------------------------------

int BinBox::index(const Vec2& x) const noexcept {
    if (!(x(0) >= q_lo && x(0) <= q_hi && x(1) >= p_lo && x(1) <= p_hi)) return -1;
    const int i = std::min(nq - 1, static_cast<int>((x(0) - q_lo) / (q_hi - q_lo) * nq));
    const int j = std::min(np - 1, static_cast<int>((x(1) - p_lo) / (p_hi - p_lo) * np));
    return i * np + j;
}

Vec2 BinBox::center(int bin) const noexcept {
    const int i = bin / np;
    const int j = bin % np;
    return {q_lo + (i + 0.5) * (q_hi - q_lo) / nq, p_lo + (j + 0.5) * (p_hi - p_lo) / np};
}

BinBox percentile_box(const TrajectoryStore& store, double lo_percent, double hi_percent, int bins) {
    if (store.n_saves() < 2) throw std::invalid_argument("estimators need at least two stored states per path");
    std::vector<double> qs, ps;
    qs.reserve(store.n_paths * (store.n_saves() - 1));
    ps.reserve(qs.capacity());
    for (std::size_t i = 0; i < store.n_paths; ++i) {
        for (std::size_t s = 0; s + 1 < store.n_saves(); ++s) {
            qs.push_back(store.state(i, s)(0));
            ps.push_back(store.state(i, s)(1));
        }
    }
    auto quantile = [](std::vector<double>& v, double percent) {
        const auto k = static_cast<std::size_t>(std::clamp(percent / 100.0, 0.0, 1.0) * static_cast<double>(v.size() - 1));
        std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
        return v[k];
    };
    BinBox box;
    box.q_lo = quantile(qs, lo_percent);
    box.q_hi = quantile(qs, hi_percent);
    box.p_lo = quantile(ps, lo_percent);
    box.p_hi = quantile(ps, hi_percent);
    // A degenerate box (deterministic data) still needs positive width.
    if (!(box.q_hi > box.q_lo)) box.q_hi = box.q_lo + 1e-12 * std::max(1.0, std::abs(box.q_lo));
    if (!(box.p_hi > box.p_lo)) box.p_hi = box.p_lo + 1e-12 * std::max(1.0, std::abs(box.p_lo));
    box.nq = box.np = bins;
    return box;
}

std::size_t FieldEstimate::valid_bins() const {
    return static_cast<std::size_t>(std::count_if(bins.begin(), bins.end(), [](const BinEstimate& b) { return b.valid; }));
}

double FieldEstimate::fraction_within(double k) const {
    std::size_t valid = 0, ok = 0;
    for (const auto& b : bins) {
        if (!b.valid) continue;
        ++valid;
        bool inside = true;
        for (int c = 0; c < components; ++c) {
            inside = inside && std::abs(b.estimate(c) - b.target(c)) <= k * b.standard_error(c);
        }
        ok += inside ? 1 : 0;
    }
    return valid ? static_cast<double>(ok) / static_cast<double>(valid) : 0.0;
}

namespace {

// Raw moments of a sample pair (a, b) plus the target sum; merging is plain addition.
struct Moments {
    double n = 0, a = 0, b = 0, aa = 0, bb = 0, ab = 0, aab = 0, abb = 0, aabb = 0;
    double t0 = 0, t1 = 0;

    void add(double x, double y, const Vec2& target) {
        n += 1;
        a += x;
        b += y;
        aa += x * x;
        bb += y * y;
        ab += x * y;
        aab += x * x * y;
        abb += x * y * y;
        aabb += x * x * y * y;
        t0 += target(0);
        t1 += target(1);
    }

    void merge(const Moments& o) {
        n += o.n;
        a += o.a;
        b += o.b;
        aa += o.aa;
        bb += o.bb;
        ab += o.ab;
        aab += o.aab;
        abb += o.abb;
        aabb += o.aabb;
        t0 += o.t0;
        t1 += o.t1;
    }
};

enum class Quantity { drift, covariation };

// One sample: the step from save s to s + 1 on one path.
template <class Target>
void accumulate_path(const TrajectoryStore& store, std::size_t path, const BinBox& box, Quantity what,
                     const Target& target, std::vector<Moments>& acc) {
    for (std::size_t s = 0; s + 1 < store.n_saves(); ++s) {
        const Vec2& x = store.state(path, s);
        const int bin = box.index(x);
        if (bin < 0) continue;
        const Vec2 dx = store.state(path, s + 1) - x;
        const double h = store.times[s + 1] - store.times[s];
        const double t = store.times[s];
        if (what == Quantity::drift) {
            acc[static_cast<std::size_t>(bin)].add(dx(0) / h, dx(1) / h, target(t, x));
        } else {
            acc[static_cast<std::size_t>(bin)].add(dx(0), dx(1), target(t, x));
        }
    }
}

FieldEstimate finish(const BinBox& box, Quantity what, const std::vector<Moments>& acc, std::size_t min_samples,
                     double h) {
    FieldEstimate est;
    est.box = box;
    est.components = what == Quantity::drift ? 2 : 1;
    est.bins.resize(acc.size());
    for (std::size_t k = 0; k < acc.size(); ++k) {
        const Moments& m = acc[k];
        BinEstimate& b = est.bins[k];
        b.count = static_cast<std::size_t>(m.n);
        b.center = box.center(static_cast<int>(k));
        b.valid = b.count >= min_samples && b.count >= 2;
        if (m.n == 0) continue;
        const double n = m.n;
        b.target = {m.t0 / n, m.t1 / n};
        const double ma = m.a / n;
        const double mb = m.b / n;
        if (what == Quantity::drift) {
            b.estimate = {ma, mb};
            if (n > 1) {
                const double va = std::max(0.0, (m.aa - n * ma * ma) / (n - 1));
                const double vb = std::max(0.0, (m.bb - n * mb * mb) / (n - 1));
                b.standard_error = {std::sqrt(va / n), std::sqrt(vb / n)};
            }
        } else {
            const double c = m.ab / n - ma * mb;
            const double second = m.aabb / n - 2 * mb * m.aab / n - 2 * ma * m.abb / n + mb * mb * m.aa / n +
                                  ma * ma * m.bb / n + 4 * ma * mb * m.ab / n - 3 * ma * ma * mb * mb;
            const double var = std::max(0.0, second - c * c);
            b.estimate = {c * n / std::max(1.0, n - 1) / h, 0.0};
            b.standard_error = {std::sqrt(var / n) / h, 0.0};
        }
    }
    return est;
}

double uniform_step(const TrajectoryStore& store) {
    const double h = store.times[1] - store.times[0];
    for (std::size_t s = 1; s + 1 < store.n_saves(); ++s) {
        if (std::abs((store.times[s + 1] - store.times[s]) - h) > 1e-9 * h) {
            throw std::invalid_argument("covariation estimator needs uniformly spaced saves");
        }
    }
    return h;
}

// Paths are split into a fixed number of contiguous chunks merged in order, so the
// result does not depend on the number of threads.
constexpr std::size_t kChunks = 64;

template <class Target>
FieldEstimate estimate_parallel(const TrajectoryStore& store, Quantity what, const Target& target,
                                const EstimatorOptions& options) {
    const BinBox box = percentile_box(store, 1.0, 99.0, options.bins);
    const double h = what == Quantity::covariation ? uniform_step(store) : 1.0;
    const std::size_t nbins = static_cast<std::size_t>(box.nq * box.np);
    const std::size_t chunks = std::min(kChunks, store.n_paths);
    std::vector<std::vector<Moments>> partial(chunks, std::vector<Moments>(nbins));
    const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
        const std::size_t begin = store.n_paths * static_cast<std::size_t>(c) / chunks;
        const std::size_t end = store.n_paths * static_cast<std::size_t>(c + 1) / chunks;
        for (std::size_t i = begin; i < end; ++i) accumulate_path(store, i, box, what, target, partial[static_cast<std::size_t>(c)]);
    }
    std::vector<Moments> total(nbins);
    for (const auto& part : partial)
        for (std::size_t k = 0; k < nbins; ++k) total[k].merge(part[k]);
    return finish(box, what, total, options.min_samples, h);
}

template <class Target>
FieldEstimate estimate_serial(const TrajectoryStore& store, Quantity what, const Target& target,
                              const EstimatorOptions& options) {
    const BinBox box = percentile_box(store, 1.0, 99.0, options.bins);
    const double h = what == Quantity::covariation ? uniform_step(store) : 1.0;
    std::vector<Moments> total(static_cast<std::size_t>(box.nq * box.np));
    for (std::size_t i = 0; i < store.n_paths; ++i) accumulate_path(store, i, box, what, target, total);
    return finish(box, what, total, options.min_samples, h);
}

auto covariation_target(const CovariationTarget& target) {
    return [&target](double t, const Vec2& x) { return Vec2(target(t, x), 0.0); };
}

}  // namespace

FieldEstimate empirical_drift(const TrajectoryStore& store, const DriftTarget& target, const EstimatorOptions& options) {
    return estimate_parallel(store, Quantity::drift, target, options);
}

FieldEstimate empirical_drift_serial(const TrajectoryStore& store, const DriftTarget& target,
                                     const EstimatorOptions& options) {
    return estimate_serial(store, Quantity::drift, target, options);
}

FieldEstimate empirical_covariation(const TrajectoryStore& store, const CovariationTarget& target,
                                    const EstimatorOptions& options) {
    return estimate_parallel(store, Quantity::covariation, covariation_target(target), options);
}

FieldEstimate empirical_covariation_serial(const TrajectoryStore& store, const CovariationTarget& target,
                                           const EstimatorOptions& options) {
    return estimate_serial(store, Quantity::covariation, covariation_target(target), options);
}

// ---------------------------------------------------------------------------

CheckResult make_check(std::string name, double target, double estimate, double tolerance) {
    CheckResult r;
    r.name = std::move(name);
    r.target = target;
    r.estimate = estimate;
    r.tolerance = tolerance;
    r.pass = std::abs(estimate - target) <= tolerance;
    return r;
}

nlohmann::json report_json(const std::vector<CheckResult>& checks) {
    nlohmann::json arr = nlohmann::json::array();
    bool all = true;
    for (const auto& c : checks) {
        nlohmann::json entry{{"check", c.name}, {"target", c.target}, {"estimate", c.estimate},
                             {"tolerance", c.tolerance}, {"pass", c.pass}};
        if (!c.details.empty()) entry["details"] = c.details;
        arr.push_back(entry);
        all = all && c.pass;
    }
    return {{"checks", arr}, {"all_pass", all}};
}

}  // namespace stochcirc
