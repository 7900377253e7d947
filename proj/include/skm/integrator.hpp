#pragma once

// Implicit midpoint stepping solved by relaxed Picard iteration, an explicit
// Euler companion step used as the local error estimate, and the adaptive
// simulation loop that ties them together.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "skm/dynamics.hpp"
#include "skm/errors.hpp"
#include "skm/lattice.hpp"

namespace skm {

struct StepperParams {
    double omega = 0.7;
    double picard_tol = 1e-10;
    std::size_t picard_max_iter = 200;
    double err_target = 1e-4;
    double safety = 0.9;
    double dt_init = 1e-3;
    double dt_min = 1e-10;
    double dt_max = 0.1;
    double growth_cap = 5.0;

    void validate() const {
        if (!(omega > 0.0 && omega <= 1.0)) throw domain_error("omega must lie in (0, 1]");
        if (!(picard_tol > 0.0)) throw domain_error("picard_tol must be positive");
        if (picard_max_iter == 0) throw domain_error("picard_max_iter must be positive");
        if (!(err_target > 0.0)) throw domain_error("err_target must be positive");
        if (!(safety > 0.0)) throw domain_error("safety must be positive");
        if (!(dt_min > 0.0 && dt_min <= dt_init && dt_init <= dt_max))
            throw domain_error("need 0 < dt_min <= dt_init <= dt_max");
        if (!(growth_cap > 1.0)) throw domain_error("growth_cap must exceed 1");
    }
};

struct TraceRecord {
    double t;
    double dt;  // step that produced this state (0 for the initial record)
    double diameter;
    double mean;
    double min;
    double max;
    std::size_t picard_iters;
    double err;  // local error estimate of the step (0 for the initial record)
};

struct TraceFlags {
    bool diameter_ge_pi = false;
    bool picard_fallback = false;
};

struct TimedField {
    double t;
    Field state;
};

struct Trace {
    std::vector<TraceRecord> records;
    std::vector<TimedField> snapshots;  // every `snapshot_every` accepted steps
    std::vector<TimedField> outputs;    // requested output times, interpolated
    TraceFlags flags;
    Field initial;
    Field final_state;

    /// Linear interpolation of the diameter column at time t.
    double diameter_at(double t) const {
        if (records.empty()) throw domain_error("diameter_at: empty trace");
        if (t <= records.front().t) return records.front().diameter;
        if (t >= records.back().t) return records.back().diameter;
        const auto it = std::lower_bound(records.begin(), records.end(), t,
                                         [](const TraceRecord& r, double v) { return r.t < v; });
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        const double w = (t - lo.t) / (hi.t - lo.t);
        return lo.diameter + w * (hi.diameter - lo.diameter);
    }
};

struct OutputSpec {
    std::vector<double> output_times;  // ascending, within [0, t_end]
    std::size_t snapshot_every = 0;    // 0 disables snapshots
};

namespace detail {

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// Buffers for one simulation; never shared between threads.
class StepWorkspace {
public:
    explicit StepWorkspace(std::size_t n) : f0(n), f(n), mid(n), iter(n), next(n) {}

    // Solves θ⁺ = θ + dt f((θ + θ⁺)/2) by relaxed Picard iteration from θ⁺ = θ.
    // `f0` must already hold f(θ). Result lands in `iter`.
    std::size_t midpoint(std::span<const double> theta, double dt, const RhsContext& ctx,
                         const StepperParams& p) {
        const std::size_t n = theta.size();
        std::copy(theta.begin(), theta.end(), iter.begin());
        double change = 0.0;
        double prev_change = 0.0;
        for (std::size_t k = 0; k < p.picard_max_iter; ++k) {
            if (k == 0) {
                // The first midpoint (θ + θ)/2 is θ itself.
                std::copy(f0.begin(), f0.end(), f.begin());
            } else {
                for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (theta[i] + iter[i]);
                rhs_into(mid, ctx, f);
            }
            change = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                next[i] = iter[i] + p.omega * (theta[i] + dt * f[i] - iter[i]);
                change = std::max(change, std::abs(next[i] - iter[i]));
            }
            std::swap(iter, next);
            if (!std::isfinite(change)) break;
            if (change <= p.picard_tol) return k + 1;
            // Give up early once the observed contraction rate cannot reach
            // the tolerance within the remaining iteration budget.
            if (k >= 2) {
                const double rate = change / prev_change;
                const double left = static_cast<double>(p.picard_max_iter - k - 1);
                if (rate >= 1.0 || change * std::pow(rate, left) > p.picard_tol) break;
            }
            prev_change = change;
        }
        throw picard_not_converged(p.picard_max_iter, change);
    }

    std::vector<double> f0;
    std::vector<double> f;
    std::vector<double> mid;
    std::vector<double> iter;
    std::vector<double> next;
};

inline TraceRecord make_record(double t, double dt, std::span<const double> v, std::size_t iters,
                               double err) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return {t, dt, *hi - *lo, norm(v, NormKind::mean), *lo, *hi, iters, err};
}

}  // namespace detail

inline Field euler_step(const Field& theta, double dt, const RhsContext& ctx) {
    if (!(dt > 0.0)) throw domain_error("euler_step: dt must be positive");
    Field out = rhs(theta, ctx);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = theta[i] + dt * out[i];
    return out;
}

struct MidpointResult {
    Field state;
    std::size_t iterations;
};

inline MidpointResult midpoint_step_picard(const Field& theta, double dt, const RhsContext& ctx,
                                           const StepperParams& p) {
    if (!(dt > 0.0)) throw domain_error("midpoint_step_picard: dt must be positive");
    if (!(theta.grid() == ctx.grid())) throw domain_error("midpoint_step_picard: grid mismatch");
    detail::StepWorkspace ws(theta.size());
    rhs_into(theta.values(), ctx, ws.f0);
    const std::size_t iters = ws.midpoint(theta.values(), dt, ctx, p);
    return {Field(theta.grid(), std::move(ws.iter)), iters};
}

/// Next step size from the local error estimate, bounded to a factor
/// growth_cap of the current step and to [dt_min, dt_max].
inline double propose_dt(double err, double dt, const StepperParams& p) {
    if (!(dt > 0.0)) throw domain_error("propose_dt: dt must be positive");
    double next = err > 0.0 ? p.safety * dt * std::sqrt(p.err_target / err) : dt * p.growth_cap;
    next = std::clamp(next, dt / p.growth_cap, dt * p.growth_cap);
    return std::clamp(next, p.dt_min, p.dt_max);
}

/// Integrates from t = 0 to t_end. Every step is accepted; the local error
/// estimate only steers the size of the next step. A Picard failure halves
/// the step and retries until dt_min is crossed.
inline Trace run_simulation(const Field& theta0, const RhsContext& ctx, const StepperParams& p,
                            double t_end, const OutputSpec& out = {}) {
    if (!(t_end > 0.0)) throw domain_error("run_simulation: t_end must be positive");
    if (!(theta0.grid() == ctx.grid())) throw domain_error("run_simulation: grid mismatch");
    p.validate();
    for (std::size_t i = 0; i < out.output_times.size(); ++i) {
        const double tau = out.output_times[i];
        if (!(tau >= 0.0 && tau <= t_end) || (i > 0 && !(tau > out.output_times[i - 1])))
            throw domain_error("run_simulation: output times must ascend within [0, t_end]");
    }

    const std::size_t n = theta0.size();
    detail::StepWorkspace ws(n);
    std::vector<double> theta(theta0.values().begin(), theta0.values().end());
    std::vector<double> euler(n);

    Trace trace{{}, {}, {}, {}, theta0, theta0};
    trace.records.push_back(detail::make_record(0.0, 0.0, theta, 0, 0.0));
    if (out.snapshot_every > 0) trace.snapshots.push_back({0.0, theta0});
    std::size_t next_output = 0;
    while (next_output < out.output_times.size() && out.output_times[next_output] <= 0.0)
        trace.outputs.push_back({out.output_times[next_output++], theta0});

    double t = 0.0;
    double dt = p.dt_init;
    std::size_t steps = 0;
    while (t < t_end) {
        rhs_into(theta, ctx, ws.f0);

        double h = std::min(dt, t_end - t);
        std::size_t iters = 0;
        for (;;) {
            try {
                iters = ws.midpoint(theta, h, ctx, p);
                break;
            } catch (const picard_not_converged&) {
                trace.flags.picard_fallback = true;
                h *= 0.5;
                if (h < p.dt_min) throw unrecoverable_stiffness(t, h);
            }
        }

        for (std::size_t i = 0; i < n; ++i) euler[i] = theta[i] + h * ws.f0[i];
        const double err = detail::max_abs_diff(ws.iter, euler);
        const bool last = h >= t_end - t;
        const double t_new = last ? t_end : t + h;

        while (next_output < out.output_times.size() && out.output_times[next_output] <= t_new) {
            const double tau = out.output_times[next_output++];
            const double w = (tau - t) / (t_new - t);
            std::vector<double> v(n);
            for (std::size_t i = 0; i < n; ++i) v[i] = theta[i] + w * (ws.iter[i] - theta[i]);
            trace.outputs.push_back({tau, Field(theta0.grid(), std::move(v))});
        }

        theta.swap(ws.iter);
        t = t_new;
        ++steps;
        const auto rec = detail::make_record(t, h, theta, iters, err);
        if (rec.diameter >= pi) trace.flags.diameter_ge_pi = true;
        trace.records.push_back(rec);
        if (out.snapshot_every > 0 && (steps % out.snapshot_every == 0 || last))
            trace.snapshots.push_back({t, Field(theta0.grid(), theta)});

        dt = propose_dt(err, h, p);
    }

    trace.final_state = Field(theta0.grid(), std::move(theta));
    return trace;
}

}  // namespace skm
