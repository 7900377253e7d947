#pragma once

// Scenario assembly and the three experiment families: parameter sweeps,
// the graph-limit self-convergence study and the mollifier-limit study.

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skm/bounds.hpp"
#include "skm/dynamics.hpp"
#include "skm/errors.hpp"
#include "skm/integrator.hpp"
#include "skm/lattice.hpp"
#include "skm/parallel.hpp"

namespace skm {

struct Scenario {
    std::size_t n = 512;
    double alpha = 0.2;
    double beta = 0.2;
    double kappa = 1.0;
    double t_end = 8.0;
    Profile theta_init = Profile::sine();
    Profile nu = Profile::zero();
    KernelMode kernel = PointwiseCutoff{1e-9};
    double phase_delta = 1e-3;
    double practical_eps = 0.5;
    StepperParams stepper;
    std::vector<double> output_times;
    std::size_t snapshot_every = 0;
};

inline std::shared_ptr<const KernelMatrix> make_kernel(const Scenario& s) {
    return std::make_shared<const KernelMatrix>(build_kernel_matrix(Grid(s.n), s.beta, s.kernel));
}

inline RhsContext make_context(const Scenario& s,
                               std::shared_ptr<const KernelMatrix> kernel = nullptr) {
    if (!kernel) kernel = make_kernel(s);
    return RhsContext(sample_on_grid(s.nu, Grid(s.n)), std::move(kernel), s.kappa, s.alpha,
                      s.phase_delta);
}

inline ScenarioDescriptor describe(const Scenario& s, const Field& theta0, const Field& nu) {
    const auto d = scenario_diameters(theta0, nu);
    return {s.alpha,
            s.beta,
            s.kappa,
            s.phase_delta,
            s.practical_eps,
            d,
            d.d_nu == 0.0,
            strictly_increasing(theta0.values()) && strictly_increasing(nu.values())};
}

struct RunResult {
    Trace trace;
    ScenarioDescriptor descriptor;
    BoundReport report;
    double drift;  // mean_drift_residual at t_end
};

inline RunResult run_scenario(const Scenario& s,
                              std::shared_ptr<const KernelMatrix> kernel = nullptr) {
    const RhsContext ctx = make_context(s, std::move(kernel));
    const Field theta0 = sample_on_grid(s.theta_init, ctx.grid());
    Trace trace = run_simulation(theta0, ctx, s.stepper, s.t_end,
                                 OutputSpec{s.output_times, s.snapshot_every});
    const ScenarioDescriptor desc = describe(s, theta0, ctx.nu);
    BoundReport report = evaluate_verdicts(trace, desc);
    const double drift = mean_drift_residual(s.t_end, trace.final_state, theta0, ctx.nu);
    return {std::move(trace), desc, std::move(report), drift};
}

/// n uniformly spaced times covering [0, t_end].
inline std::vector<double> uniform_times(double t_end, std::size_t count) {
    if (count < 2) throw domain_error("uniform_times: need at least two times");
    std::vector<double> t(count);
    for (std::size_t k = 0; k < count; ++k)
        t[k] = t_end * static_cast<double>(k) / static_cast<double>(count - 1);
    t.back() = t_end;
    return t;
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepAxis { alpha, beta, kappa };

inline std::string axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::alpha: return "alpha";
        case SweepAxis::beta: return "beta";
        case SweepAxis::kappa: return "kappa";
    }
    return "?";
}

struct SweepSpec {
    Scenario base;
    SweepAxis axis = SweepAxis::kappa;
    std::vector<double> values;
    std::vector<double> sample_times;
};

struct SweepRow {
    SweepAxis axis;
    double axis_value;
    double t;
    double diameter;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // axis-major, then sample time
    std::vector<double> final_drift;  // mean-drift residual of each run
};

inline Scenario with_axis(Scenario s, SweepAxis axis, double v) {
    switch (axis) {
        case SweepAxis::alpha: s.alpha = v; break;
        case SweepAxis::beta: s.beta = v; break;
        case SweepAxis::kappa: s.kappa = v; break;
    }
    return s;
}

inline SweepResult run_sweep(const SweepSpec& spec) {
    if (spec.values.empty()) throw domain_error("run_sweep: no axis values");
    for (std::size_t i = 1; i < spec.values.size(); ++i)
        if (!(spec.values[i] > spec.values[i - 1]))
            throw domain_error("run_sweep: axis values must be strictly increasing");

    // The kernel only depends on β, so other axes can share one matrix.
    std::shared_ptr<const KernelMatrix> shared;
    if (spec.axis != SweepAxis::beta) shared = make_kernel(spec.base);

    const std::size_t m = spec.values.size();
    std::vector<std::vector<SweepRow>> per_run(m);
    std::vector<double> drift(m);
    parallel_for(m, [&](std::size_t i) {
        const Scenario s = with_axis(spec.base, spec.axis, spec.values[i]);
        const RhsContext ctx = make_context(s, shared);
        const Field theta0 = sample_on_grid(s.theta_init, ctx.grid());
        const Trace tr = run_simulation(theta0, ctx, s.stepper, s.t_end);
        for (double t : spec.sample_times)
            per_run[i].push_back({spec.axis, spec.values[i], t, tr.diameter_at(t)});
        drift[i] = mean_drift_residual(s.t_end, tr.final_state, theta0, ctx.nu);
    });

    SweepResult out;
    for (auto& rows : per_run) out.rows.insert(out.rows.end(), rows.begin(), rows.end());
    out.final_drift = std::move(drift);
    return out;
}

// ---------------------------------------------------------------------------
// Graph-limit convergence

struct ConvergenceRow {
    std::size_t n;
    double sup_l2_error;
    double init_err_sq;
    double nu_err;
    double psi_err;
    double bound_ratio;
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    std::vector<double> final_drift;  // coarse runs in n_list order, then the reference
};

namespace detail {

inline double l2_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s / static_cast<double>(a.size()));
}

inline double l1_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s / static_cast<double>(a.size());
}

// ‖ψ^coarse − ψ^fine‖_{L¹(Ω²)} for two step kernels, the coarse one refined exactly.
inline double kernel_l1_distance(const KernelMatrix& coarse, const KernelMatrix& fine) {
    const std::size_t nf = fine.size();
    const std::size_t r = nf / coarse.size();
    double s = 0.0;
    for (std::size_t i = 0; i < nf; ++i) {
        const auto row = fine.row(i);
        for (std::size_t k = 0; k < nf; ++k) s += std::abs(coarse(i / r, k / r) - row[k]);
    }
    return s / (static_cast<double>(nf) * static_cast<double>(nf));
}

}  // namespace detail

/// Self-convergence of the step-graphon solutions against a fine reference
/// run. Output times default to 64 uniform times on [0, t_end].
inline ConvergenceResult convergence_study(const Scenario& base, const std::vector<std::size_t>& n_list,
                                           std::size_t n_ref, double t_end,
                                           std::vector<double> output_times = {}) {
    if (!std::holds_alternative<ExactCellAverage>(base.kernel))
        throw domain_error("convergence_study: requires cell-average kernels");
    if (base.theta_init.kind == Profile::Kind::table || base.nu.kind == Profile::Kind::table)
        throw domain_error("convergence_study: tabulated profiles cannot be resampled");
    for (std::size_t n : n_list)
        if (n < 2 || n_ref % n != 0)
            throw domain_error("convergence_study: " + std::to_string(n) + " does not divide " +
                               std::to_string(n_ref));
    if (output_times.empty()) output_times = uniform_times(t_end, 64);

    struct Run {
        std::shared_ptr<const KernelMatrix> kernel;
        Field theta0{Grid(2)};
        Field nu{Grid(2)};
        std::optional<Trace> trace;
    };
    const std::size_t m = n_list.size();
    std::vector<Run> runs(m + 1);
    parallel_for(m + 1, [&](std::size_t i) {
        Scenario s = base;
        s.n = i < m ? n_list[i] : n_ref;
        s.t_end = t_end;
        s.output_times = output_times;
        s.snapshot_every = 0;
        Run& run = runs[i];
        run.kernel = make_kernel(s);
        const RhsContext ctx = make_context(s, run.kernel);
        run.theta0 = sample_on_grid(s.theta_init, ctx.grid());
        run.nu = ctx.nu;
        run.trace = run_simulation(run.theta0, ctx, s.stepper, t_end,
                                   OutputSpec{output_times, 0});
    });

    const Run& ref = runs[m];
    const Grid fine(n_ref);
    ConvergenceResult out;
    for (std::size_t i = 0; i < m; ++i) {
        const Run& run = runs[i];
        ConvergenceRow row{n_list[i], 0.0, 0.0, 0.0, 0.0, 0.0};
        for (std::size_t k = 0; k < output_times.size(); ++k) {
            const Field up = prolong(run.trace->outputs[k].state, fine);
            row.sup_l2_error = std::max(
                row.sup_l2_error, detail::l2_distance(up.values(), ref.trace->outputs[k].state.values()));
        }
        const double e0 =
            detail::l2_distance(prolong(run.theta0, fine).values(), ref.theta0.values());
        row.init_err_sq = e0 * e0;
        row.nu_err = detail::l1_distance(prolong(run.nu, fine).values(), ref.nu.values());
        row.psi_err = detail::kernel_l1_distance(*run.kernel, *ref.kernel);
        const double denom = row.init_err_sq + row.nu_err + row.psi_err;
        row.bound_ratio = denom > 0.0 ? row.sup_l2_error * row.sup_l2_error / denom : 0.0;
        out.rows.push_back(row);
    }
    for (const Run& run : runs)
        out.final_drift.push_back(
            mean_drift_residual(t_end, run.trace->final_state, run.theta0, run.nu));
    return out;
}

// ---------------------------------------------------------------------------
// Mollifier limit

struct MollifierRow {
    double eps;
    double l2_error;
};

struct MollifierResult {
    std::vector<MollifierRow> rows;
    std::vector<double> final_drift;
};

/// Runs the mollified-kernel dynamics for each ε and measures the L² distance
/// at t_end to the decoupled flow θ^in + ν t on [2 ε_max, 1 − 2 ε_max].
inline MollifierResult mollifier_experiment(const std::vector<double>& eps_list,
                                            const Scenario& base) {
    if (eps_list.empty()) throw domain_error("mollifier_experiment: no eps values");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0 && eps_list[i] <= 0.25))
            throw domain_error("mollifier_experiment: eps must lie in (0, 0.25]");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
            throw domain_error("mollifier_experiment: eps values must decrease");
    }
    const double eps_max = eps_list.front();
    const double lo = 2.0 * eps_max;
    const double hi = 1.0 - 2.0 * eps_max;

    const std::size_t m = eps_list.size();
    MollifierResult out{std::vector<MollifierRow>(m), std::vector<double>(m)};
    parallel_for(m, [&](std::size_t i) {
        Scenario s = base;
        s.kernel = Mollifier{eps_list[i]};
        s.output_times.clear();
        s.snapshot_every = 0;
        const RhsContext ctx = make_context(s);
        const Grid& g = ctx.grid();
        const Field theta0 = sample_on_grid(s.theta_init, g);
        const Trace tr = run_simulation(theta0, ctx, s.stepper, s.t_end);
        double sum = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double x = g.point(j);
            if (x < lo || x > hi) continue;
            const double limit = theta0[j] + ctx.nu[j] * s.t_end;
            sum += (tr.final_state[j] - limit) * (tr.final_state[j] - limit);
        }
        out.rows[i] = {eps_list[i], std::sqrt(sum * g.cell_width())};
        out.final_drift[i] = mean_drift_residual(s.t_end, tr.final_state, theta0, ctx.nu);
    });
    return out;
}

}  // namespace skm
