#pragma once

// Right-hand side of the singular Kuramoto lattice
//
//   dθ_i/dt = ν_i + κ/N Σ_{j≠i} K_ij sin(θ_j − θ_i) / max{|θ_j − θ_i|_o, δ}^α
//
// and the diagnostics built on it.

#include <cmath>
#include <memory>
#include <span>
#include <utility>

#include "skm/errors.hpp"
#include "skm/kernelmath.hpp"
#include "skm/lattice.hpp"

namespace skm {

struct RhsContext {
    RhsContext(Field nu_, std::shared_ptr<const KernelMatrix> kernel_, double kappa_,
               double alpha_, double phase_delta_)
        : nu(std::move(nu_)), kernel(std::move(kernel_)), kappa(kappa_), alpha(alpha_),
          phase_delta(phase_delta_) {
        if (!kernel) throw domain_error("RhsContext: missing kernel");
        if (!(nu.grid() == kernel->grid()))
            throw domain_error("RhsContext: frequency field and kernel live on different grids");
        if (!(kappa >= 0.0) || !std::isfinite(kappa))
            throw domain_error("RhsContext: kappa must be finite and nonnegative");
        detail::require_exponent(alpha, "alpha");
        if (!(phase_delta > 0.0)) throw domain_error("RhsContext: phase_delta must be positive");
    }

    const Grid& grid() const noexcept { return nu.grid(); }

    Field nu;
    std::shared_ptr<const KernelMatrix> kernel;
    double kappa;
    double alpha;
    double phase_delta;
};

/// Writes f(θ) into `out`. Each unordered pair (i, j) is evaluated once and
/// scattered with opposite signs, so the coupling part sums to zero up to
/// rounding. Loop order is fixed, so results are bitwise reproducible.
inline void rhs_into(std::span<const double> theta, const RhsContext& ctx, std::span<double> out) {
    const std::size_t n = ctx.grid().size();
    if (theta.size() != n || out.size() != n) throw domain_error("rhs: grid mismatch");

    const KernelMatrix& k = *ctx.kernel;
    const double alpha = ctx.alpha;
    const double delta = ctx.phase_delta;
    const double delta_pow = std::pow(delta, alpha);

    for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;

    if (ctx.kappa != 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            const double ti = theta[i];
            const auto row = k.row(i);
            double acc = out[i];
            for (std::size_t j = i + 1; j < n; ++j) {
                double d = theta[j] - ti;
                if (d > pi || d <= -pi) d = wrap_principal(d);
                const double a = std::abs(d);
                const double denom = a > delta ? (alpha == 0.0 ? 1.0 : std::pow(a, alpha))
                                               : delta_pow;
                const double v = row[j] * std::sin(d) / denom;
                acc += v;
                out[j] -= v;
            }
            out[i] = acc;
        }
    }

    const double scale = ctx.kappa * k.quad_weight();
    const auto nu = ctx.nu.values();
    for (std::size_t i = 0; i < n; ++i) out[i] = nu[i] + scale * out[i];
}

inline Field rhs(const Field& theta, const RhsContext& ctx) {
    if (!(theta.grid() == ctx.grid())) throw domain_error("rhs: grid mismatch");
    Field out(theta.grid());
    rhs_into(theta.values(), ctx, out.values());
    return out;
}

/// |mean θ(t) − mean θ(0) − t · mean ν|, which vanishes for exact solutions.
inline double mean_drift_residual(double t, const Field& theta, const Field& theta0,
                                  const Field& nu) {
    if (!(theta.grid() == theta0.grid()) || !(theta.grid() == nu.grid()))
        throw domain_error("mean_drift_residual: fields on different grids");
    return std::abs(norm(theta, NormKind::mean) - norm(theta0, NormKind::mean) -
                    norm(nu, NormKind::mean) * t);
}

}  // namespace skm
