#pragma once

// Scalar mathematics of the singular coupling h(θ) = sin θ / |θ|_o^α, the
// power-law interaction weight ψ(x,y) = |x−y|^{−β}, their regularizations,
// and closed-form constants derived from them.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "skm/errors.hpp"

namespace skm {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

namespace detail {

inline void require_exponent(double e, const char* name) {
    if (!(e >= 0.0 && e < 1.0))
        throw domain_error(std::string(name) + " must lie in [0, 1), got " + std::to_string(e));
}

inline void require_unit(double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0))
        throw domain_error(std::string(name) + " must lie in [0, 1], got " + std::to_string(x));
}

}  // namespace detail

/// Principal representative of θ modulo 2π, in (−π, π].
inline double wrap_principal(double theta) {
    if (!std::isfinite(theta)) throw domain_error("wrap_principal: non-finite angle");
    if (theta > -pi && theta <= pi) return theta;
    double r = std::remainder(theta, two_pi);
    if (r <= -pi) r += two_pi;
    return r;
}

/// |θ|_o, the distance of θ to the nearest multiple of 2π.
inline double angle_modulus(double theta) { return std::abs(wrap_principal(theta)); }

inline double coupling_h(double theta, double alpha) {
    const double w = wrap_principal(theta);
    if (w == 0.0) return 0.0;
    return std::sin(w) / std::pow(std::abs(w), alpha);
}

inline double coupling_h_eps(double theta, double alpha, double eps) {
    if (!(eps > 0.0)) throw domain_error("coupling_h_eps: eps must be positive");
    const double w = wrap_principal(theta);
    return std::sin(w) / (std::pow(std::abs(w), alpha) + eps);
}

/// Small-angle cutoff used by the lattice right-hand side: |θ|_o is floored at δ.
inline double coupling_h_delta(double theta, double alpha, double delta) {
    if (!(delta > 0.0)) throw domain_error("coupling_h_delta: delta must be positive");
    const double w = wrap_principal(theta);
    return std::sin(w) / std::pow(std::max(std::abs(w), delta), alpha);
}

/// ψ_ε(x,y) = 1 / (|x−y|^β + ε). With ε = 0 this is the singular weight itself.
inline double weight_psi(double x, double y, double beta, double eps) {
    detail::require_exponent(beta, "beta");
    if (eps < 0.0) throw domain_error("weight_psi: eps must be nonnegative");
    const double d = std::abs(x - y);
    if (d == 0.0 && eps == 0.0)
        throw domain_error("weight_psi: singular at x = y without a cutoff");
    return 1.0 / (std::pow(d, beta) + eps);
}

/// Exact ∫₀¹ |x−y|^{−β} dy.
inline double row_integral(double x, double beta) {
    detail::require_exponent(beta, "beta");
    detail::require_unit(x, "x");
    const double q = 1.0 - beta;
    return (std::pow(x, q) + std::pow(1.0 - x, q)) / q;
}

struct KernelConstants {
    double c_psi;     // max_x row_integral(x), attained at x = 1/2
    double min_row;   // min_x row_integral(x), attained at x ∈ {0, 1}
    double max_asym;  // max over (a,b) of the one-sided integral I_{a,b}
};

inline KernelConstants kernel_constants(double beta) {
    detail::require_exponent(beta, "beta");
    const double q = 1.0 - beta;
    const double p = std::pow(2.0, beta);
    return {p / q, 1.0 / q, (p - 1.0) / q};
}

struct HBar {
    double theta;  // maximizer in (0, π)
    double value;  // h(theta)
};

/// Maximum of h on (0, π), located at the root of θ cos θ = α sin θ in (0, π/2].
inline HBar h_bar_argmax(double alpha) {
    detail::require_exponent(alpha, "alpha");
    // cos θ − α sin θ / θ falls from 1 − α at 0⁺ to −2α/π at π/2.
    auto g = [alpha](double t) { return std::cos(t) - alpha * std::sin(t) / t; };
    double lo = 0.0;
    double hi = pi / 2.0;
    if (alpha > 0.0) {
        while (hi - lo > 1e-15) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (g(mid) > 0.0)
                lo = mid;
            else
                hi = mid;
        }
    } else {
        lo = hi;
    }
    const double t = 0.5 * (lo + hi);
    return {t, coupling_h(t, alpha)};
}

inline double h_bar(double alpha) { return h_bar_argmax(alpha).value; }

/// Root of 2α sin θ = θ cos θ in (0, π/2), or nullopt when the left side never
/// crosses the right one there (which is the case for every α ≥ 1/2).
inline std::optional<double> tilde_theta(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw domain_error("tilde_theta: alpha must lie in (0, 1)");
    // Divided by θ so the sign near 0 is that of 2α − 1, free of cancellation.
    auto g = [alpha](double t) { return 2.0 * alpha * std::sin(t) / t - std::cos(t); };
    double lo = 1e-9;
    double hi = pi / 2.0 - 1e-9;
    double glo = g(lo);
    const double ghi = g(hi);
    if (!(glo < 0.0 && ghi > 0.0)) return std::nullopt;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Splitting −h = Δ + Λ on [−2π, 2π] with Δ nonincreasing and Λ Lipschitz.
/// Construction fails with no_root when θ̃ does not exist for the given α.
class Decomposition {
public:
    struct Value {
        double delta;
        double lambda;
    };

    explicit Decomposition(double alpha) : alpha_(alpha) {
        const auto t = tilde_theta(alpha);
        if (!t) throw no_root("2α sin θ = θ cos θ has no root in (0, π/2) for alpha = " +
                              std::to_string(alpha));
        tilde_ = *t;
        h_bar_ = skm::h_bar(alpha);
    }

    double alpha() const noexcept { return alpha_; }
    double theta_tilde() const noexcept { return tilde_; }
    double h_bar() const noexcept { return h_bar_; }

    Value operator()(double theta) const {
        if (!(theta >= -two_pi && theta <= two_pi))
            throw domain_error("Decomposition: theta must lie in [-2π, 2π]");
        const double h = coupling_h(theta, alpha_);
        if (theta < -two_pi + tilde_) return {2.0 * h_bar_ - h, -2.0 * h_bar_};
        if (theta < -tilde_) return {h_bar_, -h_bar_ - h};
        if (theta <= tilde_) return {-h, 0.0};
        if (theta <= two_pi - tilde_) return {-h_bar_, h_bar_ - h};
        return {-h - 2.0 * h_bar_, 2.0 * h_bar_};
    }

private:
    double alpha_;
    double tilde_ = 0.0;
    double h_bar_ = 0.0;
};

inline Decomposition::Value delta_lambda(double theta, double alpha) {
    return Decomposition(alpha)(theta);
}

}  // namespace skm
