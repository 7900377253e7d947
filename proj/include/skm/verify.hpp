#pragma once

// Property and oracle checks shared by `skmlab verify` and the test suites.
// Each check returns a named pass/fail result with a short detail string.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "skm/bounds.hpp"
#include "skm/format.hpp"
#include "skm/kernelmath.hpp"
#include "skm/lattice.hpp"

namespace skm::verify {

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

inline bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CheckResult& r) { return r.passed; });
}

inline constexpr std::uint64_t default_seed = 20240917;
inline constexpr std::size_t default_samples = 1'000'000;

// ---------------------------------------------------------------------------
// Quadrature oracles

namespace oracle {

// ∫_{lo}^{hi} u^{−β} du for 0 ≤ lo ≤ hi, by tanh-sinh (singularity at u = 0).
inline double power_integral(double lo, double hi, double beta) {
    if (!(hi > lo)) return 0.0;
    static thread_local boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate([beta](double u) { return std::pow(u, -beta); }, lo, hi, 1e-14);
}

/// ∫₀¹ |x − y|^{−β} dy.
inline double row_integral(double x, double beta) {
    return power_integral(0.0, x, beta) + power_integral(0.0, 1.0 - x, beta);
}

/// n² ∬_{I_i×I_k} |x − y|^{−β} dy dx by nested tanh-sinh quadrature.
inline double cell_average(std::size_t i, std::size_t k, std::size_t n, double beta) {
    const double h = 1.0 / static_cast<double>(n);
    const double a = static_cast<double>(i) * h;
    const double b = a + h;
    const double c = static_cast<double>(k) * h;
    const double d = c + h;
    auto inner = [&](double x) {
        if (i == k) return power_integral(0.0, x - a, beta) + power_integral(0.0, b - x, beta);
        if (k > i) return power_integral(c - x, d - x, beta);
        return power_integral(x - d, x - c, beta);
    };
    boost::math::quadrature::tanh_sinh<double> outer;
    const double nn = static_cast<double>(n);
    return nn * nn * outer.integrate(inner, a, b, 1e-13);
}

/// I_{a,b} = ∫_{|a−y| ≤ |b−y|} (|a−y|^{−β} − |b−y|^{−β}) dy over y ∈ [0, 1].
inline double one_sided_integral(double a, double b, double beta) {
    if (a == b) return 0.0;
    // Region nearer to a is [0, m] when a < b and [m, 1] when a > b.
    const double m = 0.5 * (a + b);
    const double lo = a < b ? 0.0 : m;
    const double hi = a < b ? m : 1.0;
    // ∫_{lo}^{hi} |a−y|^{−β}: a lies in [lo, hi].
    const double near = power_integral(0.0, a - lo, beta) + power_integral(0.0, hi - a, beta);
    // ∫_{lo}^{hi} |b−y|^{−β}: b lies outside (lo, hi).
    const double far = power_integral(std::abs(b - hi) < std::abs(b - lo) ? std::abs(b - hi)
                                                                           : std::abs(b - lo),
                                      std::max(std::abs(b - hi), std::abs(b - lo)), beta);
    return (near - far);
}

}  // namespace oracle

// ---------------------------------------------------------------------------
// Bounds

/// κ* for the heterogeneous reference scenario (θ^in = sin, ν = cos, n = 512, ε = 0.5).
inline std::vector<CheckResult> check_kappa_star() {
    const Grid g(512);
    const auto d = scenario_diameters(sample_on_grid(Profile::sine(), g),
                                      sample_on_grid(Profile::cosine(), g));
    std::vector<CheckResult> out;
    for (auto [ab, expected] : {std::pair{0.2, 0.938074}, std::pair{0.7, 0.731129}}) {
        const double k = kappa_star(0.5, d, ab, ab);
        std::ostringstream o;
        o << "alpha=beta=" << ab << " kappa_star=" << format_double(k) << " expected "
          << expected;
        out.push_back({"kappa_star alpha=beta=" + format_double(ab),
                       std::abs(k - expected) <= 1e-5, o.str()});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Kernel checks

inline CheckResult check_cell_average_oracle(const std::vector<double>& betas,
                                             const std::vector<std::size_t>& sizes,
                                             double rel_tol = 1e-8) {
    double worst = 0.0;
    std::string where;
    for (double beta : betas) {
        for (std::size_t n : sizes) {
            const KernelMatrix k = build_kernel_matrix(Grid(n), beta, ExactCellAverage{});
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    const double ref = oracle::cell_average(i, j, n, beta);
                    const double rel = std::abs(k(i, j) - ref) / ref;
                    if (rel > worst) {
                        worst = rel;
                        where = "beta=" + format_double(beta) + " n=" + std::to_string(n) +
                                " (" + std::to_string(i) + "," + std::to_string(j) + ")";
                    }
                }
            }
        }
    }
    return {"cell averages vs 2D quadrature", worst <= rel_tol,
            "worst relative error " + format_double(worst) + (where.empty() ? "" : " at " + where)};
}

/// Row integral against quadrature, its maximum at 1/2 and its boundary minimum.
inline CheckResult check_row_integral_extremes(const std::vector<double>& betas,
                                               double tol = 1e-12) {
    double worst = 0.0;
    std::string where;
    auto note = [&](double err, const std::string& what) {
        if (err > worst) {
            worst = err;
            where = what;
        }
    };
    bool located = true;
    for (double beta : betas) {
        const auto kc = kernel_constants(beta);
        const std::string b = "beta=" + format_double(beta);
        for (int j = 0; j <= 64; ++j) {
            const double x = j / 64.0;
            note(std::abs(row_integral(x, beta) - oracle::row_integral(x, beta)),
                 b + " quadrature x=" + format_double(x));
        }
        // Golden-section maximization of the (concave) row integral.
        constexpr double inv_phi = 0.6180339887498948482;
        double lo = 0.0;
        double hi = 1.0;
        while (hi - lo > 1e-10) {
            const double a = hi - inv_phi * (hi - lo);
            const double c = lo + inv_phi * (hi - lo);
            if (row_integral(a, beta) < row_integral(c, beta))
                lo = a;
            else
                hi = c;
        }
        const double xmax = 0.5 * (lo + hi);
        note(std::abs(oracle::row_integral(xmax, beta) - kc.c_psi), b + " maximum");
        if (std::abs(xmax - 0.5) > 1e-6) located = false;
        note(std::abs(oracle::row_integral(0.0, beta) - kc.min_row), b + " x=0");
        note(std::abs(oracle::row_integral(1.0, beta) - kc.min_row), b + " x=1");
        double dense_min = row_integral(0.0, beta);
        for (int j = 1; j <= 10000; ++j) dense_min = std::min(dense_min, row_integral(j / 1e4, beta));
        note(std::abs(dense_min - kc.min_row), b + " dense minimum");
    }
    return {"row integral extremes", worst <= tol && located,
            "worst error " + format_double(worst) + (where.empty() ? "" : " at " + where) +
                (located ? "" : "; maximizer away from 1/2")};
}

struct AsymmetryMaximum {
    double value;
    double a;
    double b;
};

/// Maximum of I_{a,b} over a (steps+1)² grid of [0,1]², by quadrature.
inline AsymmetryMaximum locate_asymmetry_maximum(double beta, std::size_t steps = 100) {
    AsymmetryMaximum best{-1.0, 0.0, 0.0};
    for (std::size_t i = 0; i <= steps; ++i) {
        for (std::size_t j = 0; j <= steps; ++j) {
            const double a = static_cast<double>(i) / static_cast<double>(steps);
            const double b = static_cast<double>(j) / static_cast<double>(steps);
            const double v = oracle::one_sided_integral(a, b, beta);
            if (v > best.value) best = {v, a, b};
        }
    }
    return best;
}

inline CheckResult check_asymmetry_maximum(const std::vector<double>& betas, double tol = 1e-3) {
    bool ok = true;
    std::ostringstream o;
    for (double beta : betas) {
        const auto m = locate_asymmetry_maximum(beta);
        const double expected = kernel_constants(beta).max_asym;
        const bool pass = std::abs(m.value - expected) <= tol;
        ok = ok && pass;
        o << "beta=" << beta << ": max " << format_double(m.value) << " at (" << m.a << ","
          << m.b << "), closed form " << format_double(expected) << "; ";
    }
    return {"max of I_{a,b}", ok, o.str()};
}

// ---------------------------------------------------------------------------
// Scalar properties

namespace detail {

struct Sampler {
    explicit Sampler(std::uint64_t seed) : rng(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    // Log-uniform magnitude in [lo, hi].
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }
    std::mt19937_64 rng;
};

struct Pair {
    double t1;
    double t2;
};

// Deterministic dense pair set on [−2π, 2π]: symmetric pairs (−s, s) at
// log-spaced s plus offset pairs (θ, θ + s) on a θ grid × log-spaced s.
inline std::vector<Pair> dense_pairs(std::size_t count) {
    std::vector<Pair> out;
    out.reserve(count);
    const std::size_t side = static_cast<std::size_t>(std::sqrt(static_cast<double>(count)));
    const std::size_t sym = count - side * (side - 1);
    for (std::size_t k = 0; k < sym; ++k) {
        const double s = std::exp(std::log(1e-12) + (std::log(pi) - std::log(1e-12)) *
                                                        static_cast<double>(k) /
                                                        static_cast<double>(sym - 1));
        out.push_back({-s, s});
    }
    for (std::size_t i = 0; i < side; ++i) {
        const double t = -two_pi + 2.0 * two_pi * static_cast<double>(i) / static_cast<double>(side - 1);
        for (std::size_t j = 0; j + 1 < side; ++j) {
            const double s = std::exp(std::log(1e-10) + (std::log(two_pi) - std::log(1e-10)) *
                                                            static_cast<double>(j) /
                                                            static_cast<double>(side - 2));
            const double t2 = t + s <= two_pi ? t + s : t - s;
            out.push_back({t, t2});
        }
    }
    return out;
}

// Fresh random pairs: a uniform point plus a log-uniform offset, a quarter
// of them symmetric about 0.
inline Pair random_pair(Sampler& s) {
    const double gap = s.log_uniform(1e-12, two_pi);
    if (s.uniform(0.0, 1.0) < 0.25) return {-0.5 * gap, 0.5 * gap};
    const double t = s.uniform(-two_pi, two_pi);
    const double t2 = t + gap <= two_pi ? t + gap : t - gap;
    return {t, t2};
}

template <class H>
double holder_quotient(const H& h, const Pair& p, double alpha) {
    return std::abs(h(p.t1) - h(p.t2)) / std::pow(std::abs(p.t1 - p.t2), 1.0 - alpha);
}

// Largest slope of −h, i.e. ((−h)(θ₁) − (−h)(θ₂)) / (θ₁ − θ₂).
template <class H>
double negative_slope(const H& h, const Pair& p) {
    return (h(p.t2) - h(p.t1)) / (p.t1 - p.t2);
}

}  // namespace detail

/// Empirical Hölder constant: 1.05 × sup of the (1−α) difference quotient of h
/// over the dense pair sample.
inline double holder_constant(double alpha, std::size_t pairs = default_samples) {
    double sup = 0.0;
    auto h = [alpha](double t) { return coupling_h(t, alpha); };
    for (const auto& p : detail::dense_pairs(pairs))
        sup = std::max(sup, detail::holder_quotient(h, p, alpha));
    return 1.05 * sup;
}

/// Empirical one-sided Lipschitz constant of −h, same sampling and factor.
inline double one_sided_lipschitz_constant(double alpha, std::size_t pairs = default_samples) {
    double sup = 0.0;
    auto h = [alpha](double t) { return coupling_h(t, alpha); };
    for (const auto& p : detail::dense_pairs(pairs))
        sup = std::max(sup, detail::negative_slope(h, p));
    return 1.05 * sup;
}

struct ScalarSuiteOptions {
    std::vector<double> alphas{0.1, 0.25, 0.4, 0.5, 0.7};
    std::vector<double> decomposition_alphas{0.1, 0.25, 0.4};
    std::vector<double> eps_values{1.0, 0.1, 0.01};
    std::size_t samples = default_samples;
    std::uint64_t seed = default_seed;
};

inline std::vector<CheckResult> check_scalar_properties(const ScalarSuiteOptions& opt = {}) {
    std::vector<CheckResult> out;
    detail::Sampler s(opt.seed);
    const std::size_t n = opt.samples;

    {  // |h| ≤ 1, |h_ε| ≤ |h|
        bool bounded = true;
        bool eps_dominated = true;
        for (std::size_t k = 0; k < n; ++k) {
            const double a = opt.alphas[k % opt.alphas.size()];
            const double t = s.uniform(-20.0, 20.0);
            const double h = coupling_h(t, a);
            if (!(std::abs(h) <= 1.0)) bounded = false;
            const double e = opt.eps_values[k % opt.eps_values.size()];
            if (!(std::abs(coupling_h_eps(t, a, e)) <= std::abs(h))) eps_dominated = false;
        }
        out.push_back({"|h| <= 1", bounded, std::to_string(n) + " samples"});
        out.push_back({"|h_eps| <= |h|", eps_dominated, std::to_string(n) + " samples"});
    }

    {  // oddness and 2π-periodicity
        double odd_worst = 0.0;
        bool periodic = true;
        double per_worst = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double a = opt.alphas[k % opt.alphas.size()];
            const double t = s.uniform(-two_pi, two_pi);
            odd_worst = std::max(odd_worst, std::abs(coupling_h(-t, a) + coupling_h(t, a)));
            const int shift = static_cast<int>(s.uniform(-5.0, 5.0));
            const double shifted = t + two_pi * shift;
            // The shifted argument carries a rounding error of a few ulps; allow
            // for it through the Hölder modulus of h.
            const double arg_err = 4.0 * std::numeric_limits<double>::epsilon() *
                                   (std::abs(t) + two_pi * std::abs(shift) + 1.0);
            const double allowed = 2.0 * std::pow(arg_err, 1.0 - a) + 1e-15;
            const double diff = std::abs(coupling_h(shifted, a) - coupling_h(t, a));
            per_worst = std::max(per_worst, diff);
            if (diff > allowed) periodic = false;
        }
        out.push_back({"h odd", odd_worst <= 1e-15, "worst " + format_double(odd_worst)});
        out.push_back({"h 2pi-periodic", periodic, "worst " + format_double(per_worst)});
    }

    {  // Hölder bound with the frozen C_α, for h and h_ε
        bool ok = true;
        std::ostringstream o;
        for (double a : opt.alphas) {
            const double c = holder_constant(a, n);
            double worst = 0.0;
            for (std::size_t k = 0; k < n / opt.alphas.size(); ++k) {
                const auto p = detail::random_pair(s);
                worst = std::max(worst, detail::holder_quotient(
                                            [a](double t) { return coupling_h(t, a); }, p, a));
                for (double e : opt.eps_values)
                    worst = std::max(worst, detail::holder_quotient(
                                                [a, e](double t) { return coupling_h_eps(t, a, e); },
                                                p, a));
            }
            if (worst > c) ok = false;
            o << "alpha=" << a << " C=" << format_double(c) << " seen=" << format_double(worst) << "; ";
        }
        out.push_back({"Hoelder bound (h and h_eps)", ok, o.str()});
    }

    {  // one-sided Lipschitz bound with the frozen L_h, for −h and −h_ε
        bool ok = true;
        std::ostringstream o;
        for (double a : opt.alphas) {
            const double l = one_sided_lipschitz_constant(a, n);
            double worst = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < n / opt.alphas.size(); ++k) {
                const auto p = detail::random_pair(s);
                worst = std::max(worst, detail::negative_slope(
                                            [a](double t) { return coupling_h(t, a); }, p));
                for (double e : opt.eps_values)
                    worst = std::max(worst, detail::negative_slope(
                                                [a, e](double t) { return coupling_h_eps(t, a, e); },
                                                p));
            }
            if (worst > l) ok = false;
            o << "alpha=" << a << " L=" << format_double(l) << " seen=" << format_double(worst) << "; ";
        }
        out.push_back({"one-sided Lipschitz bound (-h and -h_eps)", ok, o.str()});
    }

    {  // subadditivity u^q + v^q ≥ (u+v)^q
        bool ok = true;
        for (std::size_t k = 0; k < n; ++k) {
            const double u = s.uniform(0.0, 10.0);
            const double v = s.uniform(0.0, 10.0);
            const double q = s.uniform(0.0, 1.0);
            const double rhs = std::pow(u + v, q);
            if (std::pow(u, q) + std::pow(v, q) < rhs * (1.0 - 4e-16)) ok = false;
        }
        out.push_back({"subadditivity", ok, std::to_string(n) + " samples"});
    }

    {  // monotone sin θ/θ^{1+α} and sin θ/θ on sorted (0, π) samples, cross inequality
        std::vector<double> t(n);
        for (auto& v : t) v = s.uniform(0.0, pi);
        std::sort(t.begin(), t.end());
        t.erase(std::remove(t.begin(), t.end(), 0.0), t.end());
        bool mono = true;
        for (double a : opt.alphas) {
            double prev1 = std::numeric_limits<double>::infinity();
            double prev2 = std::numeric_limits<double>::infinity();
            for (double x : t) {
                const double f1 = std::sin(x) / std::pow(x, 1.0 + a);
                const double f2 = std::sin(x) / x;
                if (f1 > prev1 * (1.0 + 4e-16) || f2 > prev2 * (1.0 + 4e-16)) mono = false;
                prev1 = f1;
                prev2 = f2;
            }
        }
        out.push_back({"sin/theta^(1+alpha) and sin/theta nonincreasing", mono,
                       std::to_string(t.size()) + " sorted samples"});

        bool cross = true;
        for (std::size_t k = 0; k < n; ++k) {
            const double a = opt.alphas[k % opt.alphas.size()];
            double t1 = s.uniform(0.0, pi);
            double t2 = s.uniform(0.0, pi);
            if (t1 == 0.0 || t2 == 0.0) continue;
            if (t2 > t1) std::swap(t1, t2);
            const double lhs = t2 * coupling_h(t1, a);
            const double rhs = t1 * coupling_h(t2, a);
            if (lhs > rhs + 4e-16 * std::abs(rhs)) cross = false;
        }
        out.push_back({"cross inequality", cross, std::to_string(n) + " samples"});
    }

    {  // Δ + Λ = −h and Δ nonincreasing
        bool sum_ok = true;
        bool mono = true;
        double worst = 0.0;
        std::vector<double> t(n);
        for (double a : opt.decomposition_alphas) {
            const Decomposition dec(a);
            for (auto& v : t) v = s.uniform(-two_pi, two_pi);
            std::sort(t.begin(), t.end());
            double prev = std::numeric_limits<double>::infinity();
            for (double x : t) {
                const auto v = dec(x);
                const double err = std::abs(v.delta + v.lambda + coupling_h(x, a));
                worst = std::max(worst, err);
                if (err > 1e-14) sum_ok = false;
                if (v.delta > prev) mono = false;
                prev = v.delta;
            }
        }
        out.push_back({"delta + lambda = -h", sum_ok, "worst " + format_double(worst)});
        out.push_back({"delta nonincreasing", mono, std::to_string(n) + " sorted samples per alpha"});
    }
    return out;
}

/// Everything `skmlab verify` runs.
inline std::vector<CheckResult> run_all(const ScalarSuiteOptions& opt = {}) {
    std::vector<CheckResult> out = check_kappa_star();
    const std::vector<double> betas{0.2, 0.5, 0.8};
    out.push_back(check_cell_average_oracle(betas, {4, 8, 16}));
    out.push_back(check_row_integral_extremes(betas));
    out.push_back(check_asymmetry_maximum(betas));
    for (auto& r : check_scalar_properties(opt)) out.push_back(std::move(r));
    return out;
}

}  // namespace skm::verify
