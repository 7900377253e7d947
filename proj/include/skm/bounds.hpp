#pragma once

// Closed-form synchronization estimates for the continuum model and the
// verdicts that compare a simulated trace against them.
//
// Notation shared by every formula below:
//   D₀ = initial phase diameter, D(ν) = frequency diameter,
//   s  = sin(D₀), c_β = (2 − 2^β) / (1 − β).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>

#include "skm/errors.hpp"
#include "skm/format.hpp"
#include "skm/integrator.hpp"
#include "skm/kernelmath.hpp"
#include "skm/lattice.hpp"

namespace skm {

/// Diameters entering the bounds, taken from the grid samples (max − min).
struct ScenarioDiameters {
    double d0;
    double d_nu;
};

inline ScenarioDiameters scenario_diameters(const Field& theta0, const Field& nu) {
    return {norm(theta0, NormKind::diam), norm(nu, NormKind::diam)};
}

namespace detail {

inline void require_bound_domain(const ScenarioDiameters& d, double alpha, double beta) {
    if (!(d.d0 > 0.0 && d.d0 < pi)) throw domain_error("bounds: need 0 < D0 < pi");
    if (!(d.d_nu >= 0.0)) throw domain_error("bounds: D(nu) must be nonnegative");
    if (!(alpha > 0.0 && alpha < 1.0)) throw domain_error("bounds: alpha must lie in (0, 1)");
    require_exponent(beta, "beta");
}

inline double c_beta(double beta) { return (2.0 - std::pow(2.0, beta)) / (1.0 - beta); }

}  // namespace detail

/// Integrated comparison bound (D₀^α − ακ (s/D₀) c_β t)^{1/α}, clipped at 0.
inline double sync_envelope(double t, const ScenarioDiameters& d, double alpha, double beta,
                            double kappa) {
    detail::require_bound_domain(d, alpha, beta);
    if (!(kappa > 0.0)) throw domain_error("sync_envelope: kappa must be positive");
    if (!(t >= 0.0)) throw domain_error("sync_envelope: t must be nonnegative");
    const double radicand = std::pow(d.d0, alpha) -
                            alpha * kappa * (std::sin(d.d0) / d.d0) * detail::c_beta(beta) * t;
    return radicand > 0.0 ? std::pow(radicand, 1.0 / alpha) : 0.0;
}

/// Time at which sync_envelope reaches zero.
inline double t_envelope(const ScenarioDiameters& d, double alpha, double beta, double kappa) {
    detail::require_bound_domain(d, alpha, beta);
    if (!(kappa > 0.0)) throw domain_error("t_envelope: kappa must be positive");
    return (1.0 - beta) * std::pow(d.d0, 1.0 + alpha) /
           (alpha * kappa * std::sin(d.d0) * (2.0 - std::pow(2.0, beta)));
}

/// Coupling above which the diameter never exceeds D₀.
inline double bounded_diameter_threshold(const ScenarioDiameters& d, double alpha, double beta) {
    detail::require_bound_domain(d, alpha, beta);
    return d.d_nu * std::pow(d.d0, alpha) * (1.0 - beta) /
           (std::sin(d.d0) * (2.0 - std::pow(2.0, beta)));
}

/// Critical coupling for practical synchronization below eps.
inline double kappa_star(double eps, const ScenarioDiameters& d, double alpha, double beta) {
    detail::require_bound_domain(d, alpha, beta);
    if (!(eps > 0.0 && eps < 1.0)) throw domain_error("kappa_star: eps must lie in (0, 1)");
    const double denom = std::sin(d.d0) * (2.0 - std::pow(2.0, beta));
    const double first = d.d_nu * std::pow(d.d0, alpha + 1.0) * (1.0 - beta) / (eps * denom);
    const double second = d.d_nu * std::pow(d.d0, alpha) * (1.0 - beta) / denom;
    return std::max(first, second);
}

struct PracticalBound {
    double value;
    double asymptote;  // A, the t → ∞ limit
};

/// Exponential comparison bound (D₀ − A) e^{−Bt} + A for the heterogeneous case.
inline PracticalBound practical_bound(double t, double kappa, const ScenarioDiameters& d,
                                      double alpha, double beta) {
    if (!(kappa > bounded_diameter_threshold(d, alpha, beta)))
        throw hypothesis_not_met("practical_bound: kappa does not exceed the bounded-diameter "
                                 "threshold");
    const double s = std::sin(d.d0);
    const double d0a1 = std::pow(d.d0, alpha + 1.0);
    const double a = d.d_nu * d0a1 * (1.0 - beta) / (kappa * s * (2.0 - std::pow(2.0, beta)));
    const double b = kappa * (s / d0a1) * detail::c_beta(beta);
    return {(d.d0 - a) * std::exp(-b * t) + a, a};
}

/// Time after which the practical bound stays below eps.
inline double t_star(double eps, double kappa, const ScenarioDiameters& d, double alpha,
                     double beta) {
    if (!(kappa > kappa_star(eps, d, alpha, beta)))
        throw hypothesis_not_met("t_star: kappa does not exceed kappa_star(eps)");
    if (d.d0 < eps) return 0.0;
    const double s = std::sin(d.d0);
    const double d0a1 = std::pow(d.d0, alpha + 1.0);
    const double rate_inv = d0a1 * (1.0 - beta) / (kappa * s * (2.0 - std::pow(2.0, beta)));
    const double a = d.d_nu * rate_inv;
    return rate_inv * std::log((d.d0 - a) / (eps - a));
}

// ---------------------------------------------------------------------------
// Verdicts

struct ScenarioDescriptor {
    double alpha;
    double beta;
    double kappa;
    double phase_delta = 1e-3;
    double practical_eps = 0.5;
    ScenarioDiameters diameters;
    bool homogeneous;       // constant natural frequencies
    bool monotone = false;  // θ^in and ν strictly increasing on the grid
};

struct EnvelopeViolations {
    std::size_t count = 0;
    double worst_margin = 0.0;  // max over records of diameter − envelope
};

struct BoundReport {
    std::optional<double> t_env;
    EnvelopeViolations envelope_violations;
    std::optional<bool> synced_by_deadline;  // diameter < 10δ for t ≥ 1.1 t_env
    std::optional<double> kappa_star;
    std::optional<double> practical_A;
    std::optional<double> t_star;
    std::optional<bool> practical_ok;  // diameter ≤ eps for t ≥ t_star
    bool exceeds_eps = false;          // some record has diameter > eps
    bool contraction_ok = true;
    std::optional<bool> ordering_ok;
};

inline constexpr double contraction_tolerance = 1e-9;
inline constexpr double envelope_slack_fraction = 0.02;
inline constexpr double sync_threshold_factor = 10.0;
inline constexpr double envelope_deadline_factor = 1.1;

inline bool strictly_increasing(std::span<const double> v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) return false;
    return true;
}

/// Homogeneous runs: contraction, envelope and finite-time synchronization.
/// Heterogeneous runs: κ*-side quantities, and contraction_ok reports the
/// weaker property that the diameter never exceeds D₀.
inline BoundReport evaluate_verdicts(const Trace& trace, const ScenarioDescriptor& s) {
    if (trace.records.empty()) throw domain_error("evaluate_verdicts: empty trace");
    const auto& d = s.diameters;
    const bool bounds_apply = d.d0 > 0.0 && d.d0 < pi && s.alpha > 0.0 && s.alpha < 1.0 &&
                              s.kappa > 0.0;
    BoundReport r;

    if (s.homogeneous) {
        for (std::size_t i = 1; i < trace.records.size(); ++i)
            if (trace.records[i].diameter > trace.records[i - 1].diameter + contraction_tolerance)
                r.contraction_ok = false;
        if (bounds_apply) {
            r.t_env = t_envelope(d, s.alpha, s.beta, s.kappa);
            r.envelope_violations.worst_margin = -std::numeric_limits<double>::infinity();
            for (const auto& rec : trace.records) {
                const double env = sync_envelope(rec.t, d, s.alpha, s.beta, s.kappa);
                r.envelope_violations.worst_margin =
                    std::max(r.envelope_violations.worst_margin, rec.diameter - env);
                if (rec.diameter > env + envelope_slack_fraction * d.d0)
                    ++r.envelope_violations.count;
            }
            const double deadline = envelope_deadline_factor * *r.t_env;
            if (trace.records.back().t >= deadline) {
                bool ok = true;
                for (const auto& rec : trace.records)
                    if (rec.t >= deadline && !(rec.diameter < sync_threshold_factor * s.phase_delta))
                        ok = false;
                r.synced_by_deadline = ok;
            }
        }
    } else {
        for (const auto& rec : trace.records)
            if (rec.diameter > d.d0 + contraction_tolerance) r.contraction_ok = false;
        if (bounds_apply && s.practical_eps > 0.0 && s.practical_eps < 1.0) {
            r.kappa_star = kappa_star(s.practical_eps, d, s.alpha, s.beta);
            if (s.kappa > bounded_diameter_threshold(d, s.alpha, s.beta))
                r.practical_A = practical_bound(0.0, s.kappa, d, s.alpha, s.beta).asymptote;
            if (s.kappa > *r.kappa_star) {
                r.t_star = t_star(s.practical_eps, s.kappa, d, s.alpha, s.beta);
                bool ok = true;
                for (const auto& rec : trace.records)
                    if (rec.t >= *r.t_star && rec.diameter > s.practical_eps) ok = false;
                r.practical_ok = ok;
            }
        }
    }
    for (const auto& rec : trace.records)
        if (rec.diameter > s.practical_eps) r.exceeds_eps = true;

    if (s.monotone && !trace.snapshots.empty()) {
        bool ok = true;
        for (const auto& snap : trace.snapshots)
            if (!strictly_increasing(snap.state.values())) ok = false;
        r.ordering_ok = ok;
    }
    return r;
}

inline std::string optional_bool(const std::optional<bool>& b) {
    return b ? (*b ? "true" : "false") : "";
}

/// Flat `key=value` block, one key per line; absent values are left empty.
inline std::string to_key_value(const BoundReport& r) {
    std::ostringstream o;
    o << "t_env=" << format_optional(r.t_env) << '\n'
      << "envelope_violations=" << r.envelope_violations.count << '\n'
      << "envelope_worst_margin=" << (r.t_env ? format_double(r.envelope_violations.worst_margin)
                                               : std::string{})
      << '\n'
      << "synced_by_deadline=" << optional_bool(r.synced_by_deadline) << '\n'
      << "kappa_star=" << format_optional(r.kappa_star) << '\n'
      << "practical_A=" << format_optional(r.practical_A) << '\n'
      << "t_star=" << format_optional(r.t_star) << '\n'
      << "practical_ok=" << optional_bool(r.practical_ok) << '\n'
      << "exceeds_eps=" << (r.exceeds_eps ? "true" : "false") << '\n'
      << "contraction_ok=" << (r.contraction_ok ? "true" : "false") << '\n'
      << "ordering_ok=" << optional_bool(r.ordering_ok) << '\n';
    return o.str();
}

inline std::string bound_report_csv_header() {
    return "t_env,envelope_violations,envelope_worst_margin,synced_by_deadline,kappa_star,"
           "practical_A,t_star,practical_ok,exceeds_eps,contraction_ok,ordering_ok";
}

inline std::string to_csv_row(const BoundReport& r) {
    std::ostringstream o;
    o << format_optional(r.t_env) << ',' << r.envelope_violations.count << ','
      << (r.t_env ? format_double(r.envelope_violations.worst_margin) : std::string{}) << ','
      << optional_bool(r.synced_by_deadline) << ',' << format_optional(r.kappa_star) << ','
      << format_optional(r.practical_A) << ',' << format_optional(r.t_star) << ','
      << optional_bool(r.practical_ok) << ',' << (r.exceeds_eps ? "true" : "false") << ','
      << (r.contraction_ok ? "true" : "false") << ',' << optional_bool(r.ordering_ok);
    return o.str();
}

}  // namespace skm
