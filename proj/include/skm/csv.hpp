#pragma once

// CSV and plain-text serialization of traces, experiment tables and bound
// summaries. Floats use the shortest round-trip representation.

#include <sstream>
#include <string>

#include "skm/bounds.hpp"
#include "skm/experiments.hpp"
#include "skm/format.hpp"
#include "skm/integrator.hpp"

namespace skm {

inline constexpr const char* trace_csv_header =
    "t,dt,diameter,mean,min,max,picard_iters,envelope,practical_bound";
inline constexpr const char* sweep_csv_header = "axis_name,axis_value,t,diameter";
inline constexpr const char* convergence_csv_header =
    "n,sup_l2_error,init_err_sq,nu_err_l1,psi_err_l1,bound_ratio";
inline constexpr const char* mollifier_csv_header = "eps,l2_error";

namespace detail {

inline bool envelope_applies(const ScenarioDescriptor& s) {
    const auto& d = s.diameters;
    return s.homogeneous && d.d0 > 0.0 && d.d0 < pi && s.alpha > 0.0 && s.alpha < 1.0 &&
           s.kappa > 0.0;
}

inline bool practical_bound_applies(const ScenarioDescriptor& s) {
    const auto& d = s.diameters;
    return !s.homogeneous && d.d0 > 0.0 && d.d0 < pi && s.alpha > 0.0 && s.alpha < 1.0 &&
           s.kappa > bounded_diameter_threshold(d, s.alpha, s.beta);
}

}  // namespace detail

inline std::string trace_csv(const Trace& trace, const ScenarioDescriptor& s) {
    const bool env = detail::envelope_applies(s);
    const bool prac = detail::practical_bound_applies(s);
    std::ostringstream o;
    o << trace_csv_header << '\n';
    for (const auto& r : trace.records) {
        o << format_double(r.t) << ',' << format_double(r.dt) << ',' << format_double(r.diameter)
          << ',' << format_double(r.mean) << ',' << format_double(r.min) << ','
          << format_double(r.max) << ',' << r.picard_iters << ',';
        if (env) o << format_double(sync_envelope(r.t, s.diameters, s.alpha, s.beta, s.kappa));
        o << ',';
        if (prac)
            o << format_double(practical_bound(r.t, s.kappa, s.diameters, s.alpha, s.beta).value);
        o << '\n';
    }
    return o.str();
}

inline std::string sweep_csv(const SweepResult& r) {
    std::ostringstream o;
    o << sweep_csv_header << '\n';
    for (const auto& row : r.rows)
        o << axis_name(row.axis) << ',' << format_double(row.axis_value) << ','
          << format_double(row.t) << ',' << format_double(row.diameter) << '\n';
    return o.str();
}

inline std::string convergence_csv(const ConvergenceResult& r) {
    std::ostringstream o;
    o << convergence_csv_header << '\n';
    for (const auto& row : r.rows)
        o << row.n << ',' << format_double(row.sup_l2_error) << ','
          << format_double(row.init_err_sq) << ',' << format_double(row.nu_err) << ','
          << format_double(row.psi_err) << ',' << format_double(row.bound_ratio) << '\n';
    return o.str();
}

inline std::string mollifier_csv(const MollifierResult& r) {
    std::ostringstream o;
    o << mollifier_csv_header << '\n';
    for (const auto& row : r.rows)
        o << format_double(row.eps) << ',' << format_double(row.l2_error) << '\n';
    return o.str();
}

/// Closed-form quantities for a scenario, one `key=value` per line; keys whose
/// hypotheses fail are left empty.
inline std::string bounds_summary(const Scenario& s) {
    const Grid g(s.n);
    const Field theta0 = sample_on_grid(s.theta_init, g);
    const Field nu = sample_on_grid(s.nu, g);
    const auto d = scenario_diameters(theta0, nu);
    const bool domain = d.d0 > 0.0 && d.d0 < pi && s.alpha > 0.0 && s.alpha < 1.0;
    std::optional<double> t_env, threshold, k_star, a, t_st;
    if (domain) {
        threshold = bounded_diameter_threshold(d, s.alpha, s.beta);
        k_star = kappa_star(s.practical_eps, d, s.alpha, s.beta);
        if (s.kappa > 0.0) t_env = t_envelope(d, s.alpha, s.beta, s.kappa);
        if (s.kappa > *threshold)
            a = practical_bound(0.0, s.kappa, d, s.alpha, s.beta).asymptote;
        if (s.kappa > *k_star) t_st = t_star(s.practical_eps, s.kappa, d, s.alpha, s.beta);
    }
    std::ostringstream o;
    o << "d0=" << format_double(d.d0) << '\n'
      << "d_nu=" << format_double(d.d_nu) << '\n'
      << "c_psi=" << format_double(kernel_constants(s.beta).c_psi) << '\n'
      << "bounded_diameter_threshold=" << format_optional(threshold) << '\n'
      << "kappa_star=" << format_optional(k_star) << '\n'
      << "t_envelope=" << format_optional(t_env) << '\n'
      << "t_star=" << format_optional(t_st) << '\n'
      << "practical_A=" << format_optional(a) << '\n';
    return o.str();
}

}  // namespace skm
