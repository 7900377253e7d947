#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skm {

/// Argument outside the documented domain of an operation.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A defining equation has no solution in the searched interval.
class no_root : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An analytic bound was requested outside the hypothesis it is proven under.
class hypothesis_not_met : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class picard_not_converged : public std::runtime_error {
public:
    picard_not_converged(std::size_t iterations, double last_change)
        : std::runtime_error("picard iteration did not converge after " +
                             std::to_string(iterations) + " iterations (last change " +
                             std::to_string(last_change) + ")"),
          iterations_(iterations), last_change_(last_change) {}

    std::size_t iterations() const noexcept { return iterations_; }
    double last_change() const noexcept { return last_change_; }

private:
    std::size_t iterations_;
    double last_change_;
};

/// Step size fell below the configured floor while retrying failed implicit solves.
class unrecoverable_stiffness : public std::runtime_error {
public:
    unrecoverable_stiffness(double t, double dt)
        : std::runtime_error("step size " + std::to_string(dt) + " fell below dt_min at t = " +
                             std::to_string(t)),
          t_(t), dt_(dt) {}

    double time() const noexcept { return t_; }
    double step() const noexcept { return dt_; }

private:
    double t_;
    double dt_;
};

}  // namespace skm
