#pragma once

// Uniform grid on [0,1), step-function fields, dense interaction matrices and
// the discrete L¹ / L² / diameter functionals.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "skm/errors.hpp"
#include "skm/kernelmath.hpp"

namespace skm {

/// N equal cells of [0,1]; cell i is sampled at its left endpoint i/N.
class Grid {
public:
    explicit Grid(std::size_t n) : n_(n) {
        if (n < 2) throw domain_error("Grid: need at least 2 cells, got " + std::to_string(n));
    }

    std::size_t size() const noexcept { return n_; }
    double cell_width() const noexcept { return 1.0 / static_cast<double>(n_); }
    double point(std::size_t i) const noexcept {
        return static_cast<double>(i) / static_cast<double>(n_);
    }

    std::vector<double> points() const {
        std::vector<double> p(n_);
        for (std::size_t i = 0; i < n_; ++i) p[i] = point(i);
        return p;
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t n_;
};

inline Grid make_grid(std::size_t n) { return Grid(n); }

class Field {
public:
    explicit Field(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}

    Field(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.size())
            throw domain_error("Field: " + std::to_string(values_.size()) +
                               " values for a grid of " + std::to_string(grid_.size()));
        for (double v : values_)
            if (!std::isfinite(v)) throw domain_error("Field: non-finite value");
    }

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double& operator[](std::size_t i) noexcept { return values_[i]; }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    friend bool operator==(const Field&, const Field&) = default;

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Analytic or tabulated initial/frequency profile on [0,1].
struct Profile {
    enum class Kind { sine, cosine, constant, zero, table };

    Kind kind = Kind::zero;
    double value = 0.0;
    std::vector<double> table;

    static Profile sine() { return {Kind::sine, 0.0, {}}; }
    static Profile cosine() { return {Kind::cosine, 0.0, {}}; }
    static Profile zero() { return {Kind::zero, 0.0, {}}; }
    static Profile constant(double c) { return {Kind::constant, c, {}}; }
    static Profile tabulated(std::vector<double> values) {
        return {Kind::table, 0.0, std::move(values)};
    }

    bool is_constant() const noexcept { return kind == Kind::constant || kind == Kind::zero; }
};

inline Field sample_on_grid(const Profile& profile, const Grid& grid) {
    const std::size_t n = grid.size();
    std::vector<double> v(n);
    switch (profile.kind) {
        case Profile::Kind::sine:
            for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(grid.point(i));
            break;
        case Profile::Kind::cosine:
            for (std::size_t i = 0; i < n; ++i) v[i] = std::cos(grid.point(i));
            break;
        case Profile::Kind::constant:
            std::fill(v.begin(), v.end(), profile.value);
            break;
        case Profile::Kind::zero:
            break;
        case Profile::Kind::table:
            if (profile.table.size() != n)
                throw domain_error("sample_on_grid: table has " +
                                   std::to_string(profile.table.size()) + " values, grid has " +
                                   std::to_string(n));
            v = profile.table;
            break;
    }
    return Field(grid, std::move(v));
}

/// One decimal value per line; blank lines are skipped.
inline std::vector<double> load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open table file '" + path + "'");
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(line.substr(first), &used);
        } catch (const std::exception&) {
            throw domain_error(path + ":" + std::to_string(lineno) + ": not a number");
        }
        if (line.find_first_not_of(" \t\r", first + used) != std::string::npos)
            throw domain_error(path + ":" + std::to_string(lineno) + ": trailing characters");
        values.push_back(v);
    }
    return values;
}

// ---------------------------------------------------------------------------
// Kernel matrices

struct PointwiseCutoff {
    double eps = 1e-9;
};
struct ExactCellAverage {};
struct Mollifier {
    double eps = 0.1;
};

using KernelMode = std::variant<PointwiseCutoff, ExactCellAverage, Mollifier>;

namespace detail {

// n² · ∬_{I_i×I_k} |x−y|^{−β} for cells m = |i−k| apart. With p = 2−β and
// c = m/n the entry is n² c^p ((1+u)^p − 2 + (1−u)^p) / (p(p−1)), u = 1/m;
// far cells use the even binomial series of the bracket to avoid cancellation.
inline double cell_average_offset(std::size_t m, std::size_t n, double beta) {
    const double p = 2.0 - beta;
    const double norm = p * (p - 1.0);
    const double nn = static_cast<double>(n);
    if (m == 0) return nn * nn * 2.0 * std::pow(1.0 / nn, p) / norm;
    const double md = static_cast<double>(m);
    const double scale = nn * nn * std::pow(md / nn, p) / norm;
    if (m < 4) {
        const double bracket = std::pow(1.0 + 1.0 / md, p) - 2.0 + std::pow(1.0 - 1.0 / md, p);
        return scale * bracket;
    }
    const double u2 = 1.0 / (md * md);
    double coeff = 1.0;  // binom(p, k), advanced two orders per term
    double upow = 1.0;
    double sum = 0.0;
    for (int k = 2; k < 80; k += 2) {
        coeff *= (p - (k - 2)) / (k - 1) * (p - (k - 1)) / k;
        upow *= u2;
        const double term = coeff * upow;
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return scale * 2.0 * sum;
}

// ∫ exp(−1/(1−x²)) over (−1, 1).
inline double bump_mass() {
    static const double mass = [] {
        auto f = [](double x) {
            const double r = 1.0 - x * x;
            return r > 0.0 ? std::exp(-1.0 / r) : 0.0;
        };
        return 2.0 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                         f, 0.0, 1.0, 15, 1e-15);
    }();
    return mass;
}

}  // namespace detail

/// Exact cell average of |x−y|^{−β} over I_i × I_k.
inline double cell_average_entry(std::size_t i, std::size_t k, std::size_t n, double beta) {
    detail::require_exponent(beta, "beta");
    if (i >= n || k >= n) throw domain_error("cell_average_entry: index out of range");
    return detail::cell_average_offset(i > k ? i - k : k - i, n, beta);
}

/// Unit-mass bump η_ε(x) = η(x/ε)/ε supported on |x| < ε.
inline double mollifier_eta(double x, double eps) {
    if (!(eps > 0.0)) throw domain_error("mollifier_eta: eps must be positive");
    const double s = x / eps;
    const double r = 1.0 - s * s;
    if (r <= 0.0) return 0.0;
    return std::exp(-1.0 / r) / (detail::bump_mass() * eps);
}

class KernelMatrix {
public:
    KernelMatrix(Grid grid, double beta, KernelMode mode, std::vector<double> entries)
        : grid_(grid), beta_(beta), mode_(mode), entries_(std::move(entries)) {}

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return grid_.size(); }
    double beta() const noexcept { return beta_; }
    const KernelMode& mode() const noexcept { return mode_; }
    double quad_weight() const noexcept { return grid_.cell_width(); }

    double operator()(std::size_t i, std::size_t k) const noexcept {
        return entries_[i * grid_.size() + k];
    }
    std::span<const double> row(std::size_t i) const noexcept {
        return std::span<const double>(entries_).subspan(i * grid_.size(), grid_.size());
    }
    std::span<const double> entries() const noexcept { return entries_; }

private:
    Grid grid_;
    double beta_;
    KernelMode mode_;
    std::vector<double> entries_;  // row-major n×n
};

inline KernelMatrix build_kernel_matrix(const Grid& grid, double beta, const KernelMode& mode) {
    detail::require_exponent(beta, "beta");
    const std::size_t n = grid.size();
    const double nd = static_cast<double>(n);

    // Every mode depends only on the cell offset |i−k|, so tabulate once.
    std::vector<double> by_offset(n);
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, PointwiseCutoff>) {
                if (!(m.eps > 0.0)) throw domain_error("cutoff eps must be positive");
                for (std::size_t d = 0; d < n; ++d)
                    by_offset[d] = std::pow(std::max(static_cast<double>(d) / nd, m.eps), -beta);
            } else if constexpr (std::is_same_v<M, ExactCellAverage>) {
                for (std::size_t d = 0; d < n; ++d)
                    by_offset[d] = detail::cell_average_offset(d, n, beta);
            } else {
                if (!(m.eps > 0.0)) throw domain_error("mollifier eps must be positive");
                for (std::size_t d = 0; d < n; ++d)
                    by_offset[d] = mollifier_eta(static_cast<double>(d) / nd, m.eps);
            }
        },
        mode);

    std::vector<double> entries(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) entries[i * n + k] = by_offset[i > k ? i - k : k - i];
    return KernelMatrix(grid, beta, mode, std::move(entries));
}

// ---------------------------------------------------------------------------
// Functionals

enum class NormKind { l1, l2, mean, diam };

inline double norm(std::span<const double> v, NormKind kind) {
    if (v.empty()) throw domain_error("norm: empty field");
    const double inv = 1.0 / static_cast<double>(v.size());
    switch (kind) {
        case NormKind::l1: {
            double s = 0.0;
            for (double x : v) s += std::abs(x);
            return s * inv;
        }
        case NormKind::l2: {
            double s = 0.0;
            for (double x : v) s += x * x;
            return std::sqrt(s * inv);
        }
        case NormKind::mean: {
            double s = 0.0;
            for (double x : v) s += x;
            return s * inv;
        }
        case NormKind::diam: {
            const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
            return *hi - *lo;
        }
    }
    return 0.0;
}

inline double norm(const Field& f, NormKind kind) { return norm(f.values(), kind); }

/// Step-function refinement onto a grid whose size is a multiple of the source grid.
inline Field prolong(const Field& coarse, const Grid& fine) {
    const std::size_t nc = coarse.grid().size();
    const std::size_t nf = fine.size();
    if (nf % nc != 0)
        throw domain_error("prolong: " + std::to_string(nc) + " does not divide " +
                           std::to_string(nf));
    const std::size_t r = nf / nc;
    std::vector<double> v(nf);
    for (std::size_t i = 0; i < nf; ++i) v[i] = coarse[i / r];
    return Field(fine, std::move(v));
}

}  // namespace skm
