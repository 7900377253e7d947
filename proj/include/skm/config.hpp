#pragma once

// Flat `key = value` configuration for the command-line tool.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "skm/experiments.hpp"
#include "skm/format.hpp"

namespace skm {

class config_error : public std::runtime_error {
public:
    enum class Kind { syntax, unknown_key, type, range };

    config_error(Kind kind, std::size_t line, const std::string& msg)
        : std::runtime_error(describe(kind, line, msg)), kind_(kind), line_(line) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }

private:
    static std::string describe(Kind kind, std::size_t line, const std::string& msg) {
        static constexpr const char* names[] = {"SyntaxError", "UnknownKey", "TypeError",
                                                "RangeError"};
        std::string out = line > 0 ? "line " + std::to_string(line) + ": " : std::string{};
        return out + names[static_cast<int>(kind)] + ": " + msg;
    }

    Kind kind_;
    std::size_t line_;
};

struct Config {
    std::string scenario = "homogeneous";
    Scenario run;
    std::string kernel_mode = "cutoff";
    double cutoff_eps = 1e-9;
    double mollifier_eps = 0.1;
    bool seedless = true;

    SweepAxis sweep_axis = SweepAxis::kappa;
    std::vector<double> sweep_values{0.5, 1.0, 1.5, 2.0};
    std::vector<double> sample_times{1.0, 2.0, 4.0};

    std::vector<std::size_t> n_list{16, 32, 64, 128, 256};
    std::size_t n_ref = 1024;

    std::vector<double> eps_list{0.2, 0.1, 0.05};
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

struct Entry {
    std::string value;
    std::size_t line;
};

class ConfigReader {
public:
    ConfigReader(std::map<std::string, Entry> entries, std::filesystem::path base)
        : entries_(std::move(entries)), base_(std::move(base)) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    std::size_t line(const std::string& key) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    void real(const std::string& key, double& out) const {
        if (const Entry* e = find(key)) out = to_real(key, *e, e->value);
    }

    void count(const std::string& key, std::size_t& out) const {
        if (const Entry* e = find(key)) out = to_count(key, *e, e->value);
    }

    void boolean(const std::string& key, bool& out) const {
        if (const Entry* e = find(key)) {
            if (e->value == "true")
                out = true;
            else if (e->value == "false")
                out = false;
            else
                throw config_error(config_error::Kind::type, e->line,
                                   key + " expects true or false, got '" + e->value + "'");
        }
    }

    void text(const std::string& key, std::string& out) const {
        if (const Entry* e = find(key)) out = e->value;
    }

    void reals(const std::string& key, std::vector<double>& out) const {
        if (const Entry* e = find(key)) {
            out.clear();
            for (const auto& item : split(*e)) out.push_back(to_real(key, *e, item));
        }
    }

    void counts(const std::string& key, std::vector<std::size_t>& out) const {
        if (const Entry* e = find(key)) {
            out.clear();
            for (const auto& item : split(*e)) out.push_back(to_count(key, *e, item));
        }
    }

    void profile(const std::string& key, Profile& out) const {
        const Entry* e = find(key);
        if (!e) return;
        const std::string& v = e->value;
        if (v == "sin") {
            out = Profile::sine();
        } else if (v == "cos") {
            out = Profile::cosine();
        } else if (v == "zero") {
            out = Profile::zero();
        } else if (v.rfind("constant:", 0) == 0) {
            out = Profile::constant(to_real(key, *e, v.substr(9)));
        } else if (v.rfind("table:", 0) == 0) {
            std::filesystem::path p = v.substr(6);
            if (p.is_relative()) p = base_ / p;
            try {
                out = Profile::tabulated(load_table(p.string()));
            } catch (const std::exception& ex) {
                throw config_error(config_error::Kind::type, e->line, key + ": " + ex.what());
            }
        } else {
            throw config_error(config_error::Kind::type, e->line,
                               key + " expects sin, cos, zero, constant:<c> or table:<path>, "
                                     "got '" + v + "'");
        }
    }

    [[noreturn]] void range(const std::string& key, const std::string& msg) const {
        throw config_error(config_error::Kind::range, line(key), key + " " + msg);
    }

private:
    const Entry* find(const std::string& key) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? nullptr : &it->second;
    }

    static std::vector<std::string> split(const Entry& e) {
        std::vector<std::string> items;
        std::stringstream ss(e.value);
        std::string item;
        while (std::getline(ss, item, ',')) items.push_back(trim(item));
        if (items.empty()) items.push_back({});
        return items;
    }

    static double to_real(const std::string& key, const Entry& e, const std::string& s) {
        try {
            return parse_double(s);
        } catch (const std::invalid_argument&) {
            throw config_error(config_error::Kind::type, e.line,
                               key + " expects a number, got '" + s + "'");
        }
    }

    static std::size_t to_count(const std::string& key, const Entry& e, const std::string& s) {
        std::size_t v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty())
            throw config_error(config_error::Kind::type, e.line,
                               key + " expects a nonnegative integer, got '" + s + "'");
        return v;
    }

    std::map<std::string, Entry> entries_;
    std::filesystem::path base_;
};

inline const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys{
        "scenario",     "n",           "alpha",          "beta",
        "kappa",        "t_end",       "theta_init",     "nu",
        "kernel_mode",  "cutoff_eps",  "mollifier_eps",  "phase_delta",
        "practical_eps", "picard_omega", "picard_tol",   "picard_max_iter",
        "err_target",   "safety",      "dt_init",        "dt_min",
        "dt_max",       "growth_cap",  "output_times",   "snapshot_every",
        "seedless",     "sweep_axis",  "sweep_values",   "sample_times",
        "n_list",       "n_ref",       "eps_list"};
    return keys;
}

inline bool strictly_ascending(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) return false;
    return true;
}

}  // namespace detail

/// Parses a config document. Relative table paths resolve against base_dir.
inline Config parse_config(std::string_view text, const std::filesystem::path& base_dir = {}) {
    using Kind = config_error::Kind;
    std::map<std::string, detail::Entry> entries;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string line = detail::trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(Kind::syntax, line_no, "expected 'key = value', got '" + line + "'");
        const std::string key = detail::trim(std::string_view(line).substr(0, eq));
        const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
        const auto& keys = detail::known_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw config_error(Kind::unknown_key, line_no, "'" + key + "'");
        if (value.empty()) throw config_error(Kind::type, line_no, key + " has no value");
        if (entries.count(key))
            throw config_error(Kind::syntax, line_no,
                               key + " already set on line " + std::to_string(entries[key].line));
        entries[key] = {value, line_no};
    }
    const detail::ConfigReader r(std::move(entries), base_dir);

    Config c;
    Scenario& s = c.run;
    r.text("scenario", c.scenario);
    if (c.scenario == "homogeneous") {
        s.theta_init = Profile::sine();
        s.nu = Profile::zero();
    } else if (c.scenario == "heterogeneous") {
        s.theta_init = Profile::sine();
        s.nu = Profile::cosine();
    } else {
        r.range("scenario", "must be homogeneous or heterogeneous");
    }

    r.count("n", s.n);
    if (s.n < 2) r.range("n", "must be at least 2");
    r.real("alpha", s.alpha);
    if (!(s.alpha >= 0.0 && s.alpha < 1.0)) r.range("alpha", "must lie in [0, 1)");
    r.real("beta", s.beta);
    if (!(s.beta >= 0.0 && s.beta < 1.0)) r.range("beta", "must lie in [0, 1)");
    r.real("kappa", s.kappa);
    if (!(s.kappa >= 0.0 && std::isfinite(s.kappa))) r.range("kappa", "must be nonnegative");
    r.real("t_end", s.t_end);
    if (!(s.t_end > 0.0 && std::isfinite(s.t_end))) r.range("t_end", "must be positive");
    r.profile("theta_init", s.theta_init);
    r.profile("nu", s.nu);

    r.text("kernel_mode", c.kernel_mode);
    r.real("cutoff_eps", c.cutoff_eps);
    if (!(c.cutoff_eps > 0.0)) r.range("cutoff_eps", "must be positive");
    r.real("mollifier_eps", c.mollifier_eps);
    if (!(c.mollifier_eps > 0.0)) r.range("mollifier_eps", "must be positive");
    if (c.kernel_mode == "cutoff")
        s.kernel = PointwiseCutoff{c.cutoff_eps};
    else if (c.kernel_mode == "cell-average")
        s.kernel = ExactCellAverage{};
    else if (c.kernel_mode == "mollifier")
        s.kernel = Mollifier{c.mollifier_eps};
    else
        r.range("kernel_mode", "must be cutoff, cell-average or mollifier");

    r.real("phase_delta", s.phase_delta);
    if (!(s.phase_delta > 0.0)) r.range("phase_delta", "must be positive");
    r.real("practical_eps", s.practical_eps);
    if (!(s.practical_eps > 0.0 && s.practical_eps < 1.0))
        r.range("practical_eps", "must lie in (0, 1)");

    StepperParams& p = s.stepper;
    r.real("picard_omega", p.omega);
    if (!(p.omega > 0.0 && p.omega <= 1.0)) r.range("picard_omega", "must lie in (0, 1]");
    r.real("picard_tol", p.picard_tol);
    if (!(p.picard_tol > 0.0)) r.range("picard_tol", "must be positive");
    r.count("picard_max_iter", p.picard_max_iter);
    if (p.picard_max_iter == 0) r.range("picard_max_iter", "must be positive");
    r.real("err_target", p.err_target);
    if (!(p.err_target > 0.0)) r.range("err_target", "must be positive");
    r.real("safety", p.safety);
    if (!(p.safety > 0.0 && p.safety <= 1.0)) r.range("safety", "must lie in (0, 1]");
    r.real("dt_init", p.dt_init);
    r.real("dt_min", p.dt_min);
    r.real("dt_max", p.dt_max);
    if (!(p.dt_min > 0.0)) r.range("dt_min", "must be positive");
    if (!(p.dt_min <= p.dt_init && p.dt_init <= p.dt_max))
        r.range(r.has("dt_init") ? "dt_init" : r.has("dt_max") ? "dt_max" : "dt_min",
                "violates dt_min <= dt_init <= dt_max");
    r.real("growth_cap", p.growth_cap);
    if (!(p.growth_cap > 1.0)) r.range("growth_cap", "must exceed 1");

    r.reals("output_times", s.output_times);
    if (!detail::strictly_ascending(s.output_times))
        r.range("output_times", "must be strictly increasing");
    for (double t : s.output_times)
        if (!(t >= 0.0 && t <= s.t_end)) r.range("output_times", "must lie within [0, t_end]");
    r.count("snapshot_every", s.snapshot_every);
    r.boolean("seedless", c.seedless);
    if (!c.seedless) r.range("seedless", "must be true (every run is deterministic)");

    std::string axis;
    r.text("sweep_axis", axis);
    if (axis == "alpha")
        c.sweep_axis = SweepAxis::alpha;
    else if (axis == "beta")
        c.sweep_axis = SweepAxis::beta;
    else if (axis == "kappa" || axis.empty())
        c.sweep_axis = SweepAxis::kappa;
    else
        r.range("sweep_axis", "must be alpha, beta or kappa");
    r.reals("sweep_values", c.sweep_values);
    if (c.sweep_values.empty() || !detail::strictly_ascending(c.sweep_values))
        r.range("sweep_values", "must be nonempty and strictly increasing");
    for (double v : c.sweep_values) {
        const bool ok = c.sweep_axis == SweepAxis::kappa ? v >= 0.0 : (v >= 0.0 && v < 1.0);
        if (!ok) r.range("sweep_values", "out of range for the sweep axis");
    }
    r.reals("sample_times", c.sample_times);
    for (double t : c.sample_times)
        if (!(t >= 0.0)) r.range("sample_times", "must be nonnegative");

    r.counts("n_list", c.n_list);
    r.count("n_ref", c.n_ref);
    if (c.n_ref < 2) r.range("n_ref", "must be at least 2");
    for (std::size_t n : c.n_list)
        if (n < 2 || c.n_ref % n != 0) r.range("n_list", "entries must be >= 2 and divide n_ref");

    r.reals("eps_list", c.eps_list);
    for (std::size_t i = 0; i < c.eps_list.size(); ++i) {
        if (!(c.eps_list[i] > 0.0 && c.eps_list[i] <= 0.25))
            r.range("eps_list", "entries must lie in (0, 0.25]");
        if (i > 0 && !(c.eps_list[i] < c.eps_list[i - 1]))
            r.range("eps_list", "must be strictly decreasing");
    }
    return c;
}

inline Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error(config_error::Kind::syntax, 0, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path());
}

}  // namespace skm
