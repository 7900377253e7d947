// skmlab: command-line front end for the singular Kuramoto laboratory.
//
//   skmlab <command> [--config <path>] [--out <path>]
//
// Commands: simulate, sweep, converge, mollify, bounds, verify.

#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "skm/config.hpp"
#include "skm/csv.hpp"
#include "skm/errors.hpp"
#include "skm/experiments.hpp"
#include "skm/verify.hpp"

namespace {

enum Exit { ok = 0, config_failure = 1, numerical_failure = 2, verify_failure = 3 };

class Clock {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + out + " for writing");
    f << text;
    if (!f) throw std::runtime_error("write to " + out + " failed");
}

void log_line(const std::string& s) { std::cerr << s << '\n'; }

std::string describe_run(const skm::Scenario& s) {
    return "n=" + std::to_string(s.n) + " alpha=" + skm::format_double(s.alpha) +
           " beta=" + skm::format_double(s.beta) + " kappa=" + skm::format_double(s.kappa) +
           " t_end=" + skm::format_double(s.t_end);
}

int run_command(const std::string& command, const skm::Config& cfg, const std::string& out,
                const std::string& report) {
    Clock clock;
    if (command == "simulate") {
        const auto r = skm::run_scenario(cfg.run);
        emit(skm::trace_csv(r.trace, r.descriptor), out);
        if (!report.empty()) emit(skm::to_key_value(r.report), report);
        log_line("simulate " + describe_run(cfg.run) +
                 " steps=" + std::to_string(r.trace.records.size() - 1) +
                 " final_diameter=" + skm::format_double(r.trace.records.back().diameter) +
                 (r.trace.flags.diameter_ge_pi ? " warning=diameter_reached_pi" : "") +
                 " seconds=" + skm::format_double(clock.seconds()));
    } else if (command == "sweep") {
        skm::SweepSpec spec{cfg.run, cfg.sweep_axis, cfg.sweep_values, cfg.sample_times};
        const auto r = skm::run_sweep(spec);
        emit(skm::sweep_csv(r), out);
        log_line("sweep axis=" + skm::axis_name(cfg.sweep_axis) +
                 " runs=" + std::to_string(cfg.sweep_values.size()) +
                 " seconds=" + skm::format_double(clock.seconds()));
    } else if (command == "converge") {
        const auto r = skm::convergence_study(cfg.run, cfg.n_list, cfg.n_ref, cfg.run.t_end,
                                              cfg.run.output_times);
        emit(skm::convergence_csv(r), out);
        log_line("converge n_ref=" + std::to_string(cfg.n_ref) +
                 " rows=" + std::to_string(r.rows.size()) +
                 " seconds=" + skm::format_double(clock.seconds()));
    } else if (command == "mollify") {
        const auto r = skm::mollifier_experiment(cfg.eps_list, cfg.run);
        emit(skm::mollifier_csv(r), out);
        log_line("mollify runs=" + std::to_string(cfg.eps_list.size()) +
                 " seconds=" + skm::format_double(clock.seconds()));
    } else if (command == "bounds") {
        emit(skm::bounds_summary(cfg.run), out);
    } else if (command == "verify") {
        const auto results = skm::verify::run_all();
        std::string text;
        for (const auto& r : results)
            text += std::string(r.passed ? "PASS " : "FAIL ") + r.name + ": " + r.detail + '\n';
        emit(text, out);
        if (!skm::verify::all_passed(results)) return verify_failure;
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for the singular Kuramoto model"};
    std::string command;
    std::string config_path;
    std::string out;
    std::string report;
    app.add_option("command", command, "simulate | sweep | converge | mollify | bounds | verify")
        ->required()
        ->check(CLI::IsMember({"simulate", "sweep", "converge", "mollify", "bounds", "verify"}));
    app.add_option("--config", config_path, "key = value config file (defaults when omitted)");
    app.add_option("--out", out, "output file (stdout when omitted)");
    app.add_option("--report", report, "simulate: also write the bound report here");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_failure;
    }

    skm::Config cfg;
    try {
        cfg = config_path.empty() ? skm::parse_config("") : skm::load_config(config_path);
    } catch (const skm::config_error& e) {
        std::cerr << (config_path.empty() ? "" : config_path + ": ") << e.what() << '\n';
        return config_failure;
    }

    try {
        return run_command(command, cfg, out, report);
    } catch (const skm::unrecoverable_stiffness& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return numerical_failure;
    } catch (const skm::picard_not_converged& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return numerical_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return config_failure;
    }
}
