#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lagwait/error.hpp"
#include "lagwait/experiment/config.hpp"
#include "lagwait/experiment/runner.hpp"
#include "lagwait/verification.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitBudget = 4;

using lagwait::experiment::ScenarioConfig;

struct Options {
    std::string config;
    std::string out;
    int threads = 1;
    double tol_scale = 1.0;
    bool strict = false;
    int identity_cases = 1000;
    long inequality_samples = 100000;
    int consistency_cases = 1000;
};

ScenarioConfig load(const Options& o) {
    ScenarioConfig config = lagwait::experiment::load_config(o.config);
    if (o.tol_scale != 1.0) lagwait::experiment::scale_tolerances(config, o.tol_scale);
    return config;
}

std::filesystem::path output_directory(const Options& o, const ScenarioConfig& config) {
    return o.out.empty() ? config.output_dir / config.name : std::filesystem::path(o.out);
}

int run_simulate(const Options& o) {
    const ScenarioConfig config = load(o);
    const auto directory = output_directory(o, config);
    const auto r = lagwait::experiment::run_scenario(config, directory);
    fmt::print("{}: {} accepted / {} rejected steps in {:.2f} s\n", config.name, r.trajectory.accepted_steps,
               r.trajectory.rejected_steps, r.seconds);
    fmt::print("waiting time {:.6e}{}, edge excursion {:.3e}\n", r.waiting.t_est,
               r.waiting.censored ? " (censored)" : "", r.waiting.edge_excursion);
    if (r.budget) {
        fmt::print("global budget: lhs {:.10e} rhs {:.10e} margin {:.3e} -> {}\n", r.budget->global.lhs,
                   r.budget->global.rhs, r.budget->global.margin(), r.budget->satisfied() ? "ok" : "VIOLATED");
    }
    if (r.bound && r.bound->applicable) {
        fmt::print("edge bound ({}): first violation {:.6e}\n", r.bound->name, r.bound->first_violation);
    }
    fmt::print("artifacts in {}\n", directory.string());
    if (!r.ok()) {
        fmt::print(stderr, "integration failed: {}\n", r.failure_message);
        return kExitNumeric;
    }
    if (o.strict && !r.budget_ok()) return kExitBudget;
    return kExitOk;
}

int run_sweep(const Options& o) {
    const ScenarioConfig config = load(o);
    if (config.sweep_q.empty()) lagwait::fail(lagwait::ErrorKind::ConfigError, "sweep needs sweep_q");
    const auto sweep = lagwait::experiment::sweep_waiting_time(config, config.sweep_q, o.threads);
    const auto directory = output_directory(o, config);
    lagwait::experiment::write_sweep(sweep, config, directory);
    for (const auto& row : sweep.rows) {
        if (row.failed) {
            fmt::print("q = {:<6g} failed: {}\n", row.q, row.error);
        } else {
            fmt::print("q = {:<6g} T = {:.6e}{}\n", row.q, row.t_est, row.censored ? " (censored)" : "");
        }
    }
    fmt::print("monotone in q: {} ({} decreases); artifacts in {}\n", sweep.monotone ? "yes" : "no", sweep.decreases,
               directory.string());
    return sweep.failures > 0 ? kExitNumeric : kExitOk;
}

int run_converge(const Options& o) {
    const ScenarioConfig config = load(o);
    if (config.convergence_K.empty()) lagwait::fail(lagwait::ErrorKind::ConfigError, "converge needs convergence_K");
    const auto study = lagwait::experiment::convergence_study(config, config.q, config.convergence_K,
                                                              config.convergence_K_ref, o.threads);
    const auto directory = output_directory(o, config);
    lagwait::experiment::write_convergence(study, config, directory);
    fmt::print("reference K = {}: T = {:.10e}\n", study.K_ref, study.t_ref);
    for (const auto& row : study.rows) {
        fmt::print("K = {:<4} T = {:.10e} e = {:.3e} ({:.2f}%){}\n", row.K, row.t_est, row.error,
                   100.0 * row.relative_error, row.note.empty() ? "" : " " + row.note);
    }
    if (study.slope_defined) {
        fmt::print("fitted slope {:.3f}\n", study.slope);
    } else {
        fmt::print("fitted slope undefined\n");
    }
    fmt::print("artifacts in {}\n", directory.string());
    return study.reference_ok ? kExitOk : kExitNumeric;
}

int run_verify(const Options& o) {
    const double tolerance = 1e-12 * o.tol_scale;
    bool passed = true;
    for (const auto& report : {lagwait::identity_suite(o.identity_cases, tolerance),
                               lagwait::inequality_suite(o.inequality_samples, tolerance),
                               lagwait::consistency_suite(o.consistency_cases, tolerance)}) {
        fmt::print("{} ({:.2f} s, tolerance {:.1e})\n", report.suite, report.seconds, report.tolerance);
        for (const auto& c : report.checks) {
            fmt::print("  {:<22} cases {:>7}  failures {:>3}  worst {: .3e}\n", c.name, c.cases, c.failures, c.worst);
        }
        passed = passed && report.passed();
    }
    return passed ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lagrangian waiting-time experiments for the porous medium and thin-film equations"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "scenario JSON file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory (default output_dir/name)");
        sub->add_option("--tol-scale", o.tol_scale, "multiply rel_tol and abs_tol")->check(CLI::PositiveNumber);
    };
    auto* simulate = app.add_subcommand("simulate", "run one scenario and write its artifacts");
    add_common(simulate);
    simulate->add_flag("--strict", o.strict, "exit with 4 when a budget is violated");
    auto* sweep = app.add_subcommand("sweep", "waiting time over sweep_q");
    add_common(sweep);
    sweep->add_option("--threads", o.threads, "parallel runs")->check(CLI::PositiveNumber);
    auto* converge = app.add_subcommand("converge", "waiting-time error over convergence_K");
    add_common(converge);
    converge->add_option("--threads", o.threads, "parallel runs")->check(CLI::PositiveNumber);
    auto* verify = app.add_subcommand("verify", "randomized identity, inequality and consistency checks");
    verify->add_option("--tol-scale", o.tol_scale, "multiply the 1e-12 tolerance")->check(CLI::PositiveNumber);
    verify->add_option("--cases", o.identity_cases, "identity cases");
    verify->add_option("--samples", o.inequality_samples, "inequality samples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*simulate) return run_simulate(o);
        if (*sweep) return run_sweep(o);
        if (*converge) return run_converge(o);
        return run_verify(o);
    } catch (const lagwait::Error& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return lagwait::experiment::is_numeric(e.kind()) ? kExitNumeric : kExitConfig;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitConfig;
    }
}
