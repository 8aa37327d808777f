#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lagwait/diagnostics.hpp"
#include "lagwait/experiment/config.hpp"
#include "lagwait/init_profile.hpp"
#include "lagwait/integrator.hpp"

namespace lagwait::experiment {

/// Version tag of the CSV column layouts, echoed in every manifest.
inline constexpr const char* kCsvSchemaVersion = "1";

/// Mesh, initial positions and equation built from a scenario.
struct ScenarioSetup {
    EquationSpec equation;
    InitialProfile profile;
    MassMesh mesh;
    LagrangianState initial;
    /// a in the event x_1 < a.
    double waiting_threshold = 0.0;
};

ScenarioSetup prepare(const ScenarioConfig& config);

struct RunOptions {
    /// Store every accepted step and audit budgets and bounds.
    bool audit = true;
    /// Stop at the waiting-time event.
    bool stop_at_waiting_time = false;
};

/// Everything one simulation produced. Numeric failures do not throw out of
/// simulate(): the trajectory then holds what was integrated before the
/// failure and `failure` names the kind.
struct RunResult {
    ScenarioConfig config;
    ScenarioSetup setup;
    Trajectory trajectory;
    WaitingTimeReport waiting;
    std::optional<BudgetReport> budget;
    std::optional<SteepnessRatio> steepness;
    std::optional<EdgeBoundReport> bound;
    double b_initial = 0.0;
    std::optional<ErrorKind> failure;
    std::string failure_message;
    double seconds = 0.0;

    bool ok() const noexcept { return !failure.has_value(); }
    /// True when no audit ran or every gated budget held.
    bool budget_ok() const noexcept { return !budget || budget->satisfied(); }
};

/// True for the error kinds raised by a failing integration (as opposed to a
/// bad configuration or I/O).
bool is_numeric(ErrorKind kind) noexcept;

/// Throws config-error for an invalid scenario.
RunResult simulate(const ScenarioConfig& config, const RunOptions& options = {});

/// Runs the scenario and writes into `directory`: trajectory.csv,
/// snapshots.csv, diagnostics.csv, budget.csv, bounds.csv, density.svg,
/// trajectories.svg and manifest.json. Files are written even when the
/// integration failed part-way.
RunResult run_scenario(const ScenarioConfig& config, const std::filesystem::path& directory);

struct SweepRow {
    double q = 0.0;
    double t_est = 0.0;
    bool censored = false;
    bool localized = false;
    double edge_excursion = 0.0;
    bool failed = false;
    std::string error;
    double seconds = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    /// T_est nondecreasing in q over the rows that neither failed nor were censored.
    bool monotone = true;
    int decreases = 0;
    int failures = 0;
};

/// Waiting time for each q, the runs spread over `threads` workers. Each run
/// stops at its waiting-time event; a failing run is recorded and the sweep
/// goes on.
SweepResult sweep_waiting_time(const ScenarioConfig& base, const std::vector<double>& q_list, int threads = 1);
/// sweep.csv (q, T_est, censored, localized, edge_excursion, failed, error), sweep.svg, manifest.json.
void write_sweep(const SweepResult& sweep, const ScenarioConfig& base, const std::filesystem::path& directory);

struct ConvergenceRow {
    int K = 0;
    double t_est = 0.0;
    double error = 0.0;           // |T_K - T_ref|
    double relative_error = 0.0;  // error / T_ref
    bool censored = false;
    bool failed = false;
    bool included = false;  // used in the slope fit
    std::string note;
};

struct ConvergenceResult {
    double q = 0.0;
    int K_ref = 0;
    double t_ref = 0.0;
    bool reference_ok = false;
    std::vector<ConvergenceRow> rows;
    /// Least-squares slope of log e_K against log K.
    double slope = 0.0;
    bool slope_defined = false;
    std::vector<std::string> notes;
};

/// Errors e_K = |T_K - T_{K_ref}| at fixed q. Rows with e_K = 0, a censored
/// or failed run are left out of the fit with a note; fewer than two usable
/// rows leave the slope undefined.
ConvergenceResult convergence_study(const ScenarioConfig& base, double q, const std::vector<int>& K_list, int K_ref,
                                    int threads = 1);
/// convergence.csv (K, T_K, e_K, relative_error, included, note), convergence.svg, manifest.json.
void write_convergence(const ConvergenceResult& study, const ScenarioConfig& base,
                       const std::filesystem::path& directory);

}  // namespace lagwait::experiment
