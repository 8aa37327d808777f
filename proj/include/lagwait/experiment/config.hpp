#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lagwait/equation.hpp"
#include "lagwait/init_profile.hpp"
#include "lagwait/integrator.hpp"

#include <json.hpp>

namespace lagwait::experiment {

enum class MeshKind { Graded, Equidistant };

std::string to_string(MeshKind kind);
MeshKind parse_mesh_kind(const std::string& name);

/// One simulation scenario. Read from a flat JSON object; every key is
/// optional and falls back to the default below.
///
///   name, output_dir
///   equation ("pme" | "tf"), m, alpha, boundary_convention, non_equidistant, thin_film_flux
///   profile ("cos_power" | "csv"), q, profile_csv
///   K, mesh ("graded" | "equidistant"), t_end, snapshot_times
///   method, rel_tol, abs_tol, dt_init, dt_min, dt_max, max_steps
///   tol_budget, bound_M, waiting_threshold, trajectory_stride
///   sweep_q, convergence_K, convergence_K_ref
///
/// boundary_convention defaults to "standard" for the porous medium equation
/// and "uniform_ghost" for the thin-film equation; non_equidistant defaults
/// to true for thin film on a graded mesh. dt_max defaults to t_end / 1000 and
/// waiting_threshold to the left edge of the initial support.
struct ScenarioConfig {
    std::string name = "scenario";
    std::filesystem::path output_dir = "out";

    EquationKind equation = EquationKind::PorousMedium;
    double m = 2.0;
    double alpha = 1.0 / 64.0;
    std::optional<BoundaryConvention> boundary_convention;
    std::optional<bool> non_equidistant;
    ThinFilmFlux thin_film_flux = ThinFilmFlux::Auto;

    std::string profile = "cos_power";
    double q = 2.5;
    std::filesystem::path profile_csv;

    int K = 50;
    MeshKind mesh = MeshKind::Graded;
    double t_end = 2e-2;
    std::vector<double> snapshot_times;

    IntegratorConfig integrator;
    /// Unset means t_end / 1000.
    std::optional<double> dt_max;

    double tol_budget = 1e-4;
    double bound_M = 1.0;
    std::optional<double> waiting_threshold;
    int trajectory_stride = 1;

    std::vector<double> sweep_q;
    std::vector<int> convergence_K;
    int convergence_K_ref = 400;

    /// Throws config-error on an inconsistent scenario.
    void validate() const;

    EquationSpec equation_spec() const;
    InitialProfile initial_profile() const;
    /// Integrator settings with dt_max resolved.
    IntegratorConfig integrator_config() const;
    /// Sorted snapshot times with t_end appended if missing.
    std::vector<double> schedule() const;
};

/// Unknown keys are rejected so that typos do not silently fall back to defaults.
ScenarioConfig config_from_json(const nlohmann::json& json);
ScenarioConfig load_config(const std::filesystem::path& path);
/// Every key with its resolved value.
nlohmann::json to_json(const ScenarioConfig& config);

/// Multiplies rel_tol and abs_tol.
void scale_tolerances(ScenarioConfig& config, double factor);

}  // namespace lagwait::experiment
