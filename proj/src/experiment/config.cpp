#include "lagwait/experiment/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "lagwait/error.hpp"

namespace lagwait::experiment {

namespace {

const std::set<std::string> kKnownKeys = {
    "name",      "output_dir",     "equation",      "m",
    "alpha",     "boundary_convention", "non_equidistant", "thin_film_flux",
    "profile",   "q",              "profile_csv",   "K",
    "mesh",      "t_end",          "snapshot_times", "method",
    "rel_tol",   "abs_tol",        "dt_init",       "dt_min",
    "dt_max",    "max_steps",      "tol_budget",    "bound_M",
    "waiting_threshold", "trajectory_stride", "sweep_q", "convergence_K",
    "convergence_K_ref",
};

template <class T>
void read(const nlohmann::json& json, const char* key, T& out) {
    if (!json.contains(key)) return;
    try {
        out = json.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::ConfigError, std::string("key '") + key + "': " + e.what());
    }
}

template <class T>
void read(const nlohmann::json& json, const char* key, std::optional<T>& out) {
    if (!json.contains(key) || json.at(key).is_null()) return;
    T value{};
    read(json, key, value);
    out = value;
}

EquationKind parse_equation(const std::string& name) {
    if (name == "pme" || name == "porous_medium") return EquationKind::PorousMedium;
    if (name == "tf" || name == "thin_film") return EquationKind::ThinFilm;
    fail(ErrorKind::ConfigError, "unknown equation '" + name + "'");
}

}  // namespace

std::string to_string(MeshKind kind) { return kind == MeshKind::Graded ? "graded" : "equidistant"; }

MeshKind parse_mesh_kind(const std::string& name) {
    if (name == "graded") return MeshKind::Graded;
    if (name == "equidistant") return MeshKind::Equidistant;
    fail(ErrorKind::ConfigError, "unknown mesh '" + name + "'");
}

void ScenarioConfig::validate() const {
    auto check = [](bool ok, const std::string& message) { require(ok, ErrorKind::ConfigError, message); };
    check(!name.empty(), "name must not be empty");
    check(K >= 2, "K must be at least 2");
    check(std::isfinite(t_end) && t_end >= 0.0, "t_end must be finite and nonnegative");
    check(profile == "cos_power" || profile == "csv", "profile must be 'cos_power' or 'csv'");
    if (profile == "cos_power") check(q > 0.0, "q must be positive");
    if (profile == "csv") check(!profile_csv.empty(), "profile 'csv' needs profile_csv");
    check(std::is_sorted(snapshot_times.begin(), snapshot_times.end()), "snapshot_times must be sorted");
    for (double t : snapshot_times) check(t >= 0.0 && t <= t_end, "snapshot_times must lie in [0, t_end]");
    check(tol_budget >= 0.0, "tol_budget must be nonnegative");
    check(bound_M > 0.0, "bound_M must be positive");
    check(trajectory_stride >= 1, "trajectory_stride must be at least 1");
    for (double v : sweep_q) check(v > 0.0, "sweep_q entries must be positive");
    for (int k : convergence_K) check(k >= 2, "convergence_K entries must be at least 2");
    if (!convergence_K.empty()) {
        check(convergence_K_ref > *std::max_element(convergence_K.begin(), convergence_K.end()),
              "convergence_K_ref must exceed every convergence_K");
    }
    try {
        equation_spec().validate();
        integrator_config().validate();
    } catch (const Error& e) {
        fail(ErrorKind::ConfigError, e.what());
    }
}

EquationSpec ScenarioConfig::equation_spec() const {
    EquationSpec spec;
    spec.kind = equation;
    if (equation == EquationKind::PorousMedium) {
        spec.exponent = m;
        spec.convention = boundary_convention.value_or(BoundaryConvention::Standard);
    } else {
        spec.exponent = alpha;
        spec.convention = boundary_convention.value_or(BoundaryConvention::UniformGhost);
        spec.non_equidistant = non_equidistant.value_or(mesh == MeshKind::Graded);
        spec.flux = thin_film_flux;
    }
    return spec;
}

InitialProfile ScenarioConfig::initial_profile() const {
    if (profile == "csv") return InitialProfile::from_csv(profile_csv);
    return InitialProfile::cos_power(q);
}

IntegratorConfig ScenarioConfig::integrator_config() const {
    IntegratorConfig out = integrator;
    out.dt_max = dt_max.value_or(std::max(t_end / 1000.0, out.dt_min));
    return out;
}

std::vector<double> ScenarioConfig::schedule() const {
    std::vector<double> times = snapshot_times;
    if (times.empty() || times.back() < t_end) times.push_back(t_end);
    times.erase(std::unique(times.begin(), times.end()), times.end());
    return times;
}

ScenarioConfig config_from_json(const nlohmann::json& json) {
    if (!json.is_object()) fail(ErrorKind::ConfigError, "scenario config must be a JSON object");
    for (const auto& item : json.items()) {
        if (!kKnownKeys.count(item.key())) fail(ErrorKind::ConfigError, "unknown key '" + item.key() + "'");
    }
    ScenarioConfig c;
    read(json, "name", c.name);
    std::string text;
    read(json, "output_dir", text);
    if (!text.empty()) c.output_dir = text;

    text.clear();
    read(json, "equation", text);
    if (!text.empty()) c.equation = parse_equation(text);
    read(json, "m", c.m);
    read(json, "alpha", c.alpha);
    text.clear();
    read(json, "boundary_convention", text);
    if (!text.empty()) c.boundary_convention = parse_boundary_convention(text);
    read(json, "non_equidistant", c.non_equidistant);
    text.clear();
    read(json, "thin_film_flux", text);
    if (!text.empty()) c.thin_film_flux = parse_thin_film_flux(text);

    read(json, "profile", c.profile);
    read(json, "q", c.q);
    text.clear();
    read(json, "profile_csv", text);
    if (!text.empty()) c.profile_csv = text;

    read(json, "K", c.K);
    text.clear();
    read(json, "mesh", text);
    if (!text.empty()) c.mesh = parse_mesh_kind(text);
    read(json, "t_end", c.t_end);
    read(json, "snapshot_times", c.snapshot_times);

    text.clear();
    read(json, "method", text);
    if (!text.empty()) c.integrator.method = parse_step_method(text);
    read(json, "rel_tol", c.integrator.rel_tol);
    read(json, "abs_tol", c.integrator.abs_tol);
    read(json, "dt_init", c.integrator.dt_init);
    read(json, "dt_min", c.integrator.dt_min);
    read(json, "dt_max", c.dt_max);
    read(json, "max_steps", c.integrator.max_steps);

    read(json, "tol_budget", c.tol_budget);
    read(json, "bound_M", c.bound_M);
    read(json, "waiting_threshold", c.waiting_threshold);
    read(json, "trajectory_stride", c.trajectory_stride);
    read(json, "sweep_q", c.sweep_q);
    read(json, "convergence_K", c.convergence_K);
    read(json, "convergence_K_ref", c.convergence_K_ref);
    c.validate();
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoError, "cannot open config " + path.string());
    nlohmann::json json;
    try {
        in >> json;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::ConfigError, path.string() + ": " + e.what());
    }
    ScenarioConfig config = config_from_json(json);
    if (config.profile == "csv" && config.profile_csv.is_relative()) {
        config.profile_csv = path.parent_path() / config.profile_csv;
    }
    return config;
}

nlohmann::json to_json(const ScenarioConfig& c) {
    const EquationSpec spec = c.equation_spec();
    const IntegratorConfig integrator = c.integrator_config();
    nlohmann::json j;
    j["name"] = c.name;
    j["output_dir"] = c.output_dir.string();
    j["equation"] = spec.is_pme() ? "pme" : "tf";
    j["m"] = c.m;
    j["alpha"] = c.alpha;
    j["boundary_convention"] = lagwait::to_string(spec.convention);
    j["non_equidistant"] = spec.non_equidistant;
    j["thin_film_flux"] = lagwait::to_string(c.thin_film_flux);
    j["profile"] = c.profile;
    j["q"] = c.q;
    j["profile_csv"] = c.profile_csv.string();
    j["K"] = c.K;
    j["mesh"] = to_string(c.mesh);
    j["t_end"] = c.t_end;
    j["snapshot_times"] = c.snapshot_times;
    j["method"] = lagwait::to_string(integrator.method);
    j["rel_tol"] = integrator.rel_tol;
    j["abs_tol"] = integrator.abs_tol;
    j["dt_init"] = integrator.dt_init;
    j["dt_min"] = integrator.dt_min;
    j["dt_max"] = integrator.dt_max;
    j["max_steps"] = integrator.max_steps;
    j["tol_budget"] = c.tol_budget;
    j["bound_M"] = c.bound_M;
    j["waiting_threshold"] = c.waiting_threshold ? nlohmann::json(*c.waiting_threshold) : nlohmann::json(nullptr);
    j["trajectory_stride"] = c.trajectory_stride;
    j["sweep_q"] = c.sweep_q;
    j["convergence_K"] = c.convergence_K;
    j["convergence_K_ref"] = c.convergence_K_ref;
    return j;
}

void scale_tolerances(ScenarioConfig& config, double factor) {
    require(factor > 0.0 && std::isfinite(factor), ErrorKind::ConfigError, "tolerance scale must be positive");
    config.integrator.rel_tol *= factor;
    config.integrator.abs_tol *= factor;
}

}  // namespace lagwait::experiment
