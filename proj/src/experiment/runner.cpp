#include "lagwait/experiment/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "lagwait/dynamics.hpp"
#include "lagwait/experiment/svg.hpp"
#include "lagwait/functionals.hpp"

namespace lagwait::experiment {

namespace {

using nlohmann::json;

std::string num(double v) { return fmt::format("{:.17g}", v == 0.0 ? 0.0 : v); }

// Finite numbers as JSON numbers, the rest as strings ("inf", "nan").
json number(double v) {
    if (std::isfinite(v)) return v;
    return fmt::format("{}", v);
}

class CsvFile {
public:
    explicit CsvFile(const std::filesystem::path& path) : path_(path), out_(path) {
        if (!out_) fail(ErrorKind::IoError, "cannot write " + path.string());
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }
    void close() {
        out_.close();
        if (!out_) fail(ErrorKind::IoError, "failed writing " + path_.string());
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

void write_json(const std::filesystem::path& path, const json& value) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::IoError, "cannot write " + path.string());
    out << value.dump(2) << '\n';
    if (!out) fail(ErrorKind::IoError, "failed writing " + path.string());
}

void make_directory(const std::filesystem::path& directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) fail(ErrorKind::IoError, "cannot create " + directory.string() + ": " + ec.message());
}

// Runs body(i) for i in [0, n) on up to `threads` workers.
template <class Body>
void parallel_for(std::size_t n, int threads, Body body) {
    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

Trajectory initial_only(const ScenarioSetup& setup) {
    const GridFunction z = densities(setup.initial, setup.mesh);
    const FunctionalProfile profile = functional_profile(z, setup.mesh, setup.equation);
    Trajectory t;
    t.samples.push_back({setup.initial, profile.H.back(), profile.D.back(), true});
    t.t_end = setup.initial.t;
    return t;
}

json conventions(const RunResult& r) {
    const EquationSpec& eq = r.setup.equation;
    json c;
    c["equation"] = lagwait::to_string(eq.kind);
    c["boundary_convention"] = lagwait::to_string(eq.convention);
    c["mesh"] = to_string(r.config.mesh);
    c["mesh_ratio"] = r.setup.mesh.ratio();
    c["step_method"] = lagwait::to_string(r.config.integrator_config().resolved_method(eq));
    if (!eq.is_pme()) {
        c["thin_film_flux"] = lagwait::to_string(eq.resolved_flux(r.setup.mesh));
        c["non_equidistant_thin_film"] = eq.non_equidistant && !r.setup.mesh.is_equidistant();
        c["alpha_diagnostic_only"] = true;
    }
    c["waiting_time_event"] = "first time x_1 < waiting_threshold";
    c["waiting_threshold"] = r.setup.waiting_threshold;
    c["budget_interpretation"] =
        "sup over t* of H(t*) + c int_0^t* D minus the time-dependent right side, against the constant right side";
    c["budget_literal_form_gated"] = false;
    c["time_quadrature"] = "trapezoid over every accepted step";
    c["dt_max_default"] = "t_end / 1000";
    c["bound_M_reported_only"] = !eq.is_pme();
    c["steepness_divergence"] = "heuristic: log-ratio growth over the three finest decades";
    return c;
}

json csv_schema() {
    return {
        {"version", kCsvSchemaVersion},
        {"trajectory.csv", "t,x_0,...,x_K"},
        {"snapshots.csv", "t,cell,x_left,x_right,z"},
        {"diagnostics.csv", "t,H_I,D_I,int_D_I,budget_lhs,edge_excursion"},
        {"budget.csv",
         "budget,block,lhs,rhs,slack,margin,time_of_max,literal_lhs,satisfied,literal_satisfied,"
         "weight_slope_min,weight_slope_max,weight_slope_bound,weight_ok,weight_premise"},
        {"bounds.csv", "bound,applicable,b_bar,b_bar_divergent,b_initial,delta,M,first_violation,"
                       "peak_ratio_before_violation,states_before_violation"},
    };
}

json results(const RunResult& r) {
    json j;
    j["status"] = r.ok() ? "ok" : "failed";
    if (r.failure) {
        j["error_kind"] = std::string(lagwait::to_string(*r.failure));
        j["error"] = r.failure_message;
    }
    j["accepted_steps"] = r.trajectory.accepted_steps;
    j["rejected_steps"] = r.trajectory.rejected_steps;
    j["t_final"] = r.trajectory.final().t;
    j["waiting_time"] = {{"t_est", r.waiting.t_est},
                         {"censored", r.waiting.censored},
                         {"localized", r.waiting.localized},
                         {"threshold", r.waiting.threshold},
                         {"edge_excursion", r.waiting.edge_excursion}};
    j["first_cell_width"] = r.trajectory.initial().x.at(1) - r.trajectory.initial().x.at(0);
    j["b_initial"] = r.b_initial;
    if (r.steepness) {
        j["b_bar"] = number(r.steepness->value);
        j["b_bar_divergent"] = r.steepness->divergent;
    }
    if (r.budget) {
        j["budget_satisfied"] = r.budget->satisfied();
        j["budget_constant"] = r.budget->constant;
        j["global_budget_margin"] = r.budget->global.margin();
        j["literal_budget_satisfied"] = r.budget->global.literal_satisfied;
    }
    if (r.bound) {
        j["edge_bound"] = {{"name", r.bound->name},
                           {"applicable", r.bound->applicable},
                           {"first_violation", number(r.bound->first_violation)},
                           {"peak_ratio_before_violation", r.bound->peak_ratio_before_violation}};
    }
    j["seconds"] = r.seconds;
    return j;
}

void write_trajectory(const RunResult& r, const std::filesystem::path& directory) {
    CsvFile csv(directory / "trajectory.csv");
    std::vector<std::string> header{"t"};
    for (int k = 0; k <= r.setup.mesh.cells(); ++k) header.push_back(fmt::format("x_{}", k));
    csv.row(header);
    const auto& samples = r.trajectory.samples;
    for (std::size_t n = 0; n < samples.size(); ++n) {
        const bool keep = samples[n].scheduled || n % static_cast<std::size_t>(r.config.trajectory_stride) == 0 ||
                          n + 1 == samples.size();
        if (!keep) continue;
        std::vector<std::string> row{num(samples[n].state.t)};
        for (double x : samples[n].state.x) row.push_back(num(x));
        csv.row(row);
    }
    csv.close();
}

std::vector<const TrajectorySample*> snapshot_samples(const RunResult& r) {
    std::vector<const TrajectorySample*> out;
    for (const auto& s : r.trajectory.samples) {
        if (s.scheduled) out.push_back(&s);
    }
    if (out.empty() || (!r.ok() && out.back() != &r.trajectory.samples.back())) {
        out.push_back(&r.trajectory.samples.back());
    }
    return out;
}

void write_snapshots(const RunResult& r, const std::filesystem::path& directory) {
    CsvFile csv(directory / "snapshots.csv");
    csv.row({"t", "cell", "x_left", "x_right", "z"});
    for (const TrajectorySample* s : snapshot_samples(r)) {
        const GridFunction z = densities(s->state, r.setup.mesh);
        for (int j = 0; j < z.size(); ++j) {
            csv.row({num(s->state.t), std::to_string(j), num(s->state.x[j]), num(s->state.x[j + 1]), num(z[j])});
        }
    }
    csv.close();
}

void write_diagnostics(const RunResult& r, const std::filesystem::path& directory) {
    CsvFile csv(directory / "diagnostics.csv");
    csv.row({"t", "H_I", "D_I", "int_D_I", "budget_lhs", "edge_excursion"});
    const auto excursions = edge_excursions(r.trajectory);
    const auto& samples = r.trajectory.samples;
    for (std::size_t n = 0; n < samples.size(); ++n) {
        const std::string integral = r.budget ? num(r.budget->dissipation_integral[n]) : "nan";
        const std::string lhs = r.budget ? num(r.budget->running_lhs[n]) : "nan";
        csv.row({num(samples[n].state.t), num(samples[n].entropy), num(samples[n].dissipation), integral, lhs,
                 num(excursions[n])});
    }
    csv.close();
}

void write_budget(const RunResult& r, const std::filesystem::path& directory) {
    CsvFile csv(directory / "budget.csv");
    csv.row({"budget", "block", "lhs", "rhs", "slack", "margin", "time_of_max", "literal_lhs", "satisfied",
             "literal_satisfied", "weight_slope_min", "weight_slope_max", "weight_slope_bound", "weight_ok",
             "weight_premise"});
    if (r.budget) {
        auto check_cells = [](const BudgetCheck& c) {
            return std::vector<std::string>{num(c.lhs),         num(c.rhs),         num(c.slack),
                                            num(c.margin()),    num(c.time_of_max), num(c.literal_lhs),
                                            c.satisfied ? "1" : "0", c.literal_satisfied ? "1" : "0"};
        };
        std::vector<std::string> row{"global", std::to_string(r.budget->weighted.size() + 1)};
        for (auto& cell : check_cells(r.budget->global)) row.push_back(cell);
        for (const char* blank : {"nan", "nan", "nan", "1", "1"}) row.push_back(blank);
        csv.row(row);
        for (const auto& w : r.budget->weighted) {
            row = {"weighted", std::to_string(w.block)};
            for (auto& cell : check_cells(w.check)) row.push_back(cell);
            row.push_back(num(w.weight_slope_min));
            row.push_back(num(w.weight_slope_max));
            row.push_back(num(w.weight_slope_bound));
            row.push_back(w.weight_ok ? "1" : "0");
            row.push_back(w.weight_premise ? "1" : "0");
            csv.row(row);
        }
    }
    csv.close();
}

void write_bounds(const RunResult& r, const std::filesystem::path& directory) {
    CsvFile csv(directory / "bounds.csv");
    csv.row({"bound", "applicable", "b_bar", "b_bar_divergent", "b_initial", "delta", "M", "first_violation",
             "peak_ratio_before_violation", "states_before_violation"});
    if (r.bound && r.steepness) {
        const EdgeBoundReport& b = *r.bound;
        csv.row({b.name, b.applicable ? "1" : "0", num(b.b_bar), r.steepness->divergent ? "1" : "0", num(r.b_initial),
                 num(b.delta), num(b.M), num(b.first_violation), num(b.peak_ratio_before_violation),
                 std::to_string(b.states_before_violation)});
    }
    csv.close();
}

void write_plots(const RunResult& r, const std::filesystem::path& directory) {
    const std::string equation = r.setup.equation.is_pme() ? "porous medium" : "thin film";
    const std::string title = fmt::format("{}, q = {:g}, K = {}", equation, r.config.q, r.setup.mesh.cells());

    std::vector<Series> density;
    const auto snapshots = snapshot_samples(r);
    const int count = static_cast<int>(snapshots.size());
    for (int i = 0; i < count; ++i) {
        const LagrangianState& state = snapshots[static_cast<std::size_t>(i)]->state;
        const GridFunction z = densities(state, r.setup.mesh);
        Series s;
        s.color = ramp_color(i, count);
        s.label = fmt::format("t = {:.3g}", state.t);
        s.x.push_back(state.x.front());
        s.y.push_back(0.0);
        for (int j = 0; j < z.size(); ++j) {
            s.x.insert(s.x.end(), {state.x[j], state.x[j + 1]});
            s.y.insert(s.y.end(), {z[j], z[j]});
        }
        s.x.push_back(state.x.back());
        s.y.push_back(0.0);
        density.push_back(std::move(s));
    }
    write_svg(directory / "density.svg", PlotSpec{title, "x", "density", false, false}, density);

    // At most about 1000 points per path.
    const auto& samples = r.trajectory.samples;
    const std::size_t stride = samples.size() / 1000 + 1;
    std::vector<std::size_t> plotted;
    for (std::size_t n = 0; n < samples.size(); ++n) {
        if (n % stride == 0 || samples[n].scheduled || n + 1 == samples.size()) plotted.push_back(n);
    }
    std::vector<Series> paths;
    const int cells = r.setup.mesh.cells();
    const int every = std::max(1, cells / 50);
    for (int k = 0; k <= cells; ++k) {
        if (k % every != 0 && k != cells) continue;
        Series s;
        s.color = (k == 0 || k == cells) ? "#d62728" : "#1f77b4";
        s.width = (k == 0 || k == cells) ? 1.6 : 0.8;
        for (std::size_t n : plotted) {
            s.x.push_back(samples[n].state.x[static_cast<std::size_t>(k)]);
            s.y.push_back(samples[n].state.t);
        }
        paths.push_back(std::move(s));
    }
    write_svg(directory / "trajectories.svg", PlotSpec{title, "x", "t", false, false}, paths);
}

SweepRow sweep_row(const ScenarioConfig& base, double q) {
    SweepRow row;
    row.q = q;
    try {
        ScenarioConfig config = base;
        config.q = q;
        config.profile = "cos_power";
        const RunResult r = simulate(config, RunOptions{false, true});
        row.t_est = r.waiting.t_est;
        row.censored = r.waiting.censored;
        row.localized = r.waiting.localized;
        row.edge_excursion = r.waiting.edge_excursion;
        row.seconds = r.seconds;
        if (r.failure) {
            row.failed = true;
            row.error = r.failure_message;
        }
    } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
    }
    return row;
}

}  // namespace

bool is_numeric(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::OrderingViolation:
        case ErrorKind::NumericFailure:
        case ErrorKind::StiffnessFailure:
        case ErrorKind::DomainError:
            return true;
        default:
            return false;
    }
}

ScenarioSetup prepare(const ScenarioConfig& config) {
    config.validate();
    EquationSpec equation = config.equation_spec();
    InitialProfile profile = config.initial_profile();
    std::vector<double> positions;
    std::optional<MassMesh> mesh;
    if (config.mesh == MeshKind::Graded) {
        GradedMesh graded = graded_mesh_from_profile(profile, config.K);
        mesh.emplace(std::move(graded.mesh));
        positions = std::move(graded.positions);
    } else {
        mesh.emplace(MassMesh::equidistant(config.K));
        positions = consistent_positions(profile, *mesh);
    }
    const double threshold = config.waiting_threshold.value_or(profile.left());
    return ScenarioSetup{equation, std::move(profile), std::move(*mesh), LagrangianState{0.0, std::move(positions)},
                         threshold};
}

RunResult simulate(const ScenarioConfig& config, const RunOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    ScenarioSetup setup = prepare(config);
    IntegratorConfig integrator = config.integrator_config();
    integrator.store_every_step = options.audit;

    RunResult r{config, std::move(setup), Trajectory{}, {}, {}, {}, {}, 0.0, {}, {}, 0.0};
    const ScenarioSetup& s = r.setup;
    const std::vector<EventFunction> events{left_package_exit_event(s.waiting_threshold, options.stop_at_waiting_time)};
    try {
        r.trajectory = integrate(s.initial, s.mesh, s.equation, integrator, config.schedule(), events);
    } catch (const IntegrationFailure& e) {
        r.failure = e.kind();
        r.failure_message = e.what();
        r.trajectory = e.partial() && !e.partial()->samples.empty() ? *e.partial() : initial_only(s);
    } catch (const Error& e) {
        if (!is_numeric(e.kind())) throw;
        r.failure = e.kind();
        r.failure_message = e.what();
        r.trajectory = initial_only(s);
    }

    r.waiting = waiting_time_estimate(r.trajectory, s.waiting_threshold);
    if (options.audit) {
        const GridFunction z0 = densities(s.initial, s.mesh);
        r.b_initial = initial_entropy_ratio(z0, s.mesh, s.equation);
        r.steepness = steepness_ratio(s.profile, s.equation);
        r.budget = dissipation_budget(r.trajectory, s.mesh, s.equation, config.tol_budget);
        r.bound = edge_bound_curve(r.trajectory, r.steepness->value, s.mesh, s.equation, config.bound_M);
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

RunResult run_scenario(const ScenarioConfig& config, const std::filesystem::path& directory) {
    RunResult r = simulate(config);
    make_directory(directory);
    write_trajectory(r, directory);
    write_snapshots(r, directory);
    write_diagnostics(r, directory);
    write_budget(r, directory);
    write_bounds(r, directory);
    write_plots(r, directory);
    json manifest;
    manifest["kind"] = "simulate";
    manifest["csv_schema"] = csv_schema();
    manifest["config"] = to_json(config);
    manifest["conventions"] = conventions(r);
    manifest["results"] = results(r);
    write_json(directory / "manifest.json", manifest);
    return r;
}

SweepResult sweep_waiting_time(const ScenarioConfig& base, const std::vector<double>& q_list, int threads) {
    SweepResult sweep;
    sweep.rows.resize(q_list.size());
    parallel_for(q_list.size(), threads, [&](std::size_t i) { sweep.rows[i] = sweep_row(base, q_list[i]); });
    const SweepRow* previous = nullptr;
    for (const auto& row : sweep.rows) {
        if (row.failed) sweep.failures += 1;
        if (row.failed || row.censored) continue;
        if (previous && previous->q < row.q && row.t_est < previous->t_est) sweep.decreases += 1;
        previous = &row;
    }
    sweep.monotone = sweep.decreases == 0;
    return sweep;
}

void write_sweep(const SweepResult& sweep, const ScenarioConfig& base, const std::filesystem::path& directory) {
    make_directory(directory);
    CsvFile csv(directory / "sweep.csv");
    csv.row({"q", "T_est", "censored", "localized", "edge_excursion", "failed", "error"});
    Series curve;
    curve.markers = true;
    curve.label = "T_est";
    for (const auto& row : sweep.rows) {
        std::string error = row.error;
        std::replace(error.begin(), error.end(), ',', ';');
        std::replace(error.begin(), error.end(), '\n', ' ');
        csv.row({num(row.q), num(row.t_est), row.censored ? "1" : "0", row.localized ? "1" : "0",
                 num(row.edge_excursion), row.failed ? "1" : "0", error});
        if (!row.failed) {
            curve.x.push_back(row.q);
            curve.y.push_back(row.t_est);
        }
    }
    csv.close();
    write_svg(directory / "sweep.svg",
              PlotSpec{fmt::format("estimated waiting time, K = {}", base.K), "q", "T", false, false}, {curve});

    json rows = json::array();
    for (const auto& row : sweep.rows) {
        rows.push_back({{"q", row.q},
                        {"T_est", row.t_est},
                        {"censored", row.censored},
                        {"failed", row.failed},
                        {"error", row.error},
                        {"seconds", row.seconds}});
    }
    json manifest;
    manifest["kind"] = "sweep";
    manifest["csv_schema"] = {{"version", kCsvSchemaVersion},
                              {"sweep.csv", "q,T_est,censored,localized,edge_excursion,failed,error"}};
    manifest["config"] = to_json(base);
    manifest["results"] = {{"monotone", sweep.monotone},
                           {"decreases", sweep.decreases},
                           {"failures", sweep.failures},
                           {"rows", rows}};
    write_json(directory / "manifest.json", manifest);
}

ConvergenceResult convergence_study(const ScenarioConfig& base, double q, const std::vector<int>& K_list, int K_ref,
                                    int threads) {
    require(!K_list.empty(), ErrorKind::ConfigError, "convergence study needs at least one K");
    require(K_ref > *std::max_element(K_list.begin(), K_list.end()), ErrorKind::ConfigError,
            "reference K must exceed every K in the list");
    std::vector<int> all = K_list;
    all.push_back(K_ref);
    std::vector<SweepRow> runs(all.size());
    parallel_for(all.size(), threads, [&](std::size_t i) {
        ScenarioConfig config = base;
        config.K = all[i];
        runs[i] = sweep_row(config, q);
    });

    ConvergenceResult study;
    study.q = q;
    study.K_ref = K_ref;
    const SweepRow& ref = runs.back();
    study.t_ref = ref.t_est;
    study.reference_ok = !ref.failed && !ref.censored;
    if (!study.reference_ok) {
        study.notes.push_back(ref.failed ? "reference run failed: " + ref.error : "reference run censored at t_end");
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int used = 0;
    for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
        ConvergenceRow row;
        row.K = all[i];
        row.t_est = runs[i].t_est;
        row.censored = runs[i].censored;
        row.failed = runs[i].failed;
        row.error = std::abs(row.t_est - study.t_ref);
        row.relative_error = study.t_ref != 0.0 ? row.error / std::abs(study.t_ref) : 0.0;
        if (row.failed) {
            row.note = "run failed";
        } else if (row.censored) {
            row.note = "censored at t_end";
        } else if (row.error == 0.0) {
            row.note = "e_K = 0 excluded from fit";
        } else if (study.reference_ok) {
            row.included = true;
            const double lx = std::log(static_cast<double>(row.K)), ly = std::log(row.error);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            used += 1;
        }
        if (!row.note.empty()) study.notes.push_back(fmt::format("K = {}: {}", row.K, row.note));
        study.rows.push_back(row);
    }
    const double denominator = used * sxx - sx * sx;
    if (used >= 2 && denominator > 0.0) {
        study.slope = (used * sxy - sx * sy) / denominator;
        study.slope_defined = true;
    } else {
        study.notes.push_back("slope undefined: fewer than two usable points");
    }
    return study;
}

void write_convergence(const ConvergenceResult& study, const ScenarioConfig& base,
                       const std::filesystem::path& directory) {
    make_directory(directory);
    CsvFile csv(directory / "convergence.csv");
    csv.row({"K", "T_K", "e_K", "relative_error", "included", "note"});
    Series errors;
    errors.markers = true;
    errors.label = "e_K";
    for (const auto& row : study.rows) {
        csv.row({std::to_string(row.K), num(row.t_est), num(row.error), num(row.relative_error),
                 row.included ? "1" : "0", row.note});
        if (row.included) {
            errors.x.push_back(row.K);
            errors.y.push_back(row.error);
        }
    }
    csv.close();

    std::vector<Series> series{errors};
    if (!errors.x.empty()) {
        // Slope -2 through the geometric centre of the points.
        double lx = 0, ly = 0;
        for (std::size_t i = 0; i < errors.x.size(); ++i) {
            lx += std::log(errors.x[i]);
            ly += std::log(errors.y[i]);
        }
        lx /= errors.x.size();
        ly /= errors.x.size();
        Series reference;
        reference.color = "#7f7f7f";
        reference.dashed = true;
        reference.label = "slope -2";
        for (double k : {errors.x.front(), errors.x.back()}) {
            reference.x.push_back(k);
            reference.y.push_back(std::exp(ly - 2.0 * (std::log(k) - lx)));
        }
        series.push_back(reference);
    }
    write_svg(directory / "convergence.svg",
              PlotSpec{fmt::format("waiting-time error, q = {:g}, reference K = {}", study.q, study.K_ref), "K",
                       "|T_K - T_ref|", true, true},
              series);

    json manifest;
    manifest["kind"] = "converge";
    manifest["csv_schema"] = {{"version", kCsvSchemaVersion},
                              {"convergence.csv", "K,T_K,e_K,relative_error,included,note"}};
    manifest["config"] = to_json(base);
    manifest["results"] = {{"q", study.q},
                           {"K_ref", study.K_ref},
                           {"T_ref", study.t_ref},
                           {"reference_ok", study.reference_ok},
                           {"slope", study.slope_defined ? json(study.slope) : json(nullptr)},
                           {"slope_defined", study.slope_defined},
                           {"notes", study.notes}};
    write_json(directory / "manifest.json", manifest);
}

}  // namespace lagwait::experiment
