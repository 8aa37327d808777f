#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lagwait/error.hpp"
#include "lagwait/experiment/config.hpp"
#include "lagwait/experiment/runner.hpp"
#include "lagwait/verification.hpp"

using namespace lagwait;
using namespace lagwait::experiment;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::InvalidArgument;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "lagwait_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int line_count(const fs::path& path) {
    const std::string text = slurp(path);
    return static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

ScenarioConfig small_pme() {
    return config_from_json(nlohmann::json{{"name", "small"}, {"K", 12}, {"q", 2.5}, {"t_end", 2e-3},
                                           {"snapshot_times", {0.0, 1e-3}}});
}

int run_cli(const std::string& args) {
    const std::string command = std::string(LAGWAIT_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config defaults") {
    const ScenarioConfig c = config_from_json(nlohmann::json::object());
    CHECK(c.K == 50);
    CHECK(c.q == 2.5);
    CHECK(c.mesh == MeshKind::Graded);
    const EquationSpec pme = c.equation_spec();
    CHECK(pme.is_pme());
    CHECK(pme.m() == 2.0);
    CHECK(pme.convention == BoundaryConvention::Standard);
    CHECK(c.integrator_config().dt_max == Approx(c.t_end / 1000.0));
    CHECK(c.schedule() == std::vector<double>{c.t_end});

    const ScenarioConfig tf = config_from_json(nlohmann::json{{"equation", "tf"}});
    CHECK(tf.equation_spec().convention == BoundaryConvention::UniformGhost);
    CHECK(tf.equation_spec().non_equidistant);
    const ScenarioConfig tf_eq = config_from_json(nlohmann::json{{"equation", "tf"}, {"mesh", "equidistant"}});
    CHECK_FALSE(tf_eq.equation_spec().non_equidistant);
    const ScenarioConfig pinned = config_from_json(nlohmann::json{{"dt_max", 1e-7}, {"rel_tol", 1e-6}});
    CHECK(pinned.integrator_config().dt_max == 1e-7);
    CHECK(pinned.integrator_config().rel_tol == 1e-6);
}

TEST_CASE("config errors") {
    CHECK(kind_of([] { config_from_json(nlohmann::json{{"Kk", 10}}); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { config_from_json(nlohmann::json{{"K", "ten"}}); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { config_from_json(nlohmann::json{{"equation", "heat"}}); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { config_from_json(nlohmann::json{{"mesh", "random"}}); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { config_from_json(nlohmann::json::array()); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { config_from_json(nlohmann::json{{"K", 1}}); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { config_from_json(nlohmann::json{{"t_end", -1.0}}); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { load_config("/nonexistent/config.json"); }) == ErrorKind::IoError);
    ScenarioConfig c;
    CHECK(kind_of([&] { scale_tolerances(c, 0.0); }) == ErrorKind::ConfigError);
}

TEST_CASE("config round trip and tolerance scaling") {
    ScenarioConfig c = small_pme();
    const nlohmann::json j = to_json(c);
    CHECK(to_json(config_from_json(j)) == j);
    scale_tolerances(c, 10.0);
    CHECK(c.integrator_config().rel_tol == Approx(1e-7));
    CHECK(c.integrator_config().abs_tol == Approx(1e-11));

    const ScenarioConfig s = config_from_json(nlohmann::json{{"t_end", 3e-3}, {"snapshot_times", {1e-3, 2e-3}}});
    CHECK(s.schedule() == std::vector<double>{1e-3, 2e-3, 3e-3});
    CHECK(kind_of([] { config_from_json(nlohmann::json{{"snapshot_times", {2e-3, 1e-3}}}); }) ==
          ErrorKind::ConfigError);
}

TEST_CASE("a zero horizon gives one snapshot") {
    const fs::path dir = scratch("zero_horizon");
    const ScenarioConfig c = config_from_json(nlohmann::json{{"K", 8}, {"t_end", 0.0}});
    CHECK(c.schedule() == std::vector<double>{0.0});
    const RunResult r = run_scenario(c, dir);
    CHECK(r.ok());
    CHECK(r.trajectory.samples.size() == 1);
    CHECK(line_count(dir / "snapshots.csv") == 1 + 8);
}

TEST_CASE("a scenario run writes its artifacts") {
    const fs::path dir = scratch("scenario");
    const RunResult r = run_scenario(small_pme(), dir);
    CHECK(r.ok());
    CHECK(r.budget_ok());
    for (const char* file : {"trajectory.csv", "snapshots.csv", "diagnostics.csv", "budget.csv", "bounds.csv",
                             "density.svg", "trajectories.svg", "manifest.json"}) {
        INFO(file);
        CHECK(fs::file_size(dir / file) > 0);
    }
    CHECK(line_count(dir / "snapshots.csv") == 1 + 3 * 12);
    CHECK(slurp(dir / "trajectory.csv").rfind("t,", 0) == 0);

    const nlohmann::json manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["kind"] == "simulate");
    CHECK(manifest["csv_schema"]["version"] == kCsvSchemaVersion);
    CHECK(manifest["config"]["K"] == 12);
    const auto& conventions = manifest["conventions"];
    CHECK(conventions["equation"] == "pme");
    CHECK(conventions["boundary_convention"] == "standard");
    CHECK(conventions.contains("budget_interpretation"));
    CHECK(conventions["budget_literal_form_gated"] == false);
    CHECK(manifest["results"]["status"] == "ok");

    const fs::path again = scratch("scenario_again");
    run_scenario(small_pme(), again);
    for (const char* file : {"trajectory.csv", "snapshots.csv", "diagnostics.csv", "budget.csv", "bounds.csv"}) {
        INFO(file);
        CHECK(slurp(dir / file) == slurp(again / file));
    }
}

TEST_CASE("thin-film scenario conventions") {
    const fs::path dir = scratch("tf");
    const ScenarioConfig c = config_from_json(
        nlohmann::json{{"equation", "tf"}, {"K", 12}, {"q", 3.5}, {"t_end", 1e-5}});
    const RunResult r = run_scenario(c, dir);
    CHECK(r.ok());
    const nlohmann::json manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["conventions"]["boundary_convention"] == "uniform_ghost");
    CHECK(manifest["conventions"]["non_equidistant_thin_film"] == true);
    CHECK(manifest["conventions"]["step_method"] == "rosenbrock");
    CHECK(manifest["conventions"]["alpha_diagnostic_only"] == true);
}

TEST_CASE("single-row sweep and single-K convergence") {
    ScenarioConfig base = config_from_json(nlohmann::json{{"K", 40}, {"t_end", 0.05}});
    const SweepResult sweep = sweep_waiting_time(base, {2.0});
    REQUIRE(sweep.rows.size() == 1);
    CHECK_FALSE(sweep.rows[0].failed);
    CHECK(sweep.rows[0].t_est > 0.0);
    CHECK(sweep.monotone);
    CHECK(sweep.decreases == 0);
    const fs::path dir = scratch("sweep");
    write_sweep(sweep, base, dir);
    CHECK(line_count(dir / "sweep.csv") == 2);
    CHECK(fs::exists(dir / "sweep.svg"));

    const ConvergenceResult study = convergence_study(base, 2.0, {20}, 80);
    CHECK(study.reference_ok);
    REQUIRE(study.rows.size() == 1);
    CHECK_FALSE(study.slope_defined);
    CHECK(study.rows[0].error == Approx(std::fabs(study.rows[0].t_est - study.t_ref)));
    const fs::path cdir = scratch("converge");
    write_convergence(study, base, cdir);
    CHECK(line_count(cdir / "convergence.csv") == 2);
}

TEST_CASE("sweeps are independent of the thread count") {
    ScenarioConfig base = config_from_json(nlohmann::json{{"K", 30}, {"t_end", 0.05}});
    const SweepResult one = sweep_waiting_time(base, {1.5, 2.0, 2.5}, 1);
    const SweepResult three = sweep_waiting_time(base, {1.5, 2.0, 2.5}, 3);
    REQUIRE(one.rows.size() == three.rows.size());
    for (std::size_t i = 0; i < one.rows.size(); ++i) CHECK(one.rows[i].t_est == three.rows[i].t_est);
    CHECK(one.monotone);
}

TEST_CASE("verification suites pass on small samples") {
    for (const SuiteReport& r : {identity_suite(100), inequality_suite(2000), consistency_suite(100)}) {
        INFO(r.suite);
        CHECK(r.passed());
        CHECK(r.failures() == 0);
        CHECK(r.cases() > 0);
    }
}

TEST_CASE("command-line exit codes") {
    const fs::path dir = scratch("cli");
    {
        std::ofstream(dir / "good.json") << R"({"name": "cli", "K": 10, "t_end": 1e-3})";
        std::ofstream(dir / "typo.json") << R"({"name": "cli", "Kay": 10})";
        std::ofstream(dir / "broken.json") << R"({"name": )";
    }
    const std::string out = " --out " + (dir / "out").string();
    CHECK(run_cli("simulate --config " + (dir / "good.json").string() + out) == 0);
    CHECK(fs::exists(dir / "out" / "manifest.json"));
    CHECK(run_cli("simulate --strict --config " + (dir / "good.json").string() + out) == 0);
    CHECK(run_cli("simulate --config " + (dir / "typo.json").string() + out) == 2);
    CHECK(run_cli("simulate --config " + (dir / "broken.json").string() + out) == 2);
    CHECK(run_cli("simulate --config " + (dir / "missing.json").string()) == 2);
    CHECK(run_cli("simulate") == 2);
    CHECK(run_cli("sweep --config " + (dir / "good.json").string() + out) == 2);
    CHECK(run_cli("verify --cases 20 --samples 500") == 0);
    CHECK(run_cli("--help") == 0);
}
