#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "lagwait/error.hpp"
#include "lagwait/init_profile.hpp"
#include "support.hpp"

using namespace lagwait;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// C_q from the Beta function: int cos^q(pi x) over |x| < 1/2 = Gamma(1/2) Gamma((q+1)/2) / (pi Gamma(q/2 + 1)).
double normalizer_oracle(double q) {
    return kPi * std::tgamma(q / 2.0 + 1.0) / (std::sqrt(kPi) * std::tgamma((q + 1.0) / 2.0));
}

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("cos^q normalizers") {
    CHECK(InitialProfile::cos_power(1.0).normalizer() == Approx(kPi / 2.0).epsilon(1e-12));
    CHECK(InitialProfile::cos_power(2.0).normalizer() == Approx(2.0).epsilon(1e-12));
    for (double q : {0.5, 1.5, 2.2, 3.0, 4.5, 7.0}) {
        const InitialProfile p = InitialProfile::cos_power(q);
        CHECK(p.normalizer() == Approx(normalizer_oracle(q)).epsilon(1e-10));
        CHECK(p.density(-0.5) == 0.0);
        CHECK(p.density(0.5) == Approx(0.0).scale(1e-12));
        CHECK(p.density(0.0) == Approx(p.normalizer()));
        CHECK(p.density(0.7) == 0.0);
        CHECK(p.cumulative_mass(0.5) == Approx(1.0).epsilon(1e-10));
    }
    CHECK(kind_of([] { InitialProfile::cos_power(0.0); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { InitialProfile::cos_power(-1.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("cumulative mass") {
    const InitialProfile p = InitialProfile::cos_power(1.0);
    CHECK(p.cumulative_mass(0.0) == Approx(0.5).epsilon(1e-12));
    CHECK(p.cumulative_mass(-0.6) == 0.0);
    CHECK(p.cumulative_mass(0.6) == 1.0);
    for (double x : {-0.49, -0.3, -0.1, 0.05, 0.25, 0.4999}) {
        CHECK(p.cumulative_mass(x) == Approx((1.0 + std::sin(kPi * x)) / 2.0).epsilon(1e-11));
    }
    const InitialProfile p3 = InitialProfile::cos_power(3.0);
    double previous = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double m = p3.cumulative_mass(-0.5 + i / 100.0);
        CHECK(m >= previous);
        previous = m;
    }
}

TEST_CASE("consistent positions") {
    const InitialProfile p = InitialProfile::cos_power(2.5);
    const auto x2 = consistent_positions(p, MassMesh::equidistant(2));
    CHECK(x2[0] == -0.5);
    CHECK(x2[1] == Approx(0.0).scale(1e-10));
    CHECK(x2[2] == 0.5);

    const auto x4 = consistent_positions(InitialProfile::cos_power(1.0), MassMesh::equidistant(4));
    CHECK(x4[1] == Approx(-1.0 / 6.0).epsilon(1e-10));
    CHECK(x4[3] == Approx(1.0 / 6.0).epsilon(1e-10));

    testing::Gen gen(31);
    for (int n = 0; n < 20; ++n) {
        const MassMesh mesh = gen.mesh(gen.integer(2, 40));
        const InitialProfile q = InitialProfile::cos_power(gen.uniform(0.5, 5.0));
        const auto x = consistent_positions(q, mesh);
        for (int k = 0; k <= mesh.cells(); ++k) {
            CHECK(q.cumulative_mass(x[k]) == Approx(mesh.xi()[k]).epsilon(1e-10).scale(1.0));
            if (k > 0) CHECK(x[k] > x[k - 1]);
        }
    }
}

TEST_CASE("graded mesh") {
    const GradedMesh two = graded_mesh_from_profile(InitialProfile::cos_power(3.0), 2);
    CHECK(two.positions[0] == -0.5);
    CHECK(two.positions[1] == Approx(0.0).scale(1e-15));
    CHECK(two.positions[2] == 0.5);
    CHECK(two.mesh.xi()[1] == Approx(0.5).epsilon(1e-12));

    const GradedMesh four = graded_mesh_from_profile(InitialProfile::cos_power(3.0), 4);
    CHECK(four.positions[1] == Approx(-std::cos(kPi / 4.0) / 2.0).epsilon(1e-15));

    // q = 2: M(x) = x + 1/2 + sin(2 pi x) / (2 pi).
    const int K = 50;
    const GradedMesh g = graded_mesh_from_profile(InitialProfile::cos_power(2.0), K);
    const double x1 = -std::cos(kPi / K) / 2.0;
    const double u = x1 + 0.5;  // = (1 - cos(pi/K)) / 2, small
    // x + 1/2 + sin(2 pi x)/(2 pi) = u - sin(2 pi u)/(2 pi) = (2 pi u)^3 / (12 pi) - ...
    const double w = 2.0 * kPi * u;
    const double xi1 = (w - std::sin(w)) / (2.0 * kPi);
    CHECK(g.mesh.cell_widths()[0] == Approx(xi1).epsilon(1e-7));
    CHECK(g.positions[1] - g.positions[0] == Approx(kPi * kPi / (4.0 * K * K)).epsilon(1e-3));
    for (std::size_t k = 1; k < g.positions.size(); ++k) CHECK(g.positions[k] > g.positions[k - 1]);
}

TEST_CASE("graded edge spacing scales like K^-2") {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int K : {25, 50, 100, 200, 400}) {
        const GradedMesh g = graded_mesh_from_profile(InitialProfile::cos_power(2.5), K);
        const double lx = std::log(K), ly = std::log(g.positions[1] - g.positions[0]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == Approx(-2.0).epsilon(0.05));
}

TEST_CASE("steepness ratio") {
    const auto pme = EquationSpec::porous_medium(2.0);
    const SteepnessRatio q1 = steepness_ratio(InitialProfile::cos_power(1.0), pme);
    CHECK(q1.divergent);
    CHECK(std::isinf(q1.value));
    const SteepnessRatio q3 = steepness_ratio(InitialProfile::cos_power(3.0), pme);
    CHECK_FALSE(q3.divergent);
    CHECK(std::isfinite(q3.value));
    CHECK(q3.value > 0.0);

    const auto tf = EquationSpec::thin_film();
    const SteepnessRatio q45 = steepness_ratio(InitialProfile::cos_power(4.5), tf);
    CHECK_FALSE(q45.divergent);
    CHECK(std::isfinite(q45.value));
    CHECK(steepness_ratio(InitialProfile::cos_power(1.5), tf).divergent);
    CHECK(kind_of([&] { steepness_ratio(InitialProfile::cos_power(3.0), pme, 10); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("tabulated profile from CSV") {
    const auto path = std::filesystem::temp_directory_path() / "lagwait_test_profile.csv";
    {
        std::ofstream out(path);
        out << "x,u\n0,0\n1,2\n2,0\n";
    }
    const InitialProfile p = InitialProfile::from_csv(path);
    std::filesystem::remove(path);
    CHECK(p.family() == InitialProfile::Family::Tabulated);
    CHECK(p.left() == 0.0);
    CHECK(p.right() == 2.0);
    CHECK(p.density(1.0) == Approx(1.0));
    CHECK(p.density(0.5) == Approx(0.5));
    CHECK(p.cumulative_mass(1.0) == Approx(0.5));
    CHECK(p.cumulative_mass(0.5) == Approx(0.125));

    const auto x = consistent_positions(p, MassMesh::equidistant(2));
    CHECK(x[1] == Approx(1.0).epsilon(1e-10));

    CHECK(kind_of([] { InitialProfile::from_csv("/nonexistent/profile.csv"); }) == ErrorKind::IoError);
    CHECK(kind_of([] { InitialProfile::tabulated({0, 1, 2}, {0, 0, 0}); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { InitialProfile::tabulated({0, 2, 1}, {0, 1, 0}); }) == ErrorKind::InvalidArgument);
}
