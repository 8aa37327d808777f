#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "lagwait/diagnostics.hpp"
#include "lagwait/functionals.hpp"
#include "lagwait/init_profile.hpp"
#include "lagwait/integrator.hpp"
#include "support.hpp"

using namespace lagwait;
using doctest::Approx;

namespace {

GridFunction constant(int K, double value) { return GridFunction(std::vector<double>(K, value)); }

TrajectorySample sample(double t, std::vector<double> x) { return {LagrangianState{t, std::move(x)}, 0.0, 0.0, true}; }

Trajectory hand_trajectory(const std::vector<std::pair<double, double>>& t_x1) {
    Trajectory tr;
    for (const auto& [t, x1] : t_x1) tr.samples.push_back(sample(t, {-0.5 - t * 0.01, x1, 0.5}));
    tr.t_end = tr.samples.back().state.t;
    return tr;
}

}  // namespace

TEST_CASE("functionals of constant densities") {
    const MassMesh mesh = MassMesh::equidistant(8);
    const FunctionalProfile p = functional_profile(constant(8, 1.0), mesh, EquationSpec::porous_medium(2.0));
    REQUIRE(p.blocks() == 4);
    const double rho[] = {0.125, 0.25, 0.5, 1.0};
    for (int i = 0; i < 4; ++i) {
        CHECK(p.H[i] == Approx(rho[i]));
        CHECK(p.G[i] == Approx(rho[i]));
        // Only D_0(z^2) = 1 / delta_0 = 16 is nonzero; D_0^2 delta_0 = 16.
        CHECK(p.D[i] == Approx(16.0));
    }
    CHECK(global_entropy(constant(8, 1.0), mesh, EquationSpec::porous_medium(2.0)) == Approx(1.0));
    CHECK(initial_entropy_ratio(constant(8, 1.0), mesh, EquationSpec::porous_medium(2.0)) == Approx(4.0));

    const auto tf = EquationSpec::thin_film(1.0 / 64.0, BoundaryConvention::UniformGhost);
    const FunctionalProfile q = functional_profile(constant(8, 1.0), mesh, tf);
    for (int i = 0; i < 4; ++i) {
        CHECK(q.H[i] == Approx(64.0 * rho[i]));
        CHECK(q.G[i] == Approx(rho[i]));
    }

    const FunctionalProfile zero = functional_profile(constant(8, 0.0), mesh, EquationSpec::porous_medium(3.0));
    for (int i = 0; i < 4; ++i) {
        CHECK(zero.H[i] == 0.0);
        CHECK(zero.D[i] == 0.0);
        CHECK(zero.G[i] == 0.0);
    }
}

TEST_CASE("spike in the first cell") {
    const MassMesh mesh = MassMesh::equidistant(8);
    GridFunction z = constant(8, 0.0);
    z[0] = 3.0;
    const double m = 2.5;
    const FunctionalProfile p = functional_profile(z, mesh, EquationSpec::porous_medium(m));
    for (int i = 0; i < p.blocks(); ++i) {
        CHECK(p.H[i] == Approx(std::pow(3.0, m - 1) / (m - 1) * 0.125));
        CHECK(p.G[i] == Approx(std::pow(3.0, 2 * m) * 0.125));
    }
}

TEST_CASE("property: localized functionals grow with the block") {
    testing::Gen gen(5);
    for (int n = 0; n < 300; ++n) {
        const int K = gen.integer(2, 64);
        const MassMesh mesh = gen.mesh(K);
        GridFunction z = constant(K, 0.0);
        for (int j = 0; j < K; ++j) z[j] = gen.log_uniform(1e-3, 10.0);
        const EquationSpec eq = gen.coin() ? EquationSpec::porous_medium(gen.uniform(1.05, 4.0))
                                           : EquationSpec::thin_film(gen.uniform(0.001, 0.03));
        const FunctionalProfile p = functional_profile(z, mesh, eq);
        REQUIRE(p.blocks() == static_cast<int>(mesh.dyadic().size()));
        for (int i = 1; i < p.blocks(); ++i) {
            CHECK(p.H[i] >= p.H[i - 1]);
            CHECK(p.D[i] >= p.D[i - 1]);
            CHECK(p.G[i] >= p.G[i - 1]);
        }
        CHECK(p.H.back() == Approx(global_entropy(z, mesh, eq)).epsilon(1e-14));
    }
}

TEST_CASE("cut-off weight slopes") {
    testing::Gen gen(9);
    for (int n = 0; n < 300; ++n) {
        const int K = gen.integer(4, 80);
        const MassMesh mesh = gen.coin() ? MassMesh::equidistant(K) : gen.mesh(K);
        const auto& blocks = mesh.dyadic();
        const testing::Oracle o = testing::oracle_of(mesh);
        for (int i = 1; i < static_cast<int>(blocks.size()); ++i) {
            const GridFunction phi = pme_cutoff_weight(mesh, i);
            const double rho = blocks[i - 1].rho;
            for (int j = 0; j < blocks[i - 1].k_star; ++j) CHECK(phi[j] == 1.0);
            for (int j = blocks[i].k_star; j < K; ++j) CHECK(phi[j] == 0.0);
            const bool premise = mesh.xi()[blocks[i].k_star] >= 2.0 * rho;
            if (!premise) continue;
            for (int k = 0; k <= K; ++k) {
                const double slope = -static_cast<double>(o.D(phi, k));
                CHECK(slope >= -1e-12);
                CHECK(slope <= 2.0 / rho * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("budget constants") {
    CHECK(budget_constant(EquationSpec::porous_medium(2.0)) == 1.0);
    CHECK(budget_constant(EquationSpec::thin_film(1.0 / 64.0)) == Approx(0.01875));
}

TEST_CASE("budget of hand trajectories") {
    const MassMesh mesh = MassMesh::equidistant(2);
    const auto eq = EquationSpec::porous_medium(2.0);

    Trajectory still;
    still.samples.push_back(sample(0.0, {-0.5, 0.0, 0.5}));
    const BudgetReport r = dissipation_budget(still, mesh, eq);
    CHECK(r.global.lhs == Approx(r.global.rhs));
    CHECK(r.satisfied());

    // A state that concentrates raises H = sum z delta and breaks the budget.
    Trajectory bad = still;
    bad.samples.push_back(sample(1e-3, {-0.1, 0.0, 0.1}));
    const BudgetReport v = dissipation_budget(bad, mesh, eq);
    CHECK_FALSE(v.global.satisfied);
    CHECK_FALSE(v.satisfied());
    CHECK(v.global.margin() < 0.0);
    CHECK(v.global.time_of_max == 1e-3);
    REQUIRE(v.running_lhs.size() == 2);
    CHECK(v.dissipation_integral[0] == 0.0);
    CHECK(v.dissipation_integral[1] > 0.0);
}

TEST_CASE("waiting time from stored states") {
    const Trajectory crossing = hand_trajectory({{0.0, -0.4}, {1.0, -0.45}, {2.0, -0.55}, {3.0, -0.6}});
    const WaitingTimeReport w = waiting_time_estimate(crossing, -0.5);
    CHECK(w.t_est == Approx(1.5));
    CHECK_FALSE(w.censored);
    CHECK_FALSE(w.localized);
    CHECK(w.threshold == -0.5);
    CHECK(w.edge_excursion == Approx(0.01));

    const Trajectory never = hand_trajectory({{0.0, -0.4}, {1.0, -0.45}});
    const WaitingTimeReport c = waiting_time_estimate(never, -0.5);
    CHECK(c.censored);
    CHECK(c.t_est == 1.0);

    const Trajectory at_start = hand_trajectory({{0.0, -0.55}, {1.0, -0.6}});
    const WaitingTimeReport d = waiting_time_estimate(at_start, -0.5);
    CHECK(d.t_est == 0.0);
    CHECK_FALSE(d.censored);
    CHECK(d.edge_excursion == 0.0);

    Trajectory evented = crossing;
    EventRecord e;
    e.name = kLeftPackageExit;
    e.time = 1.25;
    e.before = crossing.samples[1].state;
    e.after = crossing.samples[2].state;
    evented.events.push_back(e);
    const WaitingTimeReport l = waiting_time_estimate(evented, -0.5);
    CHECK(l.localized);
    CHECK(l.t_est == 1.25);
    CHECK(l.edge_excursion == Approx(0.01));
}

TEST_CASE("edge envelopes") {
    const auto pme = EquationSpec::porous_medium(2.0);
    CHECK(edge_envelope(pme, 0.01, 3.0, 0.0) == 0.0);
    CHECK(edge_envelope(pme, 0.008, 4.0, 0.25) == Approx(2.0 * 0.2 * 1.0));
    CHECK(edge_envelope(pme, 0.005, 2.0, 1e-3) / edge_envelope(pme, 0.01, 2.0, 1e-3) ==
          Approx(std::pow(2.0, -1.0 / 3.0)));
    const auto tf = EquationSpec::thin_film(1.0 / 64.0);
    const double alpha = 1.0 / 64.0;
    CHECK(edge_envelope(tf, 0.01, 2.0, 0.0) == 0.0);
    CHECK(edge_envelope(tf, 0.01, 2.0, 1e-4, 3.0) ==
          Approx(3.0 * std::pow(0.01, 0.2) * std::pow(16.0 * std::pow(1e-4, 1 + alpha), 1.0 / (5 + alpha))));
    CHECK(edge_envelope(tf, 0.005, 2.0, 1e-4) / edge_envelope(tf, 0.01, 2.0, 1e-4) == Approx(std::pow(2.0, -0.2)));

    Trajectory tr = hand_trajectory({{0.0, -0.4}, {1.0, -0.45}});
    const EdgeBoundReport none =
        edge_bound_curve(tr, std::numeric_limits<double>::infinity(), MassMesh::equidistant(2), pme);
    CHECK_FALSE(none.applicable);
    const EdgeBoundReport some = edge_bound_curve(tr, 1.0, MassMesh::equidistant(2), pme);
    CHECK(some.applicable);
    CHECK(some.name == "pme_envelope");
    CHECK(some.delta == 0.5);
    CHECK(std::isinf(some.first_violation));
    CHECK(edge_excursions(tr) == std::vector<double>{0.0, std::fabs((-0.51) - (-0.5))});
}

TEST_CASE("budgets hold along porous medium and thin-film runs") {
    const GradedMesh g = graded_mesh_from_profile(InitialProfile::cos_power(2.5), 30);
    const auto pme = EquationSpec::porous_medium(2.0);
    IntegratorConfig c;
    c.dt_max = 2e-6;
    const Trajectory a = integrate(LagrangianState{0.0, g.positions}, g.mesh, pme, c, {2e-3});
    const BudgetReport ra = dissipation_budget(a, g.mesh, pme);
    CHECK(ra.constant == 1.0);
    CHECK(ra.global.satisfied);
    CHECK(ra.weighted.size() == g.mesh.dyadic().size() - 1);
    for (const auto& w : ra.weighted) {
        INFO("block " << w.block);
        CHECK(w.check.satisfied);
        if (w.weight_premise) CHECK(w.weight_ok);
    }
    CHECK(ra.satisfied());

    const GradedMesh h = graded_mesh_from_profile(InitialProfile::cos_power(3.5), 30);
    const auto tf = EquationSpec::thin_film(1.0 / 64.0, BoundaryConvention::UniformGhost, true);
    c.dt_max = 2e-7;
    const Trajectory b = integrate(LagrangianState{0.0, h.positions}, h.mesh, tf, c, {2e-5});
    const BudgetReport rb = dissipation_budget(b, h.mesh, tf);
    CHECK(rb.constant == Approx(0.01875));
    CHECK(rb.global.satisfied);
    CHECK(rb.weighted.empty());
    CHECK(rb.satisfied());
}
