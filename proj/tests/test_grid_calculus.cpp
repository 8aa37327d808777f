#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lagwait/error.hpp"
#include "lagwait/grid_calculus.hpp"
#include "lagwait/inequalities.hpp"
#include "support.hpp"

using namespace lagwait;
using doctest::Approx;

namespace {

constexpr BoundaryConvention kBoth[] = {BoundaryConvention::Standard, BoundaryConvention::UniformGhost};

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

TEST_CASE("forward difference and Laplacian of the K=2 example") {
    const MassMesh mesh = MassMesh::equidistant(2);
    const GridFunction f({1.0, 1.0});
    const NodeFunction d = forward_difference(f, mesh);
    REQUIRE(d.size() == 3);
    CHECK(d[0] == Approx(4.0));
    CHECK(d[1] == Approx(0.0));
    CHECK(d[2] == Approx(-4.0));
    const GridFunction lap = discrete_laplacian(f, mesh);
    CHECK(lap[0] == Approx(-8.0));
    CHECK(lap[1] == Approx(-8.0));
}

TEST_CASE("constant, linear and quadratic grid functions") {
    testing::Gen gen(7);
    const MassMesh random = gen.mesh(12);
    const GridFunction c(std::vector<double>(12, 2.5), Ghosts{2.5, 2.5, 2.5, 2.5});
    for (auto conv : kBoth) {
        for (double v : forward_difference(c, random, conv).values) CHECK(v == Approx(0.0).epsilon(1e-12));
        for (double v : discrete_laplacian(c, random, conv).values) CHECK(v == Approx(0.0).scale(1e3));
    }

    const int K = 10;
    const MassMesh mesh = MassMesh::equidistant(K);
    const double delta = 1.0 / K;
    GridFunction linear, quadratic;
    for (int j = 0; j < K; ++j) {
        const double kappa = j + 0.5;
        linear.values.push_back(kappa * delta);
        quadratic.values.push_back(kappa * delta * kappa * delta);
    }
    const NodeFunction d = forward_difference(linear, mesh);
    for (int k = 1; k < K; ++k) CHECK(d[k] == Approx(1.0));
    const GridFunction lap = discrete_laplacian(quadratic, mesh);
    for (int j = 1; j + 1 < K; ++j) CHECK(lap[j] == Approx(2.0));
}

TEST_CASE("operators agree with a long-double oracle on random meshes") {
    testing::Gen gen(11);
    for (int n = 0; n < 200; ++n) {
        const int K = gen.integer(2, 30);
        const MassMesh mesh = gen.mesh(K);
        const GridFunction f = gen.signed_function(K);
        for (auto conv : kBoth) {
            const testing::Oracle o = testing::oracle_of(mesh, conv == BoundaryConvention::UniformGhost);
            const NodeFunction d = forward_difference(f, mesh, conv);
            for (int k = 0; k <= K; ++k) {
                const double want = static_cast<double>(o.D(f, k));
                CHECK(d[k] == Approx(want).epsilon(1e-11).scale(std::abs(want) + 1.0 / o.dual(k)));
            }
            const GridFunction lap = discrete_laplacian(f, mesh, conv);
            for (int j = 0; j < K; ++j) {
                const double want = static_cast<double>(o.laplacian(f, j));
                const double scale = 4.0 / static_cast<double>(o.cell(j) * std::min(o.dual(j), o.dual(j + 1)));
                CHECK(lap[j] == Approx(want).epsilon(1e-11).scale(scale));
            }
        }
    }
}

TEST_CASE("equidistant Laplacian equals the three-point stencil") {
    testing::Gen gen(13);
    for (int n = 0; n < 100; ++n) {
        const int K = gen.integer(3, 40);
        const MassMesh mesh = MassMesh::equidistant(K);
        const GridFunction f = gen.signed_function(K);
        const GridFunction lap = discrete_laplacian(f, mesh);
        const double delta = 1.0 / K;
        for (int j = 1; j + 1 < K; ++j) {
            const double stencil = (f[j + 1] - 2.0 * f[j] + f[j - 1]) / (delta * delta);
            const double scale = (std::abs(f[j + 1]) + 2.0 * std::abs(f[j]) + std::abs(f[j - 1])) / (delta * delta);
            CHECK(std::abs(lap[j] - stencil) <= 1e-14 * scale);
        }
    }
}

TEST_CASE("summation by parts") {
    const MassMesh mesh = MassMesh::equidistant(5);
    const GridFunction zero(std::vector<double>(5, 0.0));
    CHECK(sbp_residual(zero, zero, mesh).value == 0.0);

    testing::Gen gen(17);
    for (auto conv : kBoth) {
        const MassMesh random = gen.mesh(17);
        const GridFunction g = gen.signed_function(17);
        GridFunction ones(std::vector<double>(17, 1.0));
        CHECK(sbp_residual(ones, g, random, conv).vanishes_within(1e-12));

        GridFunction f = gen.signed_function(17);
        f.ghosts.left = f.ghosts.right = 0.0;
        const Gap gap = sbp_residual(f, g, random, conv);
        CHECK(gap.vanishes_within(1e-12));

        // Both sides from the oracle.
        const testing::Oracle o = testing::oracle_of(random, conv == BoundaryConvention::UniformGhost);
        long double lhs = 0, rhs = 0;
        for (int j = 0; j < 17; ++j) lhs -= f[j] * o.laplacian(g, j) * o.cell(j);
        for (int k = 0; k <= 17; ++k) rhs += o.D(f, k) * o.D(g, k) * o.dual(k);
        CHECK(std::abs(static_cast<double>(lhs - rhs)) <= 1e-12 * gap.scale);
    }

    GridFunction f = gen.signed_function(5);
    f.ghosts.left = 1.0;
    CHECK(kind_of([&] { sbp_residual(f, f, mesh); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("product rules") {
    const MassMesh mesh = MassMesh::equidistant(16);
    testing::Gen gen(19);
    const GridFunction g = gen.signed_function(16);
    const GridFunction ones(std::vector<double>(16, 1.0), Ghosts{1.0, 1.0, 1.0, 1.0});
    CHECK(product_rule_first_gap(ones, g, mesh).value == Approx(0.0).scale(1e-10));

    for (auto conv : kBoth) {
        const ProductRuleGaps gaps = product_rule_gaps(gen.signed_function(16), g, mesh, conv);
        CHECK(gaps.first.vanishes_within(1e-12));
        CHECK(gaps.second.vanishes_within(1e-12));
    }
    const MassMesh uneven = gen.mesh(16);
    CHECK(product_rule_first_gap(gen.signed_function(16), g, uneven).vanishes_within(1e-12));
    CHECK(kind_of([&] { product_rule_gaps(g, g, uneven); }) == ErrorKind::UnsupportedMesh);
}

TEST_CASE("shape mismatch") {
    const MassMesh mesh = MassMesh::equidistant(4);
    const GridFunction f({1.0, 2.0, 3.0});
    CHECK(kind_of([&] { forward_difference(f, mesh); }) == ErrorKind::ShapeError);
    CHECK(kind_of([&] { discrete_laplacian(f, mesh); }) == ErrorKind::ShapeError);
}

TEST_CASE("GNS gaps") {
    const int K = 8;
    const MassMesh mesh = MassMesh::equidistant(K);
    const GridFunction zero(std::vector<double>(K, 0.0));
    CHECK(gns_gap(zero, mesh, K, GnsMode::Quadratic, 0.5).value == 0.0);
    CHECK(gns_gap(zero, mesh, K, GnsMode::Quartic, 0.2).value == 0.0);

    // Spike in cell 3 + 1/2: sum f^2 delta = 1/K, sum (Df)^2 delta_k = 2K,
    // sum f delta = 1/K, A_{2,1/2} = 4.5^{1/3}; RHS = (9K)^{1/3} K^{-4/3}.
    GridFunction spike(std::vector<double>(K, 0.0));
    spike[3] = 1.0;
    const Gap gap = gns_gap(spike, mesh, K, GnsMode::Quadratic, 0.5);
    CHECK(gap.value == Approx((std::cbrt(9.0) - 1.0) / K));
    CHECK(gns_constant_quadratic(0.5, 1.0) == Approx(std::cbrt(4.5)));

    GridFunction negative = spike;
    negative[0] = -1.0;
    CHECK(kind_of([&] { gns_gap(negative, mesh, K, GnsMode::Quadratic, 0.5); }) == ErrorKind::DomainError);
    CHECK(kind_of([&] { gns_gap(spike, mesh, K, GnsMode::Quadratic, 1.0); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { gns_gap(spike, mesh, K, GnsMode::Quartic, 0.4); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { gns_gap(spike, mesh, 0, GnsMode::Quartic, 0.2); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("property: GNS gaps on random nonnegative functions") {
    testing::Gen gen(23);
    for (int n = 0; n < 10000; ++n) {
        const int K = gen.integer(2, 20);
        const MassMesh mesh = gen.coin() ? gen.mesh(K) : MassMesh::equidistant(K);
        GridFunction f;
        for (int j = 0; j < K; ++j) f.values.push_back(gen.coin() ? gen.uniform(0.0, 1.0) : 0.0);
        const int k_star = gen.integer(1, K);
        REQUIRE(gns_gap(f, mesh, k_star, GnsMode::Quadratic, gen.uniform(0.01, 0.99)).nonnegative_within(1e-12));
        REQUIRE(gns_gap(f, mesh, k_star, GnsMode::Quartic, gen.uniform(0.01, 0.33)).nonnegative_within(1e-12));
    }
}

TEST_CASE("elementary inequalities") {
    const ScalarInequalityGaps at = scalar_inequality_gaps(4.0, 1.0, 0.5);
    CHECK(at.moreelementary.value == Approx(6.0));
    // (x^{2.5} - y^{2.5})(x - y) - (x^{1.5} + y^{1.5})(x - y)^2 = 31*3 - 9*9 = 12
    CHECK(at.evenmoreelementary.value == Approx(12.0));
    CHECK(at.diffquot_lower.value == Approx(7.0 / 3.0));

    // x -> y: the difference quotient bound becomes tight.
    const ScalarInequalityGaps close = scalar_inequality_gaps(1.0 + 1e-9, 1.0, 0.3);
    CHECK(close.diffquot.nonnegative_within(1e-12));
    CHECK(close.diffquot.value == Approx(0.0).scale(1e-6));

    CHECK(kind_of([] { scalar_inequality_gaps(1.0, 1.0, 0.5); }) == ErrorKind::DomainError);
    CHECK(kind_of([] { scalar_inequality_gaps(-1.0, 1.0, 0.5); }) == ErrorKind::DomainError);
    CHECK(kind_of([] { scalar_inequality_gaps(2.0, 1.0, 1.5); }) == ErrorKind::DomainError);
    CHECK(kind_of([] { weighted_inequality_gap(2.0, 1.0, 0.5, -1.0, 1.0); }) == ErrorKind::DomainError);

    // Equal weights reduce the weighted form to the unweighted one.
    const Gap w = weighted_inequality_gap(4.0, 1.0, 0.5, 1.0, 1.0);
    CHECK(w.value == Approx(12.0));
}

TEST_CASE("Laplacian inequality") {
    const MassMesh mesh = MassMesh::equidistant(6);
    const GridFunction flat(std::vector<double>(6, 1.0), Ghosts{0.0, 1.0, 1.0, 0.0});
    const Gap gap = laplace_inequality_gap(flat, mesh, 0.5);
    CHECK(gap.value == Approx(0.0).scale(1.0));
    CHECK(kind_of([&] { laplace_inequality_gap(flat, MassMesh::from_breakpoints({0, 0.1, 0.3, 0.5, 0.7, 0.9, 1}), 0.5); }) ==
          ErrorKind::UnsupportedMesh);
    GridFunction bad = flat;
    bad[2] = 0.0;
    CHECK(kind_of([&] { laplace_inequality_gap(bad, mesh, 0.5); }) == ErrorKind::DomainError);
}

TEST_CASE("property: elementary inequalities on random samples") {
    testing::Gen gen(29);
    for (int n = 0; n < 20000; ++n) {
        const double p = gen.uniform(0.01, 0.99);
        const double x = gen.log_uniform(1e-3, 1e3);
        const double y = gen.coin() ? gen.log_uniform(1e-3, 1e3) : x * (1.0 + gen.uniform(-1e-3, 1e-3));
        if (x == y) continue;
        const ScalarInequalityGaps g = scalar_inequality_gaps(x, y, p);
        REQUIRE(g.diffquot_lower.nonnegative_within(1e-12));
        REQUIRE(g.diffquot.nonnegative_within(1e-12));
        REQUIRE(g.diffquot2.nonnegative_within(1e-12));
        REQUIRE(g.moreelementary.nonnegative_within(1e-12));
        REQUIRE(g.evenmoreelementary.nonnegative_within(1e-12));
        REQUIRE(weighted_inequality_gap(x, y, p, gen.uniform(0, 3), gen.uniform(0, 3)).nonnegative_within(1e-12));

        const int K = gen.integer(2, 16);
        GridFunction f;
        for (int j = 0; j < K; ++j) f.values.push_back(gen.log_uniform(1e-2, 1.0));
        f.ghosts.left = gen.coin() ? 0.0 : gen.uniform(0.0, 1.0);
        f.ghosts.right = gen.coin() ? 0.0 : gen.uniform(0.0, 1.0);
        REQUIRE(laplace_inequality_gap(f, MassMesh::equidistant(K), p).nonnegative_within(1e-12));
    }
}
