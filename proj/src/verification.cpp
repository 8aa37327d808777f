#include "lagwait/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "lagwait/dynamics.hpp"
#include "lagwait/equation.hpp"
#include "lagwait/grid_calculus.hpp"
#include "lagwait/inequalities.hpp"
#include "lagwait/mass_mesh.hpp"

namespace lagwait {

namespace {

using Rng = std::mt19937_64;

constexpr BoundaryConvention kConventions[] = {BoundaryConvention::Standard, BoundaryConvention::UniformGhost};

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double log_uniform(Rng& rng, double lo, double hi) { return std::exp(uniform(rng, std::log(lo), std::log(hi))); }

MassMesh random_mesh(Rng& rng, int cells) {
    std::vector<double> masses(static_cast<std::size_t>(cells));
    for (double& m : masses) m = log_uniform(rng, 1e-2, 1.0);
    return MassMesh::from_cell_masses(masses);
}

GridFunction random_signed(Rng& rng, int cells) {
    GridFunction f;
    f.values.resize(static_cast<std::size_t>(cells));
    for (double& v : f.values) v = uniform(rng, -1.0, 1.0);
    f.ghosts = {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
    return f;
}

// Nonnegative cell values of mixed shape: noise, a smooth bump, or sparse spikes.
GridFunction random_nonnegative(Rng& rng, int cells) {
    GridFunction f;
    f.values.resize(static_cast<std::size_t>(cells));
    const int shape = uniform_int(rng, 0, 2);
    const double power = uniform(rng, 0.2, 4.0);
    for (int j = 0; j < cells; ++j) {
        double v = 0.0;
        if (shape == 0) {
            v = uniform(rng, 0.0, 1.0);
        } else if (shape == 1) {
            v = std::pow((j + 0.5) / cells, power);
        } else {
            v = uniform(rng, 0.0, 1.0) < 0.3 ? log_uniform(rng, 1e-3, 1.0) : 0.0;
        }
        f[j] = v;
    }
    return f;
}

class Tally {
public:
    Tally(std::string name, bool identity) : identity_(identity) {
        check_.name = std::move(name);
        check_.worst = identity ? 0.0 : std::numeric_limits<double>::infinity();
    }

    void add(const Gap& gap, double tolerance) {
        check_.cases += 1;
        const double scale = std::max(gap.scale, std::numeric_limits<double>::min());
        if (identity_) {
            check_.worst = std::max(check_.worst, std::abs(gap.value) / scale);
            if (!gap.vanishes_within(tolerance)) check_.failures += 1;
        } else {
            check_.worst = std::min(check_.worst, gap.value / scale);
            if (!gap.nonnegative_within(tolerance)) check_.failures += 1;
        }
    }

    SuiteCheck result() const { return check_; }

private:
    SuiteCheck check_;
    bool identity_;
};

double elapsed_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

bool SuiteReport::passed() const noexcept { return failures() == 0 && cases() > 0; }

long SuiteReport::cases() const noexcept {
    long n = 0;
    for (const auto& c : checks) n += c.cases;
    return n;
}

long SuiteReport::failures() const noexcept {
    long n = 0;
    for (const auto& c : checks) n += c.failures;
    return n;
}

SuiteReport identity_suite(int cases, double tolerance, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(seed);
    Tally sbp("summation_by_parts", true), first("product_rule_first", true), second("product_rule_second", true);
    for (int n = 0; n < cases; ++n) {
        const BoundaryConvention convention = kConventions[n % 2];
        const int cells = uniform_int(rng, 2, 40);
        const MassMesh mesh = random_mesh(rng, cells);
        GridFunction f = random_signed(rng, cells);
        const GridFunction g = random_signed(rng, cells);
        first.add(product_rule_first_gap(f, g, mesh, convention), tolerance);
        f.ghosts.left = f.ghosts.right = 0.0;
        sbp.add(sbp_residual(f, g, mesh, convention), tolerance);

        const MassMesh uniform_mesh = MassMesh::equidistant(cells);
        const GridFunction u = random_signed(rng, cells), v = random_signed(rng, cells);
        second.add(product_rule_gaps(u, v, uniform_mesh, convention).second, tolerance);
    }
    SuiteReport report{"identities", tolerance, {sbp.result(), first.result(), second.result()}, 0.0};
    report.seconds = elapsed_since(start);
    return report;
}

SuiteReport inequality_suite(long samples, double tolerance, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(seed);
    Tally lower("diffquot_lower", false), upper("diffquot", false), taylor("diffquot2", false);
    Tally more("moreelementary", false), even_more("evenmoreelementary", false), weighted("weighted", false);
    Tally laplace("laplace", false), gns2("gns_quadratic", false), gns4("gns_quartic", false);

    for (long n = 0; n < samples; ++n) {
        const double p = uniform(rng, 1e-3, 1.0 - 1e-3);
        const double x = log_uniform(rng, 1e-4, 1e4);
        // Every fourth draw puts y close to x, where the cancellations live.
        const double y = n % 4 == 0 ? x * (1.0 + log_uniform(rng, 1e-8, 1e-1) * (uniform(rng, 0, 1) < 0.5 ? -1 : 1))
                                    : log_uniform(rng, 1e-4, 1e4);
        const ScalarInequalityGaps gaps = scalar_inequality_gaps(x, y, p);
        lower.add(gaps.diffquot_lower, tolerance);
        upper.add(gaps.diffquot, tolerance);
        taylor.add(gaps.diffquot2, tolerance);
        more.add(gaps.moreelementary, tolerance);
        even_more.add(gaps.evenmoreelementary, tolerance);
        weighted.add(weighted_inequality_gap(x, y, p, uniform(rng, 0.0, 2.0), uniform(rng, 0.0, 2.0)), tolerance);

        {
            const int cells = uniform_int(rng, 2, 24);
            const MassMesh mesh = MassMesh::equidistant(cells);
            GridFunction f;
            f.values.resize(static_cast<std::size_t>(cells));
            for (double& v : f.values) v = log_uniform(rng, 1e-3, 1.0);
            f.ghosts.left = uniform(rng, 0, 1) < 0.5 ? 0.0 : log_uniform(rng, 1e-3, 1.0);
            f.ghosts.right = uniform(rng, 0, 1) < 0.5 ? 0.0 : log_uniform(rng, 1e-3, 1.0);
            laplace.add(laplace_inequality_gap(f, mesh, p, kConventions[n % 2]), tolerance);
        }
        {
            const int cells = uniform_int(rng, 2, 24);
            const MassMesh mesh = n % 3 == 0 ? MassMesh::equidistant(cells) : random_mesh(rng, cells);
            const GridFunction f = random_nonnegative(rng, cells);
            const int k_star = uniform_int(rng, 1, cells);
            gns2.add(gns_gap(f, mesh, k_star, GnsMode::Quadratic, uniform(rng, 1e-3, 1.0 - 1e-3)), tolerance);
            gns4.add(gns_gap(f, mesh, k_star, GnsMode::Quartic, uniform(rng, 1e-3, 1.0 / 3.0 - 1e-3)), tolerance);
        }
    }
    SuiteReport report{"inequalities",
                       tolerance,
                       {lower.result(), upper.result(), taylor.result(), more.result(), even_more.result(),
                        weighted.result(), laplace.result(), gns2.result(), gns4.result()},
                       0.0};
    report.seconds = elapsed_since(start);
    return report;
}

SuiteReport consistency_suite(int cases, double tolerance, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(seed);
    Tally pme("porous_medium", true), tf("thin_film", true);
    for (int n = 0; n < cases; ++n) {
        const BoundaryConvention convention = kConventions[n % 2];
        const int cells = uniform_int(rng, 2, 40);
        const MassMesh mesh = n % 4 == 0 ? MassMesh::equidistant(cells) : random_mesh(rng, cells);
        LagrangianState state;
        state.x.resize(static_cast<std::size_t>(cells) + 1);
        state.x[0] = uniform(rng, -1.0, 0.0);
        for (int k = 1; k <= cells; ++k) state.x[k] = state.x[k - 1] + log_uniform(rng, 1e-3, 1.0) / cells;
        const GridFunction z = densities(state, mesh);
        const auto widths = mesh.cell_widths();

        const EquationSpec equations[] = {
            EquationSpec::porous_medium(uniform(rng, 1.05, 4.0), convention),
            EquationSpec::thin_film(1.0 / 64.0, convention, true,
                                    uniform(rng, 0, 1) < 0.5 ? ThinFilmFlux::Laplacian : ThinFilmFlux::Gradient),
        };
        for (const EquationSpec& equation : equations) {
            const NodeFunction velocity = rhs(state, mesh, equation);
            const GridFunction dz = rhs_density_form(z, mesh, equation);
            Gap worst{0.0, 0.0};
            for (int j = 0; j < cells; ++j) {
                const double factor = z[j] * z[j] / widths[j];
                const double from_x = -factor * (velocity[j + 1] - velocity[j]);
                const double scale = factor * (std::abs(velocity[j + 1]) + std::abs(velocity[j]));
                const double residual = std::abs(dz[j] - from_x);
                if (residual / std::max(scale, 1e-300) >= worst.value / std::max(worst.scale, 1e-300)) {
                    worst = {residual, scale};
                }
            }
            (equation.is_pme() ? pme : tf).add(worst, tolerance);
        }
    }
    SuiteReport report{"consistency", tolerance, {pme.result(), tf.result()}, 0.0};
    report.seconds = elapsed_since(start);
    return report;
}

}  // namespace lagwait
