#include "lagwait/dynamics.hpp"

#include <cmath>
#include <string>

#include "lagwait/error.hpp"

namespace lagwait {

bool is_ordered(const std::vector<double>& x) noexcept {
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!std::isfinite(x[k])) return false;
        if (k > 0 && !(x[k] > x[k - 1])) return false;
    }
    return true;
}

GridFunction densities(const LagrangianState& state, const MassMesh& mesh) {
    const int cells = mesh.cells();
    if (state.cells() != cells) {
        fail(ErrorKind::ShapeError, "state has " + std::to_string(state.cells()) + " cells, mesh has " +
                                        std::to_string(cells));
    }
    const auto widths = mesh.cell_widths();
    GridFunction z;
    z.values.resize(static_cast<std::size_t>(cells));
    for (int j = 0; j < cells; ++j) {
        const double dx = state.x[j + 1] - state.x[j];
        if (!(dx > 0.0) || !std::isfinite(dx)) {
            fail(ErrorKind::OrderingViolation, "x_" + std::to_string(j + 1) + " does not exceed x_" + std::to_string(j));
        }
        z.values[j] = widths[j] / dx;
    }
    return z;
}

double total_mass(const LagrangianState& state, const MassMesh& mesh) {
    const GridFunction z = densities(state, mesh);
    double mass = 0.0;
    for (int j = 0; j < z.size(); ++j) mass += z[j] * (state.x[j + 1] - state.x[j]);
    return mass;
}

void check_supported(const MassMesh& mesh, const EquationSpec& equation) {
    if (!equation.is_pme() && !mesh.is_equidistant() && !equation.non_equidistant) {
        fail(ErrorKind::UnsupportedMesh,
             "thin-film scheme on a non-equidistant mesh requires the non-equidistant variant flag");
    }
}

GridFunction thin_film_bracket(const GridFunction& z, const MassMesh& mesh, BoundaryConvention convention) {
    const GridFunction lap_z = discrete_laplacian(z, mesh, convention);
    const GridFunction lap_z2 = discrete_laplacian(pow(z, 2.0), mesh, convention);
    GridFunction bracket;
    bracket.values.resize(z.values.size());
    for (int j = 0; j < z.size(); ++j) {
        const double zj = z[j];
        bracket[j] = 0.5 * zj * zj * zj * lap_z[j] + 0.25 * zj * zj * lap_z2[j];
    }
    return bracket;
}

GridFunction thin_film_flux(const GridFunction& z, const MassMesh& mesh, BoundaryConvention convention) {
    const GridFunction lap_z = discrete_laplacian(z, mesh, convention);
    const GridFunction lap_z2 = discrete_laplacian(pow(z, 2.0), mesh, convention);
    GridFunction flux;
    flux.values.resize(z.values.size());
    for (int j = 0; j < z.size(); ++j) flux[j] = 0.5 * z[j] * lap_z[j] + 0.25 * lap_z2[j];
    return flux;
}

GridFunction thin_film_flux_expanded(const GridFunction& z, const MassMesh& mesh, BoundaryConvention convention) {
    const GridFunction lap_z = discrete_laplacian(z, mesh, convention);
    const NodeFunction dz = forward_difference(z, mesh, convention);
    GridFunction flux;
    flux.values.resize(z.values.size());
    for (int j = 0; j < z.size(); ++j) flux[j] = z[j] * lap_z[j] + 0.25 * (dz[j + 1] * dz[j + 1] + dz[j] * dz[j]);
    return flux;
}

GridFunction thin_film_flux(const GridFunction& z, const MassMesh& mesh, const EquationSpec& equation) {
    return equation.resolved_flux(mesh) == ThinFilmFlux::Gradient ? thin_film_flux_expanded(z, mesh, equation.convention)
                                                                   : thin_film_flux(z, mesh, equation.convention);
}

NodeFunction rhs(const LagrangianState& state, const MassMesh& mesh, const EquationSpec& equation) {
    check_supported(mesh, equation);
    const GridFunction z = densities(state, mesh);
    NodeFunction velocity;
    if (equation.is_pme()) {
        velocity = forward_difference(pow(z, equation.m()), mesh, equation.convention);
        for (double& v : velocity.values) v = -v;
    } else {
        GridFunction bracket = thin_film_flux(z, mesh, equation);
        for (int j = 0; j < z.size(); ++j) bracket[j] *= z[j] * z[j];
        velocity = forward_difference(bracket, mesh, equation.convention);
    }
    return velocity;
}

GridFunction rhs_density_form(const GridFunction& z, const MassMesh& mesh, const EquationSpec& equation) {
    check_supported(mesh, equation);
    if (z.size() != mesh.cells()) fail(ErrorKind::ShapeError, "grid function and mesh differ in length");
    GridFunction rate;
    if (equation.is_pme()) {
        rate = discrete_laplacian(pow(z, equation.m()), mesh, equation.convention);
        for (int j = 0; j < z.size(); ++j) rate[j] *= z[j] * z[j];
    } else {
        const GridFunction flux = thin_film_flux(z, mesh, equation);
        GridFunction weighted = flux;
        weighted.ghosts = {};
        for (int j = 0; j < z.size(); ++j) weighted[j] = z[j] * z[j] * flux[j];
        rate = discrete_laplacian(weighted, mesh, equation.convention);
        for (int j = 0; j < z.size(); ++j) rate[j] *= -z[j] * z[j];
    }
    return rate;
}

std::pair<double, double> edge_velocity(const LagrangianState& state, const MassMesh& mesh,
                                        const EquationSpec& equation) {
    check_supported(mesh, equation);
    const GridFunction z = densities(state, mesh);
    const auto widths = mesh.cell_widths();
    const int cells = mesh.cells();
    const double z_first = z[0], z_last = z[cells - 1];
    const bool standard = equation.convention == BoundaryConvention::Standard;

    if (equation.is_pme()) {
        const double m = equation.m();
        const double factor = standard ? 2.0 : 1.0;
        return {-factor * std::pow(z_first, m) / widths[0], factor * std::pow(z_last, m) / widths[cells - 1]};
    }

    const double z_second = z[1], z_penult = z[cells - 2];
    if (!standard && mesh.is_equidistant()) {
        const double delta = widths[0];
        const double cube = 4.0 * delta * delta * delta;
        const double left = z_first * z_first / cube *
                            (z_second * z_second + 2.0 * z_first * z_second - 6.0 * z_first * z_first);
        const double right = -z_last * z_last / cube *
                             (z_penult * z_penult + 2.0 * z_last * z_penult - 6.0 * z_last * z_last);
        return {left, right};
    }

    // General mesh: the bracket in the outermost cell from its one interior
    // neighbour and the zero ghost.
    const auto dual = mesh.dual_widths(equation.convention);
    const bool gradient = equation.resolved_flux(mesh) == ThinFilmFlux::Gradient;
    auto bracket = [gradient](double zc, double zn, double dual_inner, double dual_outer, double width) {
        const double d_inner = (zn - zc) / dual_inner, d_outer = zc / dual_outer;
        const double lap = (d_inner - d_outer) / width;
        if (gradient) return zc * zc * (zc * lap + 0.25 * (d_inner * d_inner + d_outer * d_outer));
        const double lap_sq = ((zn * zn - zc * zc) / dual_inner - zc * zc / dual_outer) / width;
        return 0.5 * zc * zc * zc * lap + 0.25 * zc * zc * lap_sq;
    };
    const double left = bracket(z_first, z_second, dual[1], dual[0], widths[0]) / dual[0];
    const double right = -bracket(z_last, z_penult, dual[cells - 1], dual[cells], widths[cells - 1]) / dual[cells];
    return {left, right};
}

}  // namespace lagwait
