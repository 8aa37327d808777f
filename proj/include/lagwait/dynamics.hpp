#pragma once

#include <utility>
#include <vector>

#include "lagwait/equation.hpp"
#include "lagwait/grid_calculus.hpp"
#include "lagwait/mass_mesh.hpp"

namespace lagwait {

/// Particle positions x_0 < x_1 < ... < x_K at time t. Particle k carries the
/// mass xi_k to its left.
struct LagrangianState {
    double t = 0.0;
    std::vector<double> x;

    int cells() const noexcept { return static_cast<int>(x.size()) - 1; }
};

/// True when x is strictly increasing and finite.
bool is_ordered(const std::vector<double>& x) noexcept;

/// z_kappa = delta_kappa / (x_{kappa+1/2} - x_{kappa-1/2}), zero ghosts.
/// Throws ordering-violation for a non-increasing state.
GridFunction densities(const LagrangianState& state, const MassMesh& mesh);

/// sum_kappa z_kappa (x_{kappa+1/2} - x_{kappa-1/2}).
double total_mass(const LagrangianState& state, const MassMesh& mesh);

/// Bracket 1/2 z^3 Delta z + 1/4 z^2 Delta(z^2) of the thin-film scheme,
/// i.e. z^2 F. Zero at the ghost cells because z vanishes there.
GridFunction thin_film_bracket(const GridFunction& z, const MassMesh& mesh, BoundaryConvention convention);

/// F_kappa = 1/2 z Delta z + 1/4 Delta(z^2).
GridFunction thin_film_flux(const GridFunction& z, const MassMesh& mesh, BoundaryConvention convention);

/// F_kappa = z Delta z + 1/4 [(D_{kappa+1/2} z)^2 + (D_{kappa-1/2} z)^2]; equal to
/// thin_film_flux on equidistant stencils.
GridFunction thin_film_flux_expanded(const GridFunction& z, const MassMesh& mesh, BoundaryConvention convention);
/// F in the form the equation selects for this mesh.
GridFunction thin_film_flux(const GridFunction& z, const MassMesh& mesh, const EquationSpec& equation);

/// Velocities dx/dt:
///   porous medium:  -D(z^m)
///   thin film:       D[z^2 F], F as selected (1/2 z^3 Delta z + 1/4 z^2 Delta(z^2) by default)
/// with z = 0 at -3/2, -1/2, K+1/2, K+3/2.
NodeFunction rhs(const LagrangianState& state, const MassMesh& mesh, const EquationSpec& equation);

/// Density form dz/dt:
///   porous medium:  z^2 Delta(z^m)
///   thin film:     -z^2 Delta(z^2 F)
GridFunction rhs_density_form(const GridFunction& z, const MassMesh& mesh, const EquationSpec& equation);

/// Closed-form velocities of the two outermost particles, computed from the
/// two boundary cells alone.
std::pair<double, double> edge_velocity(const LagrangianState& state, const MassMesh& mesh,
                                        const EquationSpec& equation);

/// Rejects thin-film runs on non-equidistant meshes unless the variant is enabled.
void check_supported(const MassMesh& mesh, const EquationSpec& equation);

}  // namespace lagwait
