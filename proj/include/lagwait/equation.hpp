#pragma once

#include <string>

#include "lagwait/mass_mesh.hpp"

namespace lagwait {

enum class EquationKind { PorousMedium, ThinFilm };

/// Thin-film flux F_kappa. Laplacian: 1/2 z Delta z + 1/4 Delta(z^2).
/// Gradient: z Delta z + 1/4 [(D_{kappa+1/2} z)^2 + (D_{kappa-1/2} z)^2].
/// The two agree wherever the stencil is uniform. Auto uses Laplacian on
/// equidistant meshes and Gradient otherwise.
enum class ThinFilmFlux { Auto, Laplacian, Gradient };

/// Which discrete evolution to run and how its boundary is closed.
///
/// For the porous medium equation `exponent` is m > 1. For the thin-film
/// equation the scheme itself has no parameter; `exponent` is the diagnostic
/// alpha in (0, 1/32) used by the entropy H = sum z^alpha / alpha.
struct EquationSpec {
    EquationKind kind = EquationKind::PorousMedium;
    double exponent = 2.0;
    BoundaryConvention convention = BoundaryConvention::Standard;
    /// Allow the thin-film scheme on a non-equidistant mesh (general-mesh D
    /// and Delta, flux form chosen by `flux`).
    bool non_equidistant = false;
    ThinFilmFlux flux = ThinFilmFlux::Auto;

    static EquationSpec porous_medium(double m, BoundaryConvention convention = BoundaryConvention::Standard);
    static EquationSpec thin_film(double alpha = 1.0 / 64.0,
                                  BoundaryConvention convention = BoundaryConvention::UniformGhost,
                                  bool non_equidistant = false, ThinFilmFlux flux = ThinFilmFlux::Auto);

    bool is_pme() const noexcept { return kind == EquationKind::PorousMedium; }
    double m() const noexcept { return exponent; }
    double alpha() const noexcept { return exponent; }

    /// Throws invalid-argument if m <= 1 or alpha outside (0, 1/32).
    void validate() const;
    /// The flux form used on the given mesh (Auto resolved).
    ThinFilmFlux resolved_flux(const MassMesh& mesh) const noexcept;
};

std::string to_string(EquationKind kind);
std::string to_string(BoundaryConvention convention);
std::string to_string(ThinFilmFlux flux);
/// Inverse of to_string; throws config-error on unknown names.
BoundaryConvention parse_boundary_convention(const std::string& name);
ThinFilmFlux parse_thin_film_flux(const std::string& name);

}  // namespace lagwait
