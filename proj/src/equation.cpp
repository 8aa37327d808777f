#include "lagwait/equation.hpp"

#include "lagwait/error.hpp"

namespace lagwait {

EquationSpec EquationSpec::porous_medium(double m, BoundaryConvention convention) {
    EquationSpec spec{EquationKind::PorousMedium, m, convention, false, ThinFilmFlux::Auto};
    spec.validate();
    return spec;
}

EquationSpec EquationSpec::thin_film(double alpha, BoundaryConvention convention, bool non_equidistant,
                                     ThinFilmFlux flux) {
    EquationSpec spec{EquationKind::ThinFilm, alpha, convention, non_equidistant, flux};
    spec.validate();
    return spec;
}

void EquationSpec::validate() const {
    if (kind == EquationKind::PorousMedium) {
        require(exponent > 1.0, ErrorKind::InvalidArgument, "porous medium exponent m must exceed 1");
    } else {
        require(exponent > 0.0 && exponent < 1.0 / 32.0, ErrorKind::InvalidArgument,
                "thin-film diagnostic alpha must lie in (0, 1/32)");
    }
}

ThinFilmFlux EquationSpec::resolved_flux(const MassMesh& mesh) const noexcept {
    if (flux != ThinFilmFlux::Auto) return flux;
    return mesh.is_equidistant() ? ThinFilmFlux::Laplacian : ThinFilmFlux::Gradient;
}

std::string to_string(EquationKind kind) {
    return kind == EquationKind::PorousMedium ? "pme" : "tf";
}

std::string to_string(BoundaryConvention convention) {
    return convention == BoundaryConvention::Standard ? "standard" : "uniform_ghost";
}

std::string to_string(ThinFilmFlux flux) {
    switch (flux) {
        case ThinFilmFlux::Auto: return "auto";
        case ThinFilmFlux::Laplacian: return "laplacian";
        case ThinFilmFlux::Gradient: return "gradient";
    }
    return "unknown";
}

BoundaryConvention parse_boundary_convention(const std::string& name) {
    if (name == "standard") return BoundaryConvention::Standard;
    if (name == "uniform_ghost") return BoundaryConvention::UniformGhost;
    fail(ErrorKind::ConfigError, "unknown boundary convention '" + name + "'");
}

ThinFilmFlux parse_thin_film_flux(const std::string& name) {
    if (name == "auto") return ThinFilmFlux::Auto;
    if (name == "laplacian") return ThinFilmFlux::Laplacian;
    if (name == "gradient") return ThinFilmFlux::Gradient;
    fail(ErrorKind::ConfigError, "unknown thin-film flux '" + name + "'");
}

}  // namespace lagwait
