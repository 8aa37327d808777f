#pragma once

#include <vector>

#include "lagwait/equation.hpp"
#include "lagwait/grid_calculus.hpp"
#include "lagwait/mass_mesh.hpp"

namespace lagwait {

/// Localized entropy H_i, dissipation D_i and G_i for every dyadic index
/// i = 1..I (stored at i-1). Sums run over the cells (or nodes) left of k*_i.
///
/// Porous medium (exponent m):
///   H_i = sum z^{m-1}/(m-1) delta,  D_i = sum_{k<k*_i} [D_k(z^m)]^2 delta_k,  G_i = sum z^{2m} delta
/// Thin film (exponent alpha):
///   H_i = sum z^alpha/alpha delta,
///   D_i = sum [z^{3+alpha} (Delta z)^2 + 1/2 z^{1+alpha} ((D_{kappa-1/2} z)^4 + (D_{kappa+1/2} z)^4)] delta,
///   G_i = sum z^{5+alpha} delta
struct FunctionalProfile {
    EquationKind kind = EquationKind::PorousMedium;
    double exponent = 0.0;
    std::vector<double> H;
    std::vector<double> D;
    std::vector<double> G;

    int blocks() const noexcept { return static_cast<int>(H.size()); }
};

FunctionalProfile functional_profile(const GridFunction& z, const MassMesh& mesh, const EquationSpec& equation);

/// H_I, the entropy over the whole mesh.
double global_entropy(const GridFunction& z, const MassMesh& mesh, const EquationSpec& equation);

/// Porous medium: b = max_{i=1..I} rho_i^{-(3m-1)/(m+1)} H_i.
/// Thin film:     b = max_{i=2..I} rho_i^{-(1 + 4 alpha/5)} H_i.
double initial_entropy_ratio(const GridFunction& z, const MassMesh& mesh, const EquationSpec& equation);

/// Cut-off weight for block i (1-based, i < I) of the porous medium
/// localization: 1 on cells left of k*_i, (2 rho_i - xi_k)/rho_i on cell
/// k-1/2 for k*_i < k < k*_{i+1}, 0 from k*_{i+1}-1/2 on. Ghosts extend the
/// boundary values.
GridFunction pme_cutoff_weight(const MassMesh& mesh, int block);

}  // namespace lagwait
