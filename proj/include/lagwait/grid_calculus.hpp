#pragma once

#include <utility>
#include <vector>

#include "lagwait/mass_mesh.hpp"

namespace lagwait {

/// Values outside the index range 1/2 .. K-1/2. Zero encodes the homogeneous
/// Dirichlet (-1/2, K+1/2) and Neumann (-3/2, K+3/2) conditions.
struct Ghosts {
    double outer_left = 0.0;   // -3/2
    double left = 0.0;         // -1/2
    double right = 0.0;        // K+1/2
    double outer_right = 0.0;  // K+3/2
};

/// A function on cells: values[j] is the value at kappa = j + 1/2.
struct GridFunction {
    std::vector<double> values;
    Ghosts ghosts{};

    GridFunction() = default;
    explicit GridFunction(std::vector<double> v, Ghosts g = {}) : values(std::move(v)), ghosts(g) {}

    int size() const noexcept { return static_cast<int>(values.size()); }
    double operator[](int j) const { return values[static_cast<std::size_t>(j)]; }
    double& operator[](int j) { return values[static_cast<std::size_t>(j)]; }

    /// Value at cell index j with j = -1 and j = K mapped to the adjacent ghosts.
    double at_extended(int j) const;
};

/// A function on nodes: values[k] for k = 0 .. K.
struct NodeFunction {
    std::vector<double> values;

    int size() const noexcept { return static_cast<int>(values.size()); }
    double operator[](int k) const { return values[static_cast<std::size_t>(k)]; }
};

/// (D f)_k = (f_{k+1/2} - f_{k-1/2}) / delta_k for k = 0..K, using the ghosts at -1/2 and K+1/2.
NodeFunction forward_difference(const GridFunction& f, const MassMesh& mesh,
                                 BoundaryConvention convention = BoundaryConvention::Standard);

/// (Delta f)_kappa = (D_{kappa+1/2} f - D_{kappa-1/2} f) / delta_kappa on the K cells.
/// The result carries zero ghosts.
GridFunction discrete_laplacian(const GridFunction& f, const MassMesh& mesh,
                                BoundaryConvention convention = BoundaryConvention::Standard);

/// Pointwise powers and products; ghosts are transformed the same way.
GridFunction pow(const GridFunction& f, double exponent);
GridFunction multiply(const GridFunction& f, const GridFunction& g);

/// A residual or gap together with the magnitude of the terms it came from,
/// so callers can apply a relative tolerance.
struct Gap {
    double value = 0.0;
    double scale = 0.0;

    /// value >= -rel * scale
    bool nonnegative_within(double rel) const noexcept { return value >= -rel * scale; }
    /// |value| <= rel * scale
    bool vanishes_within(double rel) const noexcept { return (value < 0 ? -value : value) <= rel * scale; }
};

/// | -sum f Delta g delta_kappa - sum D f D g delta_k |.
///
/// The identity needs f to vanish at the ghosts -1/2 and K+1/2 (the boundary
/// terms of the summation by parts are f-values there); g is unrestricted.
Gap sbp_residual(const GridFunction& f, const GridFunction& g, const MassMesh& mesh,
                 BoundaryConvention convention = BoundaryConvention::Standard);

/// Largest residuals of the first product rule over all nodes and of the
/// second (equidistant) product rule over the cells where the stencil is
/// uniform: every cell under UniformGhost, interior cells under Standard.
struct ProductRuleGaps {
    Gap first;
    Gap second;
};

ProductRuleGaps product_rule_gaps(const GridFunction& f, const GridFunction& g, const MassMesh& mesh,
                                  BoundaryConvention convention = BoundaryConvention::Standard);

/// Residual of the first product rule alone; valid on any mesh.
Gap product_rule_first_gap(const GridFunction& f, const GridFunction& g, const MassMesh& mesh,
                           BoundaryConvention convention = BoundaryConvention::Standard);

}  // namespace lagwait
