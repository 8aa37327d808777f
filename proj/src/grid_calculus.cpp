#include "lagwait/grid_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lagwait/error.hpp"

namespace lagwait {

namespace {

void check_shape(const GridFunction& f, const MassMesh& mesh) {
    if (f.size() != mesh.cells()) {
        fail(ErrorKind::ShapeError, "grid function has " + std::to_string(f.size()) + " cells, mesh has " +
                                        std::to_string(mesh.cells()));
    }
}

}  // namespace

double GridFunction::at_extended(int j) const {
    if (j == -1) return ghosts.left;
    if (j == -2) return ghosts.outer_left;
    if (j == size()) return ghosts.right;
    if (j == size() + 1) return ghosts.outer_right;
    return values.at(static_cast<std::size_t>(j));
}

NodeFunction forward_difference(const GridFunction& f, const MassMesh& mesh, BoundaryConvention convention) {
    check_shape(f, mesh);
    const auto dual = mesh.dual_widths(convention);
    const int cells = f.size();
    NodeFunction d;
    d.values.resize(static_cast<std::size_t>(cells) + 1);
    d.values[0] = (f[0] - f.ghosts.left) / dual[0];
    for (int k = 1; k < cells; ++k) d.values[k] = (f[k] - f[k - 1]) / dual[k];
    d.values[cells] = (f.ghosts.right - f[cells - 1]) / dual[cells];
    return d;
}

GridFunction discrete_laplacian(const GridFunction& f, const MassMesh& mesh, BoundaryConvention convention) {
    const NodeFunction d = forward_difference(f, mesh, convention);
    const auto widths = mesh.cell_widths();
    GridFunction lap;
    lap.values.resize(f.values.size());
    for (int j = 0; j < f.size(); ++j) lap.values[j] = (d[j + 1] - d[j]) / widths[j];
    return lap;
}

GridFunction pow(const GridFunction& f, double exponent) {
    GridFunction out = f;
    for (double& v : out.values) v = std::pow(v, exponent);
    auto& g = out.ghosts;
    g.outer_left = std::pow(g.outer_left, exponent);
    g.left = std::pow(g.left, exponent);
    g.right = std::pow(g.right, exponent);
    g.outer_right = std::pow(g.outer_right, exponent);
    return out;
}

GridFunction multiply(const GridFunction& f, const GridFunction& g) {
    if (f.size() != g.size()) fail(ErrorKind::ShapeError, "grid functions differ in length");
    GridFunction out = f;
    for (int j = 0; j < f.size(); ++j) out[j] = f[j] * g[j];
    out.ghosts.outer_left *= g.ghosts.outer_left;
    out.ghosts.left *= g.ghosts.left;
    out.ghosts.right *= g.ghosts.right;
    out.ghosts.outer_right *= g.ghosts.outer_right;
    return out;
}

Gap sbp_residual(const GridFunction& f, const GridFunction& g, const MassMesh& mesh, BoundaryConvention convention) {
    check_shape(f, mesh);
    check_shape(g, mesh);
    if (f.ghosts.left != 0.0 || f.ghosts.right != 0.0) {
        fail(ErrorKind::InvalidArgument, "summation by parts needs f to vanish at the ghosts -1/2 and K+1/2");
    }
    const GridFunction lap_g = discrete_laplacian(g, mesh, convention);
    const NodeFunction df = forward_difference(f, mesh, convention);
    const NodeFunction dg = forward_difference(g, mesh, convention);
    const auto widths = mesh.cell_widths();
    const auto dual = mesh.dual_widths(convention);

    double lhs = 0.0, rhs = 0.0, scale = 0.0;
    for (int j = 0; j < f.size(); ++j) {
        const double term = -f[j] * lap_g[j] * widths[j];
        lhs += term;
        scale += std::abs(term);
    }
    for (int k = 0; k < df.size(); ++k) {
        const double term = df[k] * dg[k] * dual[k];
        rhs += term;
        scale += std::abs(term);
    }
    return {std::abs(lhs - rhs), scale};
}

Gap product_rule_first_gap(const GridFunction& f, const GridFunction& g, const MassMesh& mesh,
                           BoundaryConvention convention) {
    check_shape(f, mesh);
    check_shape(g, mesh);
    const NodeFunction dfg = forward_difference(multiply(f, g), mesh, convention);
    const NodeFunction df = forward_difference(f, mesh, convention);
    const NodeFunction dg = forward_difference(g, mesh, convention);
    Gap worst{0.0, 0.0};
    for (int k = 0; k <= f.size(); ++k) {
        const double f_sum = f.at_extended(k) + f.at_extended(k - 1);
        const double g_sum = g.at_extended(k) + g.at_extended(k - 1);
        const double a = 0.5 * f_sum * dg[k];
        const double b = 0.5 * df[k] * g_sum;
        const double residual = std::abs(dfg[k] - a - b);
        worst.value = std::max(worst.value, residual);
        worst.scale = std::max(worst.scale, std::abs(dfg[k]) + std::abs(a) + std::abs(b));
    }
    return worst;
}

ProductRuleGaps product_rule_gaps(const GridFunction& f, const GridFunction& g, const MassMesh& mesh,
                                  BoundaryConvention convention) {
    if (!mesh.is_equidistant()) {
        fail(ErrorKind::UnsupportedMesh, "the second product rule holds on equidistant meshes only");
    }
    ProductRuleGaps gaps;
    gaps.first = product_rule_first_gap(f, g, mesh, convention);

    const GridFunction lap_fg = discrete_laplacian(multiply(f, g), mesh, convention);
    const GridFunction lap_f = discrete_laplacian(f, mesh, convention);
    const GridFunction lap_g = discrete_laplacian(g, mesh, convention);
    const NodeFunction df = forward_difference(f, mesh, convention);
    const NodeFunction dg = forward_difference(g, mesh, convention);
    const int cells = f.size();
    const int first = convention == BoundaryConvention::Standard ? 1 : 0;
    const int last = convention == BoundaryConvention::Standard ? cells - 2 : cells - 1;
    for (int j = first; j <= last; ++j) {
        const double t1 = f[j] * lap_g[j];
        const double t2 = lap_f[j] * g[j];
        const double t3 = df[j + 1] * dg[j + 1];
        const double t4 = df[j] * dg[j];
        const double residual = std::abs(lap_fg[j] - t1 - t2 - t3 - t4);
        gaps.second.value = std::max(gaps.second.value, residual);
        gaps.second.scale = std::max(gaps.second.scale,
                                     std::abs(lap_fg[j]) + std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4));
    }
    return gaps;
}

}  // namespace lagwait
