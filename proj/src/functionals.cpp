#include "lagwait/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lagwait/error.hpp"

namespace lagwait {

namespace {

// Prefix sums over cells: prefix[j] = sum_{c<j} cell_terms[c].
std::vector<double> prefix(const std::vector<double>& terms) {
    std::vector<double> out(terms.size() + 1, 0.0);
    for (std::size_t j = 0; j < terms.size(); ++j) out[j + 1] = out[j] + terms[j];
    return out;
}

}  // namespace

FunctionalProfile functional_profile(const GridFunction& z, const MassMesh& mesh, const EquationSpec& equation) {
    const int cells = mesh.cells();
    if (z.size() != cells) fail(ErrorKind::ShapeError, "grid function and mesh differ in length");
    for (double v : z.values) {
        if (v < 0.0) fail(ErrorKind::DomainError, "functionals need a nonnegative density");
    }
    const auto widths = mesh.cell_widths();
    const auto dual = mesh.dual_widths(equation.convention);
    GridFunction zz = z;
    zz.ghosts = {};

    std::vector<double> h_terms(cells), g_terms(cells), d_terms;
    FunctionalProfile profile;
    profile.kind = equation.kind;
    profile.exponent = equation.exponent;

    if (equation.is_pme()) {
        const double m = equation.m();
        for (int j = 0; j < cells; ++j) {
            h_terms[j] = std::pow(zz[j], m - 1.0) / (m - 1.0) * widths[j];
            g_terms[j] = std::pow(zz[j], 2.0 * m) * widths[j];
        }
        // Node terms: index k contributes to every block with k < k*_i.
        const NodeFunction d = forward_difference(pow(zz, m), mesh, equation.convention);
        d_terms.resize(static_cast<std::size_t>(cells) + 1);
        for (int k = 0; k <= cells; ++k) d_terms[k] = d[k] * d[k] * dual[k];
    } else {
        const double alpha = equation.alpha();
        const GridFunction lap = discrete_laplacian(zz, mesh, equation.convention);
        const NodeFunction d = forward_difference(zz, mesh, equation.convention);
        d_terms.resize(static_cast<std::size_t>(cells));
        for (int j = 0; j < cells; ++j) {
            const double zj = zz[j];
            h_terms[j] = std::pow(zj, alpha) / alpha * widths[j];
            g_terms[j] = std::pow(zj, 5.0 + alpha) * widths[j];
            const double d_left = d[j] * d[j], d_right = d[j + 1] * d[j + 1];
            d_terms[j] = (std::pow(zj, 3.0 + alpha) * lap[j] * lap[j] +
                          0.5 * std::pow(zj, 1.0 + alpha) * (d_left * d_left + d_right * d_right)) *
                         widths[j];
        }
    }

    const auto h_sum = prefix(h_terms), g_sum = prefix(g_terms), d_sum = prefix(d_terms);
    for (const DyadicBlock& block : mesh.dyadic()) {
        profile.H.push_back(h_sum[block.k_star]);
        profile.G.push_back(g_sum[block.k_star]);
        // Porous medium: nodes k = 0..k*-1; thin film: cells below k*. Both are
        // the first k* entries.
        profile.D.push_back(d_sum[block.k_star]);
    }
    return profile;
}

double global_entropy(const GridFunction& z, const MassMesh& mesh, const EquationSpec& equation) {
    const auto widths = mesh.cell_widths();
    double sum = 0.0;
    if (equation.is_pme()) {
        const double m = equation.m();
        for (int j = 0; j < z.size(); ++j) sum += std::pow(z[j], m - 1.0) * widths[j];
        return sum / (m - 1.0);
    }
    const double alpha = equation.alpha();
    for (int j = 0; j < z.size(); ++j) sum += std::pow(z[j], alpha) * widths[j];
    return sum / alpha;
}

double initial_entropy_ratio(const GridFunction& z, const MassMesh& mesh, const EquationSpec& equation) {
    const FunctionalProfile profile = functional_profile(z, mesh, equation);
    const auto& blocks = mesh.dyadic();
    double exponent = 0.0;
    int first = 0;
    if (equation.is_pme()) {
        const double m = equation.m();
        exponent = (3.0 * m - 1.0) / (m + 1.0);
    } else {
        exponent = 1.0 + 0.8 * equation.alpha();
        first = 1;
    }
    double b = 0.0;
    for (std::size_t i = static_cast<std::size_t>(first); i < blocks.size(); ++i) {
        b = std::max(b, std::pow(blocks[i].rho, -exponent) * profile.H[i]);
    }
    return b;
}

GridFunction pme_cutoff_weight(const MassMesh& mesh, int block) {
    const auto& blocks = mesh.dyadic();
    const int count = static_cast<int>(blocks.size());
    if (block < 1 || block >= count) fail(ErrorKind::InvalidArgument, "cut-off weight needs 1 <= i < I");
    const int k_lo = blocks[block - 1].k_star;
    const int k_hi = blocks[block].k_star;
    const double rho = blocks[block - 1].rho;
    const auto xi = mesh.xi();
    GridFunction phi;
    phi.values.assign(static_cast<std::size_t>(mesh.cells()), 0.0);
    for (int j = 0; j < mesh.cells(); ++j) {
        // Cell j is kappa = j + 1/2, i.e. k - 1/2 with k = j + 1.
        const int k = j + 1;
        if (k <= k_lo) {
            phi[j] = 1.0;
        } else if (k < k_hi) {
            phi[j] = (2.0 * rho - xi[k]) / rho;
        }
    }
    phi.ghosts.outer_left = phi.ghosts.left = phi.values.front();
    phi.ghosts.outer_right = phi.ghosts.right = phi.values.back();
    return phi;
}

}  // namespace lagwait
