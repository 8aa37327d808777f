#include "lagwait/mass_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lagwait/error.hpp"

namespace lagwait {

namespace {

constexpr double kMinBreakpointGap = 1e-14;

}  // namespace

MassMesh MassMesh::equidistant(int cells) {
    require(cells >= 2, ErrorKind::InvalidArgument, "equidistant mesh needs K >= 2, got " + std::to_string(cells));
    std::vector<double> xi(static_cast<std::size_t>(cells) + 1);
    for (int k = 0; k <= cells; ++k) xi[k] = static_cast<double>(k) / cells;
    return from_breakpoints(std::move(xi));
}

MassMesh MassMesh::from_breakpoints(std::vector<double> xi) {
    require(xi.size() >= 3, ErrorKind::InvalidArgument, "a mass mesh needs at least 3 breakpoints");
    require(xi.front() == 0.0 && xi.back() == 1.0, ErrorKind::InvalidMesh, "breakpoints must start at 0 and end at 1");
    std::vector<double> widths(xi.size() - 1);
    for (std::size_t j = 0; j + 1 < xi.size(); ++j) {
        const double gap = xi[j + 1] - xi[j];
        if (!(gap > kMinBreakpointGap)) {
            fail(ErrorKind::InvalidMesh,
                 "breakpoints not strictly increasing at index " + std::to_string(j + 1));
        }
        widths[j] = gap;
    }
    return MassMesh(std::move(xi), std::move(widths));
}

MassMesh MassMesh::from_cell_masses(std::span<const double> masses) {
    require(masses.size() >= 2, ErrorKind::InvalidArgument, "a mass mesh needs at least 2 cells");
    double total = 0.0;
    for (std::size_t j = 0; j < masses.size(); ++j) {
        if (!(masses[j] > 0.0) || !std::isfinite(masses[j])) {
            fail(ErrorKind::InvalidMesh, "cell mass " + std::to_string(j) + " is not positive");
        }
        total += masses[j];
    }
    std::vector<double> widths(masses.begin(), masses.end());
    for (double& w : widths) w /= total;
    std::vector<double> xi(widths.size() + 1, 0.0);
    double running = 0.0;
    for (std::size_t j = 0; j < widths.size(); ++j) {
        running += widths[j];
        xi[j + 1] = running;
    }
    // Cells narrower than half an ulp of 1 can tie xi_{K-1} with xi_K; the
    // widths stay authoritative for every difference operator.
    xi.back() = 1.0;
    return MassMesh(std::move(xi), std::move(widths));
}

MassMesh::MassMesh(std::vector<double> xi, std::vector<double> widths)
    : xi_(std::move(xi)), cell_widths_(std::move(widths)) {
    const std::size_t cells = cell_widths_.size();
    dual_standard_.assign(cells + 1, 0.0);
    dual_uniform_.assign(cells + 1, 0.0);
    for (std::size_t k = 0; k <= cells; ++k) {
        const double right = k < cells ? cell_widths_[k] : 0.0;
        const double left = k > 0 ? cell_widths_[k - 1] : 0.0;
        dual_standard_[k] = 0.5 * (right + left);
        dual_uniform_[k] = dual_standard_[k];
    }
    dual_uniform_.front() = cell_widths_.front();
    dual_uniform_.back() = cell_widths_.back();

    ratio_ = 1.0;
    for (std::size_t k = 1; k < cells; ++k) {
        const double a = cell_widths_[k] / cell_widths_[k - 1];
        ratio_ = std::max({ratio_, a, 1.0 / a});
    }

    const double uniform = 1.0 / static_cast<double>(cells);
    equidistant_ = std::all_of(cell_widths_.begin(), cell_widths_.end(),
                               [uniform](double w) { return std::abs(w - uniform) <= 1e-12 * uniform; });

    dyadic_ = dyadic_decomposition(xi_);
}

std::vector<DyadicBlock> dyadic_decomposition(std::span<const double> xi) {
    const int cells = static_cast<int>(xi.size()) - 1;
    std::vector<DyadicBlock> blocks;
    blocks.push_back({1, xi[1]});
    while (true) {
        const int previous = blocks.back().k_star;
        const double target = 2.0 * xi[previous];
        if (target >= 1.0) {
            blocks.push_back({cells, 1.0});
            break;
        }
        int next = previous + 1;
        while (xi[next] < target) ++next;
        blocks.push_back({next, xi[next]});
    }
    return blocks;
}

std::vector<DyadicBlock> dyadic_decomposition(const MassMesh& mesh) {
    return dyadic_decomposition(mesh.xi());
}

}  // namespace lagwait
