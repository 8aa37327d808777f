#pragma once

#include <span>
#include <vector>

namespace lagwait {

/// How the dual width at the two boundary nodes is formed.
///
/// Standard uses the ghost convention delta_{-1/2} = delta_{K+1/2} = 0, so
/// delta_0 = xi_1 / 2 and delta_K = (1 - xi_{K-1}) / 2. UniformGhost pretends
/// the ghost cells have the same width as their neighbours, giving
/// delta_0 = delta_{1/2} and delta_K = delta_{K-1/2}.
enum class BoundaryConvention { Standard, UniformGhost };

/// One entry (k*_i, rho_i) of the dyadic index sequence.
struct DyadicBlock {
    int k_star = 0;
    double rho = 0.0;

    friend bool operator==(const DyadicBlock&, const DyadicBlock&) = default;
};

/// A fixed partition 0 = xi_0 < xi_1 < ... < xi_K = 1 of mass space.
///
/// Cell widths are stored alongside the breakpoints rather than recomputed
/// from them: a mesh built from cell masses keeps full relative precision of
/// tiny boundary cells even where 1 - xi_{K-1} would cancel catastrophically.
/// Immutable after construction.
class MassMesh {
public:
    /// xi_k = k / K.
    static MassMesh equidistant(int cells);

    /// Breakpoints must start at 0, end at 1, and have gaps > 1e-14.
    static MassMesh from_breakpoints(std::vector<double> xi);

    /// Cell masses are normalized to unit total; each must be positive and finite.
    static MassMesh from_cell_masses(std::span<const double> masses);

    int cells() const noexcept { return static_cast<int>(cell_widths_.size()); }

    std::span<const double> xi() const noexcept { return xi_; }

    /// delta_kappa for kappa = 1/2 .. K-1/2 (index kappa - 1/2).
    std::span<const double> cell_widths() const noexcept { return cell_widths_; }

    /// delta_k for k = 0 .. K under the chosen boundary convention.
    std::span<const double> dual_widths(BoundaryConvention convention = BoundaryConvention::Standard) const noexcept {
        return convention == BoundaryConvention::Standard ? dual_standard_ : dual_uniform_;
    }

    /// Mesh ratio Lambda >= 1.
    double ratio() const noexcept { return ratio_; }

    const std::vector<DyadicBlock>& dyadic() const noexcept { return dyadic_; }

    /// All cells equal to 1/K within a relative 1e-12.
    bool is_equidistant() const noexcept { return equidistant_; }

private:
    MassMesh(std::vector<double> xi, std::vector<double> widths);

    std::vector<double> xi_;
    std::vector<double> cell_widths_;
    std::vector<double> dual_standard_;
    std::vector<double> dual_uniform_;
    double ratio_ = 1.0;
    std::vector<DyadicBlock> dyadic_;
    bool equidistant_ = false;
};

/// The two-bullet construction: k*_1 = 1; stop with k*_I = K once
/// 2 xi_{k*_{i-1}} >= 1, otherwise k*_i is the first k with
/// xi_k >= 2 xi_{k*_{i-1}}. rho_i = xi_{k*_i} for i < I and rho_I = 1.
std::vector<DyadicBlock> dyadic_decomposition(std::span<const double> xi);
std::vector<DyadicBlock> dyadic_decomposition(const MassMesh& mesh);

}  // namespace lagwait
