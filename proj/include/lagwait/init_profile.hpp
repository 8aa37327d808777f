#pragma once

#include <filesystem>
#include <vector>

#include "lagwait/equation.hpp"
#include "lagwait/mass_mesh.hpp"

namespace lagwait {

/// A compactly supported, unit-mass initial density on [left, right].
///
/// Two families exist: C_q cos^q(pi x) on |x| < 1/2 with C_q fixed by
/// quadrature, and a tabulated piecewise-linear profile renormalized to unit
/// mass. Value type; immutable.
class InitialProfile {
public:
    enum class Family { CosPower, Tabulated };

    static InitialProfile cos_power(double q);
    /// Nodes must be strictly increasing, values nonnegative and positive in
    /// the interior of the table.
    static InitialProfile tabulated(std::vector<double> x, std::vector<double> u);
    /// CSV with a header line and columns x,u.
    static InitialProfile from_csv(const std::filesystem::path& path);

    Family family() const noexcept { return family_; }
    double exponent() const noexcept { return q_; }
    double normalizer() const noexcept { return normalizer_; }
    double left() const noexcept { return left_; }
    double right() const noexcept { return right_; }

    double density(double x) const;

    /// Integral of density^power over [lo, hi] intersected with the support.
    double integral_of_power(double power, double lo, double hi) const;

    /// M(x) = integral of the density from left() to x, clamped to [0, 1].
    double cumulative_mass(double x) const;

private:
    InitialProfile() = default;

    Family family_ = Family::CosPower;
    double q_ = 0.0;
    double normalizer_ = 1.0;
    double left_ = -0.5;
    double right_ = 0.5;
    std::vector<double> nodes_;
    std::vector<double> values_;
};

/// Positions with M(x_k) = xi_k, x_0 = left, x_K = right.
std::vector<double> consistent_positions(const InitialProfile& profile, const MassMesh& mesh);

struct GradedMesh {
    MassMesh mesh;
    std::vector<double> positions;
};

/// Positions x_k = c - h cos(pi k / K) (midpoint c, half-width h of the
/// support; -cos(pi k/K)/2 for the cos^q family) and the mass mesh they
/// induce. Cell masses are integrated cell by cell so that tiny edge cells
/// keep full relative precision.
GradedMesh graded_mesh_from_profile(const InitialProfile& profile, int cells);

/// Supremum over l of int_a^l u^p1 / (int_a^l u)^p2, with
/// (p1, p2) = (m, (3m-1)/(m+1)) for the porous medium equation and
/// (1 + alpha, 1 + 4 alpha / 5) for the thin-film equation.
///
/// The sup is taken over a geometric sample of l - a from 1e-8 (b-a) to b - a
/// and refined locally around the best sample. The ratio is declared divergent
/// (value = +inf) when its logarithm grows toward l = a over each of the three
/// finest decades without the per-decade growth dying out; this is a numerical
/// heuristic, reported as such.
struct SteepnessRatio {
    double value = 0.0;
    bool divergent = false;
    double argmax = 0.0;
    /// Growth of log(ratio) per decade toward the edge over [1e-8,1e-7],
    /// [1e-7,1e-6], [1e-6,1e-5] (relative offsets).
    double decade_growth[3] = {0.0, 0.0, 0.0};
};

inline constexpr int kDefaultSteepnessSamples = 379;

SteepnessRatio steepness_ratio(const InitialProfile& profile, const EquationSpec& equation,
                               int samples = kDefaultSteepnessSamples);

}  // namespace lagwait
