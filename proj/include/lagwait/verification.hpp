#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lagwait {

/// Outcome of one family of randomized checks.
///
/// `worst` is normalized by the scale of the terms involved: the largest
/// |residual| / scale for identities, the smallest gap / scale for
/// inequalities (negative means the inequality was violated by that much).
struct SuiteCheck {
    std::string name;
    long cases = 0;
    long failures = 0;
    double worst = 0.0;
};

struct SuiteReport {
    std::string suite;
    double tolerance = 0.0;
    std::vector<SuiteCheck> checks;
    double seconds = 0.0;

    bool passed() const noexcept;
    long cases() const noexcept;
    long failures() const noexcept;
};

inline constexpr std::uint64_t kVerificationSeed = 20240611;

/// Summation by parts and the first product rule on random meshes, the second
/// product rule on equidistant meshes, each under both boundary conventions.
/// A case fails when |residual| > tolerance * scale.
SuiteReport identity_suite(int cases = 1000, double tolerance = 1e-12, std::uint64_t seed = kVerificationSeed);

/// The elementary two-point inequalities, the weighted and Laplacian
/// inequalities, and both interpolation inequalities, `samples` draws each.
/// A draw fails when gap < -tolerance * scale.
SuiteReport inequality_suite(long samples = 100000, double tolerance = 1e-12,
                             std::uint64_t seed = kVerificationSeed);

/// dz/dt from the density form against -z^2 (x'_{k+1} - x'_k) / delta_kappa
/// from the particle velocities on random states, porous medium and thin film.
SuiteReport consistency_suite(int cases = 1000, double tolerance = 1e-12, std::uint64_t seed = kVerificationSeed);

}  // namespace lagwait
