#pragma once

#include "lagwait/grid_calculus.hpp"
#include "lagwait/mass_mesh.hpp"

namespace lagwait {

/// Interpolation inequalities of Gagliardo-Nirenberg-Sobolev type on a mass
/// mesh, evaluated as RHS - LHS. Each one should come out nonnegative up to
/// rounding; the Gap scale is the larger of the two sides.
enum class GnsMode { Quadratic, Quartic };

/// Constant A_{2,r} = [2^{1-2r} (1+r)^2 (1+Lambda)]^{(1-r)/(1+r)}.
double gns_constant_quadratic(double r, double mesh_ratio);
/// Constant A_{4,s} = [2^{1-12s} (1+3s)^4 (1+Lambda)^3]^{(1-s)/(1+3s)}.
double gns_constant_quartic(double s, double mesh_ratio);

/// Quadratic mode (exponent in (0,1)):
///   sum_{kappa<k*} f^2 delta <= A_{2,r} (sum_{k<k*} (Df)^2 delta_k)^{(1-r)/(1+r)} (sum f^{2r} delta)^{2/(1+r)}
/// Quartic mode (exponent in (0,1/3)):
///   sum_{kappa<k*} f^4 delta <= A_{4,s} (sum_{k<k*} (Df)^4 delta_k)^{(1-s)/(1+3s)} (sum f^{4s} delta)^{4/(1+3s)}
/// f must be nonnegative with a zero ghost at -1/2; 1 <= k_star <= K.
Gap gns_gap(const GridFunction& f, const MassMesh& mesh, int k_star, GnsMode mode, double exponent);

/// Elementary two-point inequalities for x, y > 0 and p in (0,1), as RHS - LHS.
struct ScalarInequalityGaps {
    Gap diffquot_lower;       // (x^{1+p} - y^{1+p})/(x - y) >= 0
    Gap diffquot;             // ... <= (1+p) 2^{-p} (x+y)^p
    Gap diffquot2;            // |x^{1+p} - y^{1+p} - (1+p) y^p (x-y)| <= p y^{p-1} (x-y)^2
    Gap moreelementary;       // (x^{1+p} - y^{1+p})(x-y) <= (x^p + y^p)(x-y)^2
    Gap evenmoreelementary;   // (x^{2+p} - y^{2+p})(x-y) >= (x^{1+p} + y^{1+p})(x-y)^2
};

/// diffquot needs x != y; the remaining four accept x == y.
ScalarInequalityGaps scalar_inequality_gaps(double x, double y, double p);

/// (a x^{2+p} - b y^{2+p})(x-y) >= (a x^{1+p} + b y^{1+p})(x-y)^2 - |a-b| (x^{2+p} + y^{2+p}) |x-y|
/// for a, b >= 0.
Gap weighted_inequality_gap(double x, double y, double p, double a, double b);

/// Worst cell of
///   |Delta(f^{1+p}) - (1+p) f^p Delta f| <= p f^{p-1} [(D_{kappa+1/2} f)^2 + (D_{kappa-1/2} f)^2]
/// on an equidistant mesh. f must be positive on the cells; ghosts at -1/2,
/// K+1/2 must be nonnegative.
Gap laplace_inequality_gap(const GridFunction& f, const MassMesh& mesh, double p,
                           BoundaryConvention convention = BoundaryConvention::UniformGhost);

}  // namespace lagwait
