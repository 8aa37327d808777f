#include "lagwait/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lagwait/error.hpp"

namespace lagwait {

namespace {

// x^e - y^e without cancellation for x close to y (x, y > 0).
double pow_difference(double x, double y, double e) {
    return std::pow(y, e) * std::expm1(e * std::log1p((x - y) / y));
}

// (1+u)^e - 1 - e u for u >= -1. Uses the binomial series when |u| is small,
// where the direct form loses all digits to cancellation.
double second_order_remainder(double u, double e) {
    if (std::abs(u) < 0.125) {
        double coefficient = e * (e - 1.0) / 2.0;
        double power = u * u;
        double sum = 0.0;
        for (int n = 2; n < 60; ++n) {
            const double term = coefficient * power;
            sum += term;
            if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
            coefficient *= (e - n) / (n + 1.0);
            power *= u;
        }
        return sum;
    }
    return std::pow(1.0 + u, e) - 1.0 - e * u;
}

void check_positive_pair(double x, double y, double p) {
    if (!(x > 0.0) || !(y > 0.0)) fail(ErrorKind::DomainError, "x and y must be positive");
    if (!(p > 0.0 && p < 1.0)) fail(ErrorKind::DomainError, "p must lie in (0,1)");
}

Gap make_gap(double rhs, double lhs) {
    return {rhs - lhs, std::max(std::abs(rhs), std::abs(lhs))};
}

}  // namespace

double gns_constant_quadratic(double r, double mesh_ratio) {
    return std::pow(std::pow(2.0, 1.0 - 2.0 * r) * (1.0 + r) * (1.0 + r) * (1.0 + mesh_ratio), (1.0 - r) / (1.0 + r));
}

double gns_constant_quartic(double s, double mesh_ratio) {
    const double base = std::pow(2.0, 1.0 - 12.0 * s) * std::pow(1.0 + 3.0 * s, 4) * std::pow(1.0 + mesh_ratio, 3);
    return std::pow(base, (1.0 - s) / (1.0 + 3.0 * s));
}

Gap gns_gap(const GridFunction& f, const MassMesh& mesh, int k_star, GnsMode mode, double exponent) {
    if (f.size() != mesh.cells()) fail(ErrorKind::ShapeError, "grid function and mesh differ in length");
    if (k_star < 1 || k_star > mesh.cells()) fail(ErrorKind::InvalidArgument, "k* out of range");
    if (mode == GnsMode::Quadratic && !(exponent > 0.0 && exponent < 1.0)) {
        fail(ErrorKind::InvalidArgument, "quadratic GNS exponent must lie in (0,1)");
    }
    if (mode == GnsMode::Quartic && !(exponent > 0.0 && exponent < 1.0 / 3.0)) {
        fail(ErrorKind::InvalidArgument, "quartic GNS exponent must lie in (0,1/3)");
    }
    if (f.ghosts.left != 0.0) fail(ErrorKind::DomainError, "GNS needs f_{-1/2} = 0");
    for (double v : f.values) {
        if (v < 0.0) fail(ErrorKind::DomainError, "GNS needs a nonnegative grid function");
    }

    const auto widths = mesh.cell_widths();
    const auto dual = mesh.dual_widths(BoundaryConvention::Standard);
    const double power = mode == GnsMode::Quadratic ? 2.0 : 4.0;
    const double low_power = power * exponent;

    double lhs = 0.0, low_sum = 0.0, gradient_sum = 0.0;
    for (int j = 0; j < k_star; ++j) {
        lhs += std::pow(f[j], power) * widths[j];
        low_sum += std::pow(f[j], low_power) * widths[j];
    }
    for (int k = 0; k < k_star; ++k) {
        const double left = k == 0 ? f.ghosts.left : f[k - 1];
        const double d = (f[k] - left) / dual[k];
        gradient_sum += std::pow(std::abs(d), power) * dual[k];
    }

    double rhs = 0.0;
    if (mode == GnsMode::Quadratic) {
        const double r = exponent;
        rhs = gns_constant_quadratic(r, mesh.ratio()) * std::pow(gradient_sum, (1.0 - r) / (1.0 + r)) *
              std::pow(low_sum, 2.0 / (1.0 + r));
    } else {
        const double s = exponent;
        rhs = gns_constant_quartic(s, mesh.ratio()) * std::pow(gradient_sum, (1.0 - s) / (1.0 + 3.0 * s)) *
              std::pow(low_sum, 4.0 / (1.0 + 3.0 * s));
    }
    return make_gap(rhs, lhs);
}

ScalarInequalityGaps scalar_inequality_gaps(double x, double y, double p) {
    check_positive_pair(x, y, p);
    ScalarInequalityGaps gaps;

    if (x == y) fail(ErrorKind::DomainError, "the difference quotient inequality needs x != y");
    const double quotient = pow_difference(x, y, 1.0 + p) / (x - y);
    gaps.diffquot_lower = make_gap(quotient, 0.0);
    gaps.diffquot = make_gap((1.0 + p) * std::pow(0.5 * (x + y), p), quotient);

    const double u = (x - y) / y;
    const double taylor_remainder = std::pow(y, 1.0 + p) * second_order_remainder(u, 1.0 + p);
    gaps.diffquot2 = make_gap(p * std::pow(y, p - 1.0) * (x - y) * (x - y), std::abs(taylor_remainder));

    const double d = x - y;
    gaps.moreelementary = make_gap((std::pow(x, p) + std::pow(y, p)) * d * d, pow_difference(x, y, 1.0 + p) * d);
    // >= inequality: the larger side is the left one.
    gaps.evenmoreelementary =
        make_gap(pow_difference(x, y, 2.0 + p) * d, (std::pow(x, 1.0 + p) + std::pow(y, 1.0 + p)) * d * d);
    return gaps;
}

Gap weighted_inequality_gap(double x, double y, double p, double a, double b) {
    check_positive_pair(x, y, p);
    if (a < 0.0 || b < 0.0) fail(ErrorKind::DomainError, "weights must be nonnegative");
    const double d = x - y;
    const double x2 = std::pow(x, 2.0 + p), y2 = std::pow(y, 2.0 + p);
    const double x1 = std::pow(x, 1.0 + p), y1 = std::pow(y, 1.0 + p);
    const double lhs = (a * x2 - b * y2) * d;
    const double main = (a * x1 + b * y1) * d * d;
    const double penalty = std::abs(a - b) * (x2 + y2) * std::abs(d);
    return {lhs - (main - penalty), std::max({std::abs(lhs), std::abs(main), std::abs(penalty)})};
}

Gap laplace_inequality_gap(const GridFunction& f, const MassMesh& mesh, double p, BoundaryConvention convention) {
    if (f.size() != mesh.cells()) fail(ErrorKind::ShapeError, "grid function and mesh differ in length");
    if (!mesh.is_equidistant()) fail(ErrorKind::UnsupportedMesh, "the Laplacian inequality needs an equidistant mesh");
    if (!(p > 0.0 && p < 1.0)) fail(ErrorKind::DomainError, "p must lie in (0,1)");
    for (double v : f.values) {
        if (!(v > 0.0)) fail(ErrorKind::DomainError, "the Laplacian inequality needs a positive grid function");
    }
    if (f.ghosts.left < 0.0 || f.ghosts.right < 0.0) fail(ErrorKind::DomainError, "ghosts must be nonnegative");

    const auto widths = mesh.cell_widths();
    const auto dual = mesh.dual_widths(convention);
    Gap worst{0.0, 0.0};
    bool first = true;
    for (int j = 0; j < f.size(); ++j) {
        const double c = f[j];
        const double left = f.at_extended(j - 1);
        const double right = f.at_extended(j + 1);
        // Delta(f^{1+p}) - (1+p) f^p Delta f splits into one second-order
        // Taylor remainder per neighbour.
        const double scale_c = std::pow(c, 1.0 + p);
        const double rem_right = scale_c * second_order_remainder((right - c) / c, 1.0 + p) / dual[j + 1];
        const double rem_left = scale_c * second_order_remainder((left - c) / c, 1.0 + p) / dual[j];
        const double lhs = std::abs(rem_right + rem_left) / widths[j];
        const double d_right = (right - c) / dual[j + 1];
        const double d_left = (c - left) / dual[j];
        const double rhs = p * std::pow(c, p - 1.0) * (d_right * d_right + d_left * d_left);
        const Gap g = make_gap(rhs, lhs);
        if (first || g.value / std::max(g.scale, 1e-300) < worst.value / std::max(worst.scale, 1e-300)) {
            worst = g;
            first = false;
        }
    }
    return worst;
}

}  // namespace lagwait
