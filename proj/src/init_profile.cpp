#include "lagwait/init_profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include "lagwait/error.hpp"

namespace lagwait {

namespace {

constexpr double kQuadratureRelTol = 1e-13;

// Tanh-sinh on [0, 1], rescaled: the integrands behave like powers of the
// distance to the support edges, which double-exponential rules absorb.
template <class F>
double integrate(F&& f, double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    thread_local boost::math::quadrature::tanh_sinh<double> rule;
    const double width = hi - lo;
    auto unit = [&](double t) { return f(lo + width * t); };
    return width * rule.integrate(unit, 0.0, 1.0, kQuadratureRelTol);
}

double cos_power_shape(double x, double q) {
    const double offset = 0.5 - std::abs(x);  // exact near the edges
    if (!(offset > 0.0)) return 0.0;
    return std::pow(std::sin(std::numbers::pi * offset), q);
}

}  // namespace

InitialProfile InitialProfile::cos_power(double q) {
    require(q > 0.0, ErrorKind::InvalidArgument, "cos^q profile needs q > 0");
    InitialProfile profile;
    profile.family_ = Family::CosPower;
    profile.q_ = q;
    profile.left_ = -0.5;
    profile.right_ = 0.5;
    // Symmetric: integrate one half and double it.
    const double half = integrate([q](double x) { return cos_power_shape(x, q); }, -0.5, 0.0);
    profile.normalizer_ = 1.0 / (2.0 * half);
    return profile;
}

InitialProfile InitialProfile::tabulated(std::vector<double> x, std::vector<double> u) {
    require(x.size() == u.size() && x.size() >= 3, ErrorKind::InvalidArgument,
            "a tabulated profile needs matching x and u columns with at least 3 rows");
    for (std::size_t j = 0; j < x.size(); ++j) {
        require(std::isfinite(x[j]) && std::isfinite(u[j]), ErrorKind::InvalidArgument, "non-finite table entry");
        require(u[j] >= 0.0, ErrorKind::InvalidArgument, "tabulated density must be nonnegative");
        if (j > 0) require(x[j] > x[j - 1], ErrorKind::InvalidArgument, "tabulated x must be strictly increasing");
        if (j > 0 && j + 1 < x.size()) {
            require(u[j] > 0.0, ErrorKind::InvalidArgument, "tabulated density vanishes inside its support");
        }
    }
    double mass = 0.0;
    for (std::size_t j = 1; j < x.size(); ++j) mass += 0.5 * (u[j] + u[j - 1]) * (x[j] - x[j - 1]);
    require(mass > 0.0, ErrorKind::InvalidArgument, "tabulated density has zero mass");

    InitialProfile profile;
    profile.family_ = Family::Tabulated;
    profile.left_ = x.front();
    profile.right_ = x.back();
    profile.normalizer_ = 1.0 / mass;
    profile.nodes_ = std::move(x);
    profile.values_ = std::move(u);
    return profile;
}

InitialProfile InitialProfile::from_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoError, "cannot open profile CSV " + path.string());
    std::vector<double> x, u;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            // Accept files without a header line.
            if (std::isalpha(static_cast<unsigned char>(line[0]))) continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        double xv = 0.0, uv = 0.0;
        if (!(fields >> xv >> uv)) fail(ErrorKind::IoError, "malformed profile row: " + line);
        x.push_back(xv);
        u.push_back(uv);
    }
    return tabulated(std::move(x), std::move(u));
}

double InitialProfile::density(double x) const {
    if (family_ == Family::CosPower) return normalizer_ * cos_power_shape(x, q_);
    if (x <= left_ || x >= right_) return 0.0;
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - nodes_.begin());
    const double t = (x - nodes_[j - 1]) / (nodes_[j] - nodes_[j - 1]);
    return normalizer_ * ((1.0 - t) * values_[j - 1] + t * values_[j]);
}

double InitialProfile::integral_of_power(double power, double lo, double hi) const {
    lo = std::max(lo, left_);
    hi = std::min(hi, right_);
    if (!(hi > lo)) return 0.0;
    auto integrand = [this, power](double x) { return std::pow(density(x), power); };
    if (family_ == Family::CosPower) {
        // Split at the maximum so each piece has a single endpoint singularity.
        if (lo < 0.0 && hi > 0.0) return integrate(integrand, lo, 0.0) + integrate(integrand, 0.0, hi);
        return integrate(integrand, lo, hi);
    }
    double sum = 0.0;
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), lo);
    double a = lo;
    for (; it != nodes_.end() && *it < hi; ++it) {
        sum += integrate(integrand, a, *it);
        a = *it;
    }
    return sum + integrate(integrand, a, hi);
}

double InitialProfile::cumulative_mass(double x) const {
    if (x <= left_) return 0.0;
    if (x >= right_) return 1.0;
    // Integrate from the nearer edge so the small side keeps its relative accuracy.
    const double mid = 0.5 * (left_ + right_);
    if (x <= mid) return std::clamp(integral_of_power(1.0, left_, x), 0.0, 1.0);
    return std::clamp(1.0 - integral_of_power(1.0, x, right_), 0.0, 1.0);
}

std::vector<double> consistent_positions(const InitialProfile& profile, const MassMesh& mesh) {
    const int cells = mesh.cells();
    const auto xi = mesh.xi();
    std::vector<double> x(static_cast<std::size_t>(cells) + 1);
    x.front() = profile.left();
    x.back() = profile.right();

    constexpr double kBisectionWidth = 1e-8;
    constexpr double kMassTolerance = 1e-10;
    for (int k = 1; k < cells; ++k) {
        const double target = xi[k];
        auto residual = [&](double s) { return profile.cumulative_mass(s) - target; };
        double lo = x[k - 1];
        double hi = profile.right();
        std::uintmax_t max_iter = 200;
        try {
            auto bracket = boost::math::tools::bisect(
                residual, lo, hi, [](double a, double b) { return std::abs(b - a) <= kBisectionWidth; }, max_iter);
            lo = bracket.first;
            hi = bracket.second;
        } catch (const std::exception& e) {
            fail(ErrorKind::NumericFailure, "bisection for x_" + std::to_string(k) + " failed: " + e.what());
        }
        double root = 0.5 * (lo + hi);
        for (int newton = 0; newton < 2; ++newton) {
            const double slope = profile.density(root);
            if (!(slope > 0.0)) break;
            const double next = root - residual(root) / slope;
            root = std::clamp(next, lo, hi);
        }
        const double miss = std::abs(residual(root));
        if (miss > kMassTolerance) {
            fail(ErrorKind::NumericFailure, "consistent position x_" + std::to_string(k) +
                                                " misses its mass by " + std::to_string(miss));
        }
        if (!(root > x[k - 1])) {
            fail(ErrorKind::NumericFailure, "consistent positions not strictly increasing at k=" + std::to_string(k));
        }
        x[k] = root;
    }
    if (!(x[cells] > x[cells - 1])) fail(ErrorKind::NumericFailure, "last consistent position collides with the edge");
    return x;
}

GradedMesh graded_mesh_from_profile(const InitialProfile& profile, int cells) {
    require(cells >= 2, ErrorKind::InvalidArgument, "graded mesh needs K >= 2");
    const double centre = 0.5 * (profile.left() + profile.right());
    const double half = 0.5 * (profile.right() - profile.left());
    std::vector<double> x(static_cast<std::size_t>(cells) + 1);
    for (int k = 0; k <= cells; ++k) {
        // Mirror the second half so the nodes are exactly symmetric about the centre.
        if (2 * k < cells) {
            x[k] = centre - half * std::cos(std::numbers::pi * k / cells);
        } else if (2 * k > cells) {
            x[k] = centre + half * std::cos(std::numbers::pi * (cells - k) / cells);
        } else {
            x[k] = centre;
        }
    }
    x.front() = profile.left();
    x.back() = profile.right();

    std::vector<double> masses(static_cast<std::size_t>(cells));
    for (int j = 0; j < cells; ++j) masses[j] = profile.integral_of_power(1.0, x[j], x[j + 1]);
    return {MassMesh::from_cell_masses(masses), std::move(x)};
}

SteepnessRatio steepness_ratio(const InitialProfile& profile, const EquationSpec& equation, int samples) {
    require(samples >= 100, ErrorKind::InvalidArgument, "steepness ratio needs at least 100 sample points");
    equation.validate();
    double top_power = 0.0, bottom_power = 0.0;
    if (equation.is_pme()) {
        const double m = equation.m();
        top_power = m;
        bottom_power = (3.0 * m - 1.0) / (m + 1.0);
    } else {
        const double alpha = equation.alpha();
        top_power = 1.0 + alpha;
        bottom_power = 1.0 + 0.8 * alpha;
    }

    const double a = profile.left();
    const double width = profile.right() - a;
    constexpr double kFirstOffset = 1e-8;

    auto ratio_at = [&](double ell) {
        const double top = profile.integral_of_power(top_power, a, ell);
        const double bottom = profile.integral_of_power(1.0, a, ell);
        return top / std::pow(bottom, bottom_power);
    };

    SteepnessRatio result;

    // Geometric sample of offsets, accumulated incrementally.
    const double growth = std::pow(1.0 / kFirstOffset, 1.0 / (samples - 1));
    std::vector<double> ells(static_cast<std::size_t>(samples));
    for (int j = 0; j < samples; ++j) ells[j] = a + width * kFirstOffset * std::pow(growth, j);
    ells.back() = profile.right();

    double top = 0.0, bottom = 0.0, previous = a;
    double best = -1.0;
    int best_index = 0;
    for (int j = 0; j < samples; ++j) {
        top += profile.integral_of_power(top_power, previous, ells[j]);
        bottom += profile.integral_of_power(1.0, previous, ells[j]);
        previous = ells[j];
        const double value = top / std::pow(bottom, bottom_power);
        if (value > best) {
            best = value;
            best_index = j;
        }
    }

    // Golden-section refinement between the neighbours of the best sample.
    double lo = best_index > 0 ? ells[best_index - 1] : a + 0.5 * width * kFirstOffset;
    double hi = best_index + 1 < samples ? ells[best_index + 1] : profile.right();
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo), d = lo + inv_phi * (hi - lo);
    double fc = ratio_at(c), fd = ratio_at(d);
    for (int it = 0; it < 60 && (hi - lo) > 1e-14 * width; ++it) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = ratio_at(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = ratio_at(d);
        }
    }
    result.argmax = ells[best_index];
    if (std::max(fc, fd) > best) {
        best = std::max(fc, fd);
        result.argmax = fc > fd ? c : d;
    }
    result.value = best;

    double logs[4];
    for (int j = 0; j < 4; ++j) logs[j] = std::log(ratio_at(a + width * kFirstOffset * std::pow(10.0, j)));
    for (int j = 0; j < 3; ++j) result.decade_growth[j] = logs[j] - logs[j + 1];
    const double finest = result.decade_growth[0];
    const double coarsest = result.decade_growth[2];
    result.divergent = result.decade_growth[0] > 0.0 && result.decade_growth[1] > 0.0 && coarsest > 0.0 &&
                       finest >= 0.5 * coarsest;
    if (result.divergent) result.value = std::numeric_limits<double>::infinity();
    return result;
}

}  // namespace lagwait
