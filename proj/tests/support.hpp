#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "lagwait/grid_calculus.hpp"
#include "lagwait/mass_mesh.hpp"

namespace testing {

/// Hand-rolled generators over a fixed-seed engine.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    bool coin() { return integer(0, 1) == 1; }

    std::vector<double> breakpoints(int cells) {
        std::vector<double> masses(static_cast<std::size_t>(cells));
        double total = 0.0;
        for (double& m : masses) total += (m = log_uniform(1e-2, 1.0));
        std::vector<double> xi{0.0};
        double acc = 0.0;
        for (int j = 0; j < cells - 1; ++j) xi.push_back((acc += masses[j]) / total);
        xi.push_back(1.0);
        return xi;
    }

    lagwait::MassMesh mesh(int cells) { return lagwait::MassMesh::from_breakpoints(breakpoints(cells)); }

    lagwait::GridFunction signed_function(int cells) {
        lagwait::GridFunction f;
        for (int j = 0; j < cells; ++j) f.values.push_back(uniform(-1.0, 1.0));
        f.ghosts = {uniform(-1, 1), uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
        return f;
    }

    std::vector<double> ordered_positions(int cells) {
        std::vector<double> x{uniform(-1.0, 0.0)};
        for (int k = 0; k < cells; ++k) x.push_back(x.back() + log_uniform(1e-3, 1.0) / cells);
        return x;
    }

private:
    std::mt19937_64 rng_;
};

/// Reference operators straight from the breakpoints, in long double, with the
/// boundary dual widths delta_0 = xi_1 / 2, delta_K = (1 - xi_{K-1}) / 2
/// (uniform_ghost: delta_0 = xi_1, delta_K = 1 - xi_{K-1}).
struct Oracle {
    std::vector<long double> xi;
    bool uniform_ghost = false;

    int cells() const { return static_cast<int>(xi.size()) - 1; }
    long double cell(int j) const { return xi[j + 1] - xi[j]; }
    long double dual(int k) const {
        const int K = cells();
        if (k == 0) return uniform_ghost ? cell(0) : cell(0) / 2;
        if (k == K) return uniform_ghost ? cell(K - 1) : cell(K - 1) / 2;
        return (cell(k - 1) + cell(k)) / 2;
    }
    static long double value(const lagwait::GridFunction& f, int j) {
        if (j == -1) return f.ghosts.left;
        if (j == f.size()) return f.ghosts.right;
        if (j == -2) return f.ghosts.outer_left;
        if (j == f.size() + 1) return f.ghosts.outer_right;
        return f[j];
    }
    long double D(const lagwait::GridFunction& f, int k) const { return (value(f, k) - value(f, k - 1)) / dual(k); }
    long double laplacian(const lagwait::GridFunction& f, int j) const { return (D(f, j + 1) - D(f, j)) / cell(j); }
};

inline Oracle oracle_of(const lagwait::MassMesh& mesh, bool uniform_ghost = false) {
    Oracle o;
    for (double v : mesh.xi()) o.xi.push_back(v);
    o.uniform_ghost = uniform_ghost;
    return o;
}

}  // namespace testing
