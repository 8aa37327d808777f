#include "lagwait/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "lagwait/dynamics.hpp"
#include "lagwait/functionals.hpp"

namespace lagwait {

namespace {

// Running trapezoidal integral of values over times.
std::vector<double> cumulative_trapezoid(const std::vector<double>& times, const std::vector<double>& values) {
    std::vector<double> out(values.size(), 0.0);
    for (std::size_t n = 1; n < values.size(); ++n) {
        out[n] = out[n - 1] + 0.5 * (times[n] - times[n - 1]) * (values[n] + values[n - 1]);
    }
    return out;
}

}  // namespace

double budget_constant(const EquationSpec& equation) {
    return equation.is_pme() ? 1.0 : 1.0 / 20.0 - 2.0 * equation.alpha();
}

bool BudgetReport::satisfied() const noexcept {
    if (!global.satisfied) return false;
    return std::all_of(weighted.begin(), weighted.end(),
                       [](const WeightedBudget& w) { return w.check.satisfied && (w.weight_ok || !w.weight_premise); });
}

BudgetReport dissipation_budget(const Trajectory& trajectory, const MassMesh& mesh, const EquationSpec& equation,
                                double tol_budget) {
    require(!trajectory.samples.empty(), ErrorKind::InvalidArgument, "budget audit needs at least one state");
    BudgetReport report;
    report.kind = equation.kind;
    report.constant = budget_constant(equation);
    report.tol_budget = tol_budget;

    const std::size_t count = trajectory.samples.size();
    std::vector<FunctionalProfile> profiles;
    profiles.reserve(count);
    report.times.reserve(count);
    for (const auto& sample : trajectory.samples) {
        profiles.push_back(functional_profile(densities(sample.state, mesh), mesh, equation));
        report.times.push_back(sample.state.t);
    }
    const int blocks = profiles.front().blocks();

    auto series = [&](auto pick) {
        std::vector<double> out(count);
        for (std::size_t n = 0; n < count; ++n) out[n] = pick(profiles[n]);
        return out;
    };

    // Global budget.
    const auto h_global = series([](const FunctionalProfile& p) { return p.H.back(); });
    const auto d_global = series([](const FunctionalProfile& p) { return p.D.back(); });
    report.dissipation_integral = cumulative_trapezoid(report.times, d_global);
    report.running_lhs.resize(count);
    BudgetCheck& global = report.global;
    global.rhs = h_global.front();
    global.slack = tol_budget * std::abs(global.rhs);
    global.lhs = -std::numeric_limits<double>::infinity();
    double h_sup = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < count; ++n) {
        report.running_lhs[n] = h_global[n] + report.constant * report.dissipation_integral[n];
        if (report.running_lhs[n] > global.lhs) {
            global.lhs = report.running_lhs[n];
            global.time_of_max = report.times[n];
        }
        h_sup = std::max(h_sup, h_global[n]);
    }
    global.literal_lhs = h_sup + report.constant * report.dissipation_integral.back();
    global.satisfied = global.lhs <= global.rhs + global.slack;
    global.literal_satisfied = global.literal_lhs <= global.rhs + global.slack;

    if (!equation.is_pme()) return report;

    // Weighted porous medium budgets, i = 1 .. I-1.
    const auto& dyadic = mesh.dyadic();
    for (int i = 1; i < blocks; ++i) {
        WeightedBudget weighted;
        weighted.block = i;
        const double rho = dyadic[static_cast<std::size_t>(i - 1)].rho;
        const double g_factor = 8.0 / (rho * rho);
        const auto h_i = series([i](const FunctionalProfile& p) { return p.H[i - 1]; });
        const auto d_i = series([i](const FunctionalProfile& p) { return p.D[i - 1]; });
        const auto g_next = series([i](const FunctionalProfile& p) { return p.G[i]; });
        const double h_next0 = profiles.front().H[i];
        const auto d_int = cumulative_trapezoid(report.times, d_i);
        const auto g_int = cumulative_trapezoid(report.times, g_next);

        BudgetCheck& check = weighted.check;
        check.rhs = h_next0;
        check.slack = tol_budget * (std::abs(h_next0) + g_factor * g_int.back());
        check.lhs = -std::numeric_limits<double>::infinity();
        double sup_h = -std::numeric_limits<double>::infinity();
        for (std::size_t n = 0; n < count; ++n) {
            const double value = h_i[n] + 0.25 * d_int[n] - g_factor * g_int[n];
            if (value > check.lhs) {
                check.lhs = value;
                check.time_of_max = report.times[n];
            }
            sup_h = std::max(sup_h, h_i[n]);
        }
        check.literal_lhs = sup_h + 0.25 * d_int.back() - g_factor * g_int.back();
        check.satisfied = check.lhs <= check.rhs + check.slack;
        check.literal_satisfied = check.literal_lhs <= check.rhs + check.slack;

        const GridFunction phi = pme_cutoff_weight(mesh, i);
        const NodeFunction slope = forward_difference(phi, mesh, equation.convention);
        weighted.weight_slope_min = std::numeric_limits<double>::infinity();
        weighted.weight_slope_max = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < slope.size(); ++k) {
            weighted.weight_slope_min = std::min(weighted.weight_slope_min, -slope[k]);
            weighted.weight_slope_max = std::max(weighted.weight_slope_max, -slope[k]);
        }
        weighted.weight_slope_bound = 2.0 / rho;
        weighted.weight_premise = mesh.xi()[static_cast<std::size_t>(dyadic[static_cast<std::size_t>(i)].k_star)] >= 2.0 * rho;
        const double tiny = 1e-12 * weighted.weight_slope_bound;
        weighted.weight_ok =
            weighted.weight_slope_min >= -tiny && weighted.weight_slope_max <= weighted.weight_slope_bound + tiny;
        report.weighted.push_back(weighted);
    }
    return report;
}

std::vector<double> edge_excursions(const Trajectory& trajectory) {
    std::vector<double> out;
    if (trajectory.samples.empty()) return out;
    const double x0 = trajectory.initial().x.front();
    out.reserve(trajectory.samples.size());
    for (const auto& sample : trajectory.samples) out.push_back(std::abs(sample.state.x.front() - x0));
    return out;
}

WaitingTimeReport waiting_time_estimate(const Trajectory& trajectory, double a) {
    require(!trajectory.samples.empty(), ErrorKind::InvalidArgument, "waiting-time estimate needs a trajectory");
    WaitingTimeReport report;
    report.threshold = a;
    report.event = "x_1 < " + std::to_string(a);
    const auto& samples = trajectory.samples;
    const LagrangianState& first = samples.front().state;
    const double x0 = first.x.front();

    auto excursion_until = [&](double t_limit) {
        double peak = 0.0;
        for (const auto& s : samples) {
            if (s.state.t > t_limit) break;
            peak = std::max(peak, std::abs(s.state.x.front() - x0));
        }
        return peak;
    };

    if (first.x.at(1) < a) {
        report.t_est = first.t;
        report.localized = false;
        return report;
    }

    for (const auto& e : trajectory.events) {
        if (e.name != kLeftPackageExit) continue;
        if (e.before.x.at(1) >= a && e.after.x.at(1) < a) {
            report.t_est = e.time;
            report.localized = true;
            report.edge_excursion = std::max(excursion_until(e.time), std::abs(e.before.x.front() - x0));
            return report;
        }
    }

    for (std::size_t n = 1; n < samples.size(); ++n) {
        const double prev = samples[n - 1].state.x.at(1), next = samples[n].state.x.at(1);
        if (next < a) {
            const double t0 = samples[n - 1].state.t, t1 = samples[n].state.t;
            report.t_est = t0 + (t1 - t0) * (prev - a) / (prev - next);
            report.edge_excursion = excursion_until(report.t_est);
            return report;
        }
    }

    report.censored = true;
    report.t_est = samples.back().state.t;
    report.edge_excursion = excursion_until(report.t_est);
    return report;
}

double edge_envelope(const EquationSpec& equation, double delta, double b_bar, double t, double M) {
    if (!(t > 0.0)) return 0.0;
    if (equation.is_pme()) {
        const double m = equation.m();
        return 2.0 * std::pow(delta, (m - 1.0) / (m + 1.0)) * std::sqrt(b_bar * t);
    }
    const double alpha = equation.alpha();
    return M * std::pow(delta, 0.2) * std::pow(std::pow(b_bar, 4.0) * std::pow(t, 1.0 + alpha), 1.0 / (5.0 + alpha));
}

EdgeBoundReport edge_bound_curve(const Trajectory& trajectory, double b_bar, const MassMesh& mesh,
                                 const EquationSpec& equation, double M) {
    EdgeBoundReport report;
    report.name = equation.is_pme() ? "pme_envelope" : "tf_envelope";
    report.b_bar = b_bar;
    report.delta = mesh.cell_widths().front();
    report.M = equation.is_pme() ? 2.0 : M;
    if (!std::isfinite(b_bar) || trajectory.samples.empty()) return report;
    report.applicable = true;

    const double x0 = trajectory.initial().x.front();
    const double t_start = trajectory.initial().t;
    for (const auto& sample : trajectory.samples) {
        const double t = sample.state.t - t_start;
        if (!(t > 0.0)) continue;
        const double excursion = std::abs(sample.state.x.front() - x0);
        const double envelope = edge_envelope(equation, report.delta, b_bar, t, M);
        if (excursion > envelope) {
            report.first_violation = sample.state.t;
            break;
        }
        report.states_before_violation += 1;
        report.peak_ratio_before_violation = std::max(report.peak_ratio_before_violation, excursion / envelope);
    }
    return report;
}

}  // namespace lagwait
