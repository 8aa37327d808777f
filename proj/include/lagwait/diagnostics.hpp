#pragma once

#include <limits>
#include <string>
#include <vector>

#include "lagwait/equation.hpp"
#include "lagwait/integrator.hpp"
#include "lagwait/mass_mesh.hpp"

namespace lagwait {

/// Constant in front of the dissipation in the global budget: 1 for the
/// porous medium equation, 1/20 - 2 alpha for the thin-film equation.
double budget_constant(const EquationSpec& equation);

/// One budget inequality LHS <= RHS, audited along a trajectory.
///
/// The estimates hold at every time t*: H(t*) + c int_0^{t*} D <= RHS(t*).
/// `lhs` is the largest value of H(t*) + c int_0^{t*} D - (time-dependent part
/// of RHS) over the stored states, and `rhs` the constant part. `literal_lhs`
/// is the separate-supremum form sup_t H + c int_0^T D, kept for reference: it
/// exceeds H(0) for every non-stationary run.
struct BudgetCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // tol_budget times the magnitude of the RHS
    double time_of_max = 0.0;
    double literal_lhs = 0.0;
    bool satisfied = true;
    bool literal_satisfied = true;

    double margin() const noexcept { return rhs + slack - lhs; }
};

/// Porous medium weighted budget for block i (1-based, i < I):
///   H_i(t*) + 1/4 int_0^{t*} D_i <= 8 rho_i^{-2} int_0^{t*} G_{i+1} + H_{i+1}(z(0)),
/// together with the cut-off weight check 0 <= -D_k phi <= 2 / rho_i.
struct WeightedBudget {
    int block = 0;
    BudgetCheck check;
    double weight_slope_min = 0.0;  // min_k -D_k phi
    double weight_slope_max = 0.0;  // max_k -D_k phi
    double weight_slope_bound = 0.0;
    bool weight_ok = true;
    /// xi_{k*_{i+1}} >= 2 rho_i, which the slope bound relies on. It can fail
    /// only for i = I-1, where k*_I = K comes from the stopping rule; the weight
    /// check is then reported but not counted against the run.
    bool weight_premise = true;
};

struct BudgetReport {
    EquationKind kind = EquationKind::PorousMedium;
    double constant = 1.0;
    double tol_budget = 1e-4;
    BudgetCheck global;
    std::vector<WeightedBudget> weighted;
    /// Per stored state: running int_0^t D_I and H_I + c int_0^t D_I.
    std::vector<double> times;
    std::vector<double> dissipation_integral;
    std::vector<double> running_lhs;

    bool satisfied() const noexcept;
};

/// Budgets with trapezoidal time integrals over the stored states. Never
/// throws on a violation; it is reported. Needs at least one stored state.
BudgetReport dissipation_budget(const Trajectory& trajectory, const MassMesh& mesh, const EquationSpec& equation,
                                double tol_budget = 1e-4);

/// Waiting time T = first time x_1 falls below a.
struct WaitingTimeReport {
    double t_est = 0.0;
    bool censored = false;
    /// True when the time comes from a localized event, false for a scan of
    /// the stored states (linear interpolation) or a degenerate start.
    bool localized = false;
    std::string event;
    double threshold = 0.0;
    /// max |x_0(t) - x_0(0)| over stored states with t <= T.
    double edge_excursion = 0.0;
};

WaitingTimeReport waiting_time_estimate(const Trajectory& trajectory, double a);

/// Edge envelopes:
///   porous medium:  2 delta^{(m-1)/(m+1)} sqrt(b t)
///   thin film:      M delta^{1/5} (b^4 t^{1+alpha})^{1/(5+alpha)}
/// with delta the width of the first mass cell.
double edge_envelope(const EquationSpec& equation, double delta, double b_bar, double t, double M = 1.0);

struct EdgeBoundReport {
    bool applicable = false;  // false when b is infinite
    std::string name;         // "pme_envelope" or "tf_envelope"
    double b_bar = 0.0;
    double delta = 0.0;
    double M = 1.0;
    /// First stored time with |x_0(t) - x_0(0)| above the envelope; +inf if none.
    double first_violation = std::numeric_limits<double>::infinity();
    /// max over stored t > 0 of excursion / envelope up to the first violation.
    double peak_ratio_before_violation = 0.0;
    /// Number of stored states with t > 0 before the first violation.
    long states_before_violation = 0;
};

EdgeBoundReport edge_bound_curve(const Trajectory& trajectory, double b_bar, const MassMesh& mesh,
                                 const EquationSpec& equation, double M = 1.0);

/// |x_0(t) - x_0(0)| for each stored state.
std::vector<double> edge_excursions(const Trajectory& trajectory);

}  // namespace lagwait
