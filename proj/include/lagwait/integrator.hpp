#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lagwait/dynamics.hpp"
#include "lagwait/equation.hpp"
#include "lagwait/error.hpp"
#include "lagwait/mass_mesh.hpp"

namespace lagwait {

/// Time stepper. DormandPrince is an explicit 5(4) pair; Rosenbrock is a
/// linearly implicit 4(3) pair with a finite-difference Jacobian, for the
/// stiff thin-film runs on graded meshes. Auto picks DormandPrince for the
/// porous medium equation and Rosenbrock for the thin-film equation.
enum class StepMethod { Auto, DormandPrince, Rosenbrock };

std::string to_string(StepMethod method);
/// Parses "auto", "dormand_prince", "rosenbrock"; throws config-error otherwise.
StepMethod parse_step_method(const std::string& name);

struct IntegratorConfig {
    StepMethod method = StepMethod::Auto;
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    double dt_init = 1e-9;
    double dt_min = 1e-22;
    double dt_max = 1e-3;
    long max_steps = 20'000'000;
    /// Reject a step whose stages or result break x_k < x_{k+1}.
    bool guard_ordering = true;
    /// Reject a step that raises H_I by more than entropy_guard_factor * rel_tol * |H_I|.
    bool guard_entropy = true;
    double entropy_guard_factor = 10.0;
    /// Keep every accepted step in the trajectory (needed for budget audits).
    bool store_every_step = true;

    void validate() const;
    /// The concrete stepper used for the given equation.
    StepMethod resolved_method(const EquationSpec& equation) const noexcept;
};

/// One accepted adaptive step.
struct StepOutcome {
    LagrangianState state;
    double dt_used = 0.0;
    double error_estimate = 0.0;
    double dt_next = 0.0;
    int rejections = 0;
};

/// One embedded step with proportional step control. Rejected steps are
/// halved: error above tolerance, a broken ordering in any stage or in the
/// result, or an entropy increase beyond the guard.
/// Throws StiffnessFailure when the step falls below dt_min.
StepOutcome step_adaptive(const LagrangianState& state, const MassMesh& mesh, const EquationSpec& equation,
                          const IntegratorConfig& config);
StepOutcome step_adaptive(const LagrangianState& state, const MassMesh& mesh, const EquationSpec& equation,
                          const IntegratorConfig& config, double dt_try);

/// g(state); an event fires where g changes sign between accepted steps.
struct EventFunction {
    std::string name;
    std::function<double(const LagrangianState&)> value;
    /// Stop the integration at the event.
    bool terminal = false;
};

/// g = x_1 - a: the first mass package has left [a, ...).
inline constexpr const char* kLeftPackageExit = "left_package_exit";
EventFunction left_package_exit_event(double a, bool terminal = false);

struct EventRecord {
    std::string name;
    double time = 0.0;
    LagrangianState before;  // last state with the old sign
    LagrangianState after;   // first state with the new sign
};

struct TrajectorySample {
    LagrangianState state;
    double entropy = 0.0;      // H_I
    double dissipation = 0.0;  // D_I
    bool scheduled = false;    // lands on a requested output time
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::vector<EventRecord> events;
    long accepted_steps = 0;
    long rejected_steps = 0;
    double t_end = 0.0;
    bool stopped_by_event = false;

    const LagrangianState& initial() const { return samples.front().state; }
    const LagrangianState& final() const { return samples.back().state; }
};

/// Failure during integration; carries the state that could not be advanced
/// and everything integrated before it.
class IntegrationFailure : public Error {
public:
    IntegrationFailure(ErrorKind kind, const std::string& message, LagrangianState offending,
                       std::shared_ptr<const Trajectory> partial = nullptr)
        : Error(kind, message), offending_(std::move(offending)), partial_(std::move(partial)) {}

    const LagrangianState& offending_state() const noexcept { return offending_; }
    const std::shared_ptr<const Trajectory>& partial() const noexcept { return partial_; }

private:
    LagrangianState offending_;
    std::shared_ptr<const Trajectory> partial_;
};

/// Integrates from state.t to the last schedule time, storing a sample at
/// every schedule time (reached by a shortened landing step) and, if
/// configured, at every accepted step. Sign changes of the event functions are
/// localized by bisection on the step length to 1e-6 * t_end.
Trajectory integrate(const LagrangianState& initial, const MassMesh& mesh, const EquationSpec& equation,
                     const IntegratorConfig& config, const std::vector<double>& schedule,
                     const std::vector<EventFunction>& events = {});

}  // namespace lagwait
