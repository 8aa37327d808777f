#include "lagwait/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "lagwait/functionals.hpp"

namespace lagwait {

namespace {

using Vec = std::vector<double>;

// Dormand-Prince 5(4) tableau. The system is autonomous, so stage times are not needed.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

// Rosenbrock 4(3) coefficients (Hairer-Wanner RODAS family, as tabulated in
// Boost.Odeint), in the form with stage increments g_i = h k_i.
namespace rb {
constexpr double gamma = 0.25;
constexpr double c21 = -0.5668800000000000e+01, a21 = 0.1544000000000000e+01;
constexpr double c31 = -0.2430093356833875e+01, c32 = -0.2063599157091915e+00;
constexpr double a31 = 0.9466785280815826e+00, a32 = 0.2557011698983284e+00;
constexpr double c41 = -0.1073529058151375e+00, c42 = -0.9594562251023355e+01, c43 = -0.2047028614809616e+02;
constexpr double a41 = 0.3314825187068521e+01, a42 = 0.2896124015972201e+01, a43 = 0.9986419139977817e+00;
constexpr double c51 = 0.7496443313967647e+01, c52 = -0.1024680431464352e+02, c53 = -0.3399990352819905e+02,
                 c54 = 0.1170890893206160e+02;
constexpr double a51 = 0.1221224509226641e+01, a52 = 0.6019134481288629e+01, a53 = 0.1253708332932087e+02,
                 a54 = -0.6878860361058950e+00;
constexpr double c61 = 0.8083246795921522e+01, c62 = -0.7981132988064893e+01, c63 = -0.3152159432874371e+02,
                 c64 = 0.1631930543123136e+02, c65 = -0.6058818238834054e+01;
}  // namespace rb

enum class Verdict { Accepted, ErrorTooLarge, Unordered, EntropyIncrease };

struct Trial {
    Verdict verdict = Verdict::Accepted;
    Vec y;
    double error = 0.0;
    double entropy = 0.0;
};

// Half-bandwidth of the velocity Jacobian: the thin-film velocity at node k
// reads x_{k-2} .. x_{k+2}; the porous medium velocity only x_{k-1} .. x_{k+1}.
constexpr int kHalfBand = 2;

class Stepper {
public:
    Stepper(const MassMesh& mesh, const EquationSpec& equation, const IntegratorConfig& config)
        : mesh_(mesh), equation_(equation), config_(config), method_(config.resolved_method(equation)) {}

    Vec velocity(const Vec& x) const {
        LagrangianState s{0.0, x};
        return rhs(s, mesh_, equation_).values;
    }

    double entropy(const Vec& x) const {
        return global_entropy(densities(LagrangianState{0.0, x}, mesh_), mesh_, equation_);
    }

    double error_exponent() const { return method_ == StepMethod::Rosenbrock ? 0.25 : 0.2; }

    // One step of length h from x. Returns nullopt if a stage or the result
    // leaves the ordered cone. The error estimate is written when requested.
    std::optional<Vec> propose(const Vec& x, double h, double* error_out) {
        auto y = method_ == StepMethod::Rosenbrock ? propose_rosenbrock(x, h, error_out)
                                                   : propose_dormand_prince(x, h, error_out);
        if (y && !is_ordered(*y)) return std::nullopt;
        return y;
    }

    Trial attempt(const Vec& x, double h, double entropy_before) {
        Trial trial;
        auto y = propose(x, h, &trial.error);
        if (!y) {
            trial.verdict = Verdict::Unordered;
            return trial;
        }
        trial.y = std::move(*y);
        if (!(trial.error <= 1.0)) {
            trial.verdict = Verdict::ErrorTooLarge;
            return trial;
        }
        trial.entropy = entropy(trial.y);
        if (config_.guard_entropy &&
            trial.entropy - entropy_before > config_.entropy_guard_factor * config_.rel_tol * std::abs(entropy_before)) {
            trial.verdict = Verdict::EntropyIncrease;
        }
        return trial;
    }

    struct Accepted {
        StepOutcome outcome;
        double entropy = 0.0;
    };

    // Attempts from h_try downwards until a step is accepted.
    Accepted accept(const LagrangianState& state, double entropy_before, double h_try) {
        double h = std::min(h_try, config_.dt_max);
        int rejections = 0;
        const char* last_reason = "none";
        while (true) {
            if (!(h >= config_.dt_min)) {
                throw IntegrationFailure(ErrorKind::StiffnessFailure,
                                         "step size fell below dt_min at t=" + std::to_string(state.t) +
                                             " (last rejection: " + last_reason + ")",
                                         state);
            }
            Trial trial = attempt(state.x, h, entropy_before);
            if (trial.verdict == Verdict::Accepted) {
                if (method_ == StepMethod::DormandPrince) {
                    // First-same-as-last: the final stage is the next first stage.
                    cached_x_ = trial.y;
                    cached_k1_ = std::move(last_k7_);
                }
                Accepted result;
                result.outcome.state = LagrangianState{state.t + h, std::move(trial.y)};
                result.outcome.dt_used = h;
                result.outcome.error_estimate = trial.error;
                result.outcome.rejections = rejections;
                double factor = trial.error > 0.0 ? 0.9 * std::pow(trial.error, -error_exponent()) : 5.0;
                factor = std::clamp(factor, 0.2, rejections > 0 ? 1.0 : 5.0);
                result.outcome.dt_next = std::min(h * factor, config_.dt_max);
                result.entropy = trial.entropy;
                return result;
            }
            last_reason = trial.verdict == Verdict::ErrorTooLarge ? "error estimate"
                          : trial.verdict == Verdict::Unordered   ? "ordering"
                                                                  : "entropy increase";
            ++rejections;
            h *= 0.5;
        }
    }

private:
    double error_norm(const Vec& x, const Vec& y, const Vec& local) const {
        double error = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double scale = config_.abs_tol + config_.rel_tol * std::max(std::abs(x[i]), std::abs(y[i]));
            error = std::max(error, std::abs(local[i]) / scale);
        }
        return std::isfinite(error) ? error : std::numeric_limits<double>::infinity();
    }

    bool stage_ok(const Vec& stage) const {
        if (is_ordered(stage)) return true;
        if (!config_.guard_ordering) {
            throw IntegrationFailure(ErrorKind::OrderingViolation, "a stage broke the particle ordering",
                                     LagrangianState{0.0, stage});
        }
        return false;
    }

    const Vec& first_stage(const Vec& x) {
        if (cached_x_ != x) {
            cached_k1_ = velocity(x);
            cached_x_ = x;
        }
        return cached_k1_;
    }

    std::optional<Vec> propose_dormand_prince(const Vec& x, double h, double* error_out) {
        const Vec k1 = first_stage(x);
        const std::size_t n = x.size();
        Vec stage(n);
        auto combine = [&](std::initializer_list<std::pair<double, const Vec*>> terms) -> bool {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (const auto& [coef, k] : terms) acc += coef * (*k)[i];
                stage[i] = x[i] + h * acc;
            }
            return stage_ok(stage);
        };
        if (!combine({{a21, &k1}})) return std::nullopt;
        const Vec k2 = velocity(stage);
        if (!combine({{a31, &k1}, {a32, &k2}})) return std::nullopt;
        const Vec k3 = velocity(stage);
        if (!combine({{a41, &k1}, {a42, &k2}, {a43, &k3}})) return std::nullopt;
        const Vec k4 = velocity(stage);
        if (!combine({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}})) return std::nullopt;
        const Vec k5 = velocity(stage);
        if (!combine({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}})) return std::nullopt;
        const Vec k6 = velocity(stage);
        if (!combine({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}})) return std::nullopt;
        Vec y = stage;
        if (error_out == nullptr) return y;

        last_k7_ = velocity(y);
        Vec local(n);
        for (std::size_t i = 0; i < n; ++i) {
            local[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * last_k7_[i]);
        }
        *error_out = error_norm(x, y, local);
        return y;
    }

    // Central differences, columns grouped so that no two perturbed columns
    // share a row of the band.
    const Eigen::MatrixXd& jacobian(const Vec& x) {
        if (jacobian_x_ == x) return jacobian_;
        const int n = static_cast<int>(x.size());
        const int stride = 2 * kHalfBand + 1;
        const double rel_step = std::cbrt(std::numeric_limits<double>::epsilon());
        jacobian_.setZero(n, n);
        Vec eps(n);
        for (int j = 0; j < n; ++j) {
            double room = std::numeric_limits<double>::infinity();
            if (j > 0) room = std::min(room, x[j] - x[j - 1]);
            if (j + 1 < n) room = std::min(room, x[j + 1] - x[j]);
            eps[j] = rel_step * room;
        }
        for (int group = 0; group < stride && group < n; ++group) {
            Vec plus = x, minus = x;
            for (int j = group; j < n; j += stride) {
                plus[j] += eps[j];
                minus[j] -= eps[j];
            }
            const Vec f_plus = velocity(plus), f_minus = velocity(minus);
            for (int j = group; j < n; j += stride) {
                for (int k = std::max(0, j - kHalfBand); k <= std::min(n - 1, j + kHalfBand); ++k) {
                    jacobian_(k, j) = (f_plus[k] - f_minus[k]) / (2.0 * eps[j]);
                }
            }
        }
        jacobian_x_ = x;
        return jacobian_;
    }

    // Six-stage stiffly accurate Rosenbrock pair of order 4(3), gamma = 1/4.
    std::optional<Vec> propose_rosenbrock(const Vec& x, double h, double* error_out) {
        const Eigen::Index n = static_cast<Eigen::Index>(x.size());
        const Eigen::Map<const Eigen::VectorXd> x0(x.data(), n);
        Eigen::MatrixXd w = -jacobian(x);
        w.diagonal().array() += 1.0 / (rb::gamma * h);
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(w);

        Vec stage(x.size());
        auto f_at = [&](const Eigen::VectorXd& xs) -> std::optional<Eigen::VectorXd> {
            Eigen::Map<Eigen::VectorXd>(stage.data(), n) = xs;
            if (!stage_ok(stage)) return std::nullopt;
            const Vec v = velocity(stage);
            return Eigen::Map<const Eigen::VectorXd>(v.data(), n);
        };

        auto f = f_at(x0);
        if (!f) return std::nullopt;
        const Eigen::VectorXd g1 = lu.solve(*f);
        if (!(f = f_at(x0 + rb::a21 * g1))) return std::nullopt;
        const Eigen::VectorXd g2 = lu.solve(*f + rb::c21 / h * g1);
        if (!(f = f_at(x0 + rb::a31 * g1 + rb::a32 * g2))) return std::nullopt;
        const Eigen::VectorXd g3 = lu.solve(*f + (rb::c31 * g1 + rb::c32 * g2) / h);
        if (!(f = f_at(x0 + rb::a41 * g1 + rb::a42 * g2 + rb::a43 * g3))) return std::nullopt;
        const Eigen::VectorXd g4 = lu.solve(*f + (rb::c41 * g1 + rb::c42 * g2 + rb::c43 * g3) / h);
        const Eigen::VectorXd x5 = x0 + rb::a51 * g1 + rb::a52 * g2 + rb::a53 * g3 + rb::a54 * g4;
        if (!(f = f_at(x5))) return std::nullopt;
        const Eigen::VectorXd g5 = lu.solve(*f + (rb::c51 * g1 + rb::c52 * g2 + rb::c53 * g3 + rb::c54 * g4) / h);
        const Eigen::VectorXd x6 = x5 + g5;
        if (!(f = f_at(x6))) return std::nullopt;
        const Eigen::VectorXd err =
            lu.solve(*f + (rb::c61 * g1 + rb::c62 * g2 + rb::c63 * g3 + rb::c64 * g4 + rb::c65 * g5) / h);

        Vec y(x.size());
        Eigen::Map<Eigen::VectorXd>(y.data(), n) = x6 + err;
        if (error_out) *error_out = error_norm(x, y, Vec(err.data(), err.data() + n));
        return y;
    }

    const MassMesh& mesh_;
    const EquationSpec& equation_;
    const IntegratorConfig& config_;
    StepMethod method_;
    Vec cached_x_, cached_k1_, last_k7_;
    Vec jacobian_x_;
    Eigen::MatrixXd jacobian_;
};

double dissipation_of(const Vec& x, const MassMesh& mesh, const EquationSpec& equation) {
    return functional_profile(densities(LagrangianState{0.0, x}, mesh), mesh, equation).D.back();
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

std::string to_string(StepMethod method) {
    switch (method) {
        case StepMethod::Auto: return "auto";
        case StepMethod::DormandPrince: return "dormand_prince";
        case StepMethod::Rosenbrock: return "rosenbrock";
    }
    return "unknown";
}

StepMethod parse_step_method(const std::string& name) {
    if (name == "auto") return StepMethod::Auto;
    if (name == "dormand_prince") return StepMethod::DormandPrince;
    if (name == "rosenbrock") return StepMethod::Rosenbrock;
    fail(ErrorKind::ConfigError, "unknown step method '" + name + "'");
}

StepMethod IntegratorConfig::resolved_method(const EquationSpec& equation) const noexcept {
    if (method != StepMethod::Auto) return method;
    return equation.is_pme() ? StepMethod::DormandPrince : StepMethod::Rosenbrock;
}

void IntegratorConfig::validate() const {
    require(rel_tol > 0.0 && abs_tol > 0.0, ErrorKind::InvalidArgument, "tolerances must be positive");
    require(dt_min > 0.0 && dt_min <= dt_max, ErrorKind::InvalidArgument, "need 0 < dt_min <= dt_max");
    require(dt_init > 0.0, ErrorKind::InvalidArgument, "dt_init must be positive");
    require(max_steps > 0, ErrorKind::InvalidArgument, "max_steps must be positive");
}

StepOutcome step_adaptive(const LagrangianState& state, const MassMesh& mesh, const EquationSpec& equation,
                          const IntegratorConfig& config) {
    return step_adaptive(state, mesh, equation, config, config.dt_init);
}

StepOutcome step_adaptive(const LagrangianState& state, const MassMesh& mesh, const EquationSpec& equation,
                          const IntegratorConfig& config, double dt_try) {
    config.validate();
    equation.validate();
    if (!is_ordered(state.x)) fail(ErrorKind::OrderingViolation, "initial state is not ordered");
    Stepper stepper(mesh, equation, config);
    return stepper.accept(state, stepper.entropy(state.x), dt_try).outcome;
}

EventFunction left_package_exit_event(double a, bool terminal) {
    return {kLeftPackageExit, [a](const LagrangianState& s) { return s.x.at(1) - a; }, terminal};
}

Trajectory integrate(const LagrangianState& initial, const MassMesh& mesh, const EquationSpec& equation,
                     const IntegratorConfig& config, const std::vector<double>& schedule,
                     const std::vector<EventFunction>& events) {
    config.validate();
    equation.validate();
    check_supported(mesh, equation);
    if (!is_ordered(initial.x)) fail(ErrorKind::OrderingViolation, "initial state is not ordered");
    if (initial.cells() != mesh.cells()) fail(ErrorKind::ShapeError, "initial state does not match the mesh");
    for (std::size_t j = 0; j < schedule.size(); ++j) {
        require(schedule[j] >= initial.t, ErrorKind::InvalidArgument, "schedule times precede the initial time");
        if (j > 0) require(schedule[j] > schedule[j - 1], ErrorKind::InvalidArgument, "schedule must be increasing");
    }

    Stepper stepper(mesh, equation, config);
    Trajectory trajectory;
    trajectory.t_end = schedule.empty() ? initial.t : schedule.back();
    const double event_tolerance = 1e-6 * std::max(std::abs(trajectory.t_end), std::numeric_limits<double>::min());

    LagrangianState state = initial;
    double entropy = stepper.entropy(state.x);

    std::size_t next_output = 0;
    const bool initial_scheduled = !schedule.empty() && schedule.front() == initial.t;
    if (initial_scheduled) next_output = 1;
    trajectory.samples.push_back({state, entropy, dissipation_of(state.x, mesh, equation), initial_scheduled});

    std::vector<double> event_values;
    for (const auto& e : events) event_values.push_back(e.value(state));

    auto partial = [&trajectory]() { return std::make_shared<const Trajectory>(trajectory); };

    double h = config.dt_init;
    while (next_output < schedule.size()) {
        if (trajectory.accepted_steps >= config.max_steps) {
            throw IntegrationFailure(ErrorKind::NumericFailure, "max_steps exceeded", state, partial());
        }
        const double target = schedule[next_output];
        const double remaining = target - state.t;
        const bool landing = h >= remaining;
        const double h_try = landing ? remaining : h;

        Stepper::Accepted step;
        try {
            step = stepper.accept(state, entropy, h_try);
        } catch (const IntegrationFailure& failure) {
            throw IntegrationFailure(failure.kind(), failure.message(), failure.offending_state(), partial());
        }
        trajectory.accepted_steps += 1;
        trajectory.rejected_steps += step.outcome.rejections;
        LagrangianState next = std::move(step.outcome.state);
        const bool landed = (landing && step.outcome.rejections == 0) ||
                            target - next.t <= 1e-12 * (next.t - state.t);
        if (landed) next.t = target;

        // Event detection and localization by bisection on the step length.
        std::optional<double> stop_time;
        std::optional<LagrangianState> stop_state;
        for (std::size_t e = 0; e < events.size(); ++e) {
            const double g_new = events[e].value(next);
            const int s_old = sign_of(event_values[e]);
            const int s_new = sign_of(g_new);
            if (s_old != 0 && s_new != s_old) {
                double lo = 0.0, hi = next.t - state.t;
                LagrangianState before = state, after = next;
                int iterations = 0;
                while (hi - lo > event_tolerance) {
                    if (++iterations > 200) {
                        throw IntegrationFailure(ErrorKind::NumericFailure,
                                                 "event '" + events[e].name + "' could not be localized", state,
                                                 partial());
                    }
                    const double mid = 0.5 * (lo + hi);
                    auto y = stepper.propose(state.x, mid, nullptr);
                    if (!y) {
                        throw IntegrationFailure(ErrorKind::NumericFailure,
                                                 "ordering lost while localizing event '" + events[e].name + "'",
                                                 state, partial());
                    }
                    LagrangianState probe{state.t + mid, std::move(*y)};
                    if (sign_of(events[e].value(probe)) == s_old) {
                        lo = mid;
                        before = std::move(probe);
                    } else {
                        hi = mid;
                        after = std::move(probe);
                    }
                }
                const double event_time = state.t + 0.5 * (lo + hi);
                trajectory.events.push_back({events[e].name, event_time, before, after});
                if (events[e].terminal && (!stop_time || event_time < *stop_time)) {
                    stop_time = event_time;
                    stop_state = after;
                }
            }
            event_values[e] = g_new;
        }

        if (stop_state) {
            const double stop_entropy = stepper.entropy(stop_state->x);
            trajectory.samples.push_back(
                {*stop_state, stop_entropy, dissipation_of(stop_state->x, mesh, equation), false});
            trajectory.stopped_by_event = true;
            return trajectory;
        }

        state = std::move(next);
        entropy = step.entropy;
        if (config.store_every_step || landed) {
            trajectory.samples.push_back({state, entropy, dissipation_of(state.x, mesh, equation), landed});
        }
        if (landed) {
            ++next_output;
            h = std::max(h, step.outcome.dt_next);
        } else {
            h = step.outcome.dt_next;
        }
    }
    return trajectory;
}

}  // namespace lagwait
