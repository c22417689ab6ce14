#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace amphibsim {

// Right-hand side of y' = f(t, y); writes the derivative into dydt (same
// length as y).
using DerivFn = std::function<void(double t, std::span<const double> y,
                                   std::span<double> dydt)>;

struct IntegratorConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double h_init = 1e-3;        // first attempted step [s]
    double h_min = 1e-12;        // below this a rejected step aborts
    double h_max = 0.25;         // growth ceiling [s]
    std::size_t max_steps = 2000000;  // accepted + rejected budget
    double event_tol = 1e-10;    // event time localization width [s]

    void validate() const;  // throws ValidationError naming violated fields
};

enum class GuardDirection { rising, falling, any };

// A scalar guard g(t, y); an event is a sign change of g across an accepted
// step, localized by bisection on the dense interpolant.  Touching zero
// without a sign change (grazing) is not an event.  The sign convention is
// g >= 0 positive, so rising means g going from negative to non-negative.
struct EventSpec {
    std::function<double(double t, std::span<const double> y)> guard;
    GuardDirection direction = GuardDirection::any;
    int tag = 0;
};

struct EventRecord {
    double t = 0.0;
    int tag = 0;
    bool rising = false;
    std::vector<double> state;
};

// Integration output: states at the requested sample times (plus any sample
// exactly at t0), all localized events, and the final carried state.
struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::vector<EventRecord> events;
    double final_time = 0.0;
    std::vector<double> final_state;
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;
    std::size_t deriv_evals = 0;
    double h_last = 0.0;  // step size carried at exit, reusable across calls
};

// One embedded 5(4) step from (t, y) with step h.  Returns the 5th-order
// solution and the per-component local error estimate.  Throws
// IntegrationError if the derivative comes back non-finite.
struct StepResult {
    std::vector<double> y_new;
    std::vector<double> error;
};
StepResult step_embedded(const DerivFn& f, double t, std::span<const double> y, double h);

// Adaptive integration from t0 to t_end (t_end >= t0).  Accepted steps never
// straddle an event: when a guard changes sign the step is truncated at the
// localized crossing, the event is recorded, and integration restarts from
// the crossing state, so command discontinuities applied at events stay
// aligned with step boundaries.  `sample_times` must be ascending and inside
// [t0, t_end]; sampled states are evaluated on the dense interpolant.
// h_start > 0 seeds the first step (for continuing across calls), otherwise
// config.h_init is used.
Trajectory integrate(const DerivFn& f, double t0, std::span<const double> y0,
                     double t_end, const IntegratorConfig& config,
                     std::span<const EventSpec> events = {},
                     std::span<const double> sample_times = {}, double h_start = 0.0);

// Fixed-step classic Runge-Kutta reference integrator with the same event
// and sampling semantics (intra-step states come from a partial step off the
// segment start).  Used to cross-check the adaptive path.
Trajectory integrate_rk4(const DerivFn& f, double t0, std::span<const double> y0,
                         double t_end, double h_step,
                         std::span<const EventSpec> events = {},
                         std::span<const double> sample_times = {},
                         double event_tol = IntegratorConfig{}.event_tol);

// Bisection root localization for a scalar function of time over [t_lo,
// t_hi]; requires a sign change (g >= 0 counts positive).  Returns the
// crossed endpoint of the final bracket, within tol of the root and carrying
// the post-crossing sign.
double locate_event(const std::function<double(double)>& guard, double t_lo,
                    double t_hi, double tol);

}  // namespace amphibsim
