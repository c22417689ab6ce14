#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <span>
#include <vector>

#include "amphibsim/errors.hpp"
#include "amphibsim/integrator.hpp"

using namespace amphibsim;

namespace {

const DerivFn kDecay = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = -y[0];
};

const DerivFn kOscillator = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
};

}  // namespace

TEST_CASE("exponential decay hits the analytic value") {
    const Trajectory out = integrate(kDecay, 0.0, std::vector<double>{1.0}, 1.0, {});
    CHECK(std::abs(out.final_state[0] - 0.36787944117144233) < 1e-8);
    CHECK(out.final_time == 1.0);
    CHECK(out.steps_accepted > 0);
    CHECK(out.deriv_evals > out.steps_accepted);
}

TEST_CASE("tighter tolerances tighten the answer") {
    IntegratorConfig tight;
    tight.rel_tol = 1e-12;
    tight.abs_tol = 1e-14;
    const Trajectory out = integrate(kDecay, 0.0, std::vector<double>{1.0}, 1.0, tight);
    CHECK(std::abs(out.final_state[0] - 0.36787944117144233) < 1e-11);
}

TEST_CASE("harmonic oscillator over many periods") {
    const double t_end = 20.0 * 3.14159265358979323846;
    const Trajectory out =
        integrate(kOscillator, 0.0, std::vector<double>{1.0, 0.0}, t_end, {});
    CHECK(std::abs(out.final_state[0] - 1.0) < 1e-6);
    CHECK(std::abs(out.final_state[1]) < 1e-6);
}

TEST_CASE("sample times are honored exactly") {
    const std::vector<double> samples{0.0, 0.25, 0.5, 1.0};
    const Trajectory out =
        integrate(kDecay, 0.0, std::vector<double>{1.0}, 1.0, {}, {}, samples);
    REQUIRE(out.times.size() == samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK(out.times[i] == samples[i]);
        CHECK(std::abs(out.states[i][0] - std::exp(-samples[i])) < 1e-7);
    }
}

TEST_CASE("zero-length integration returns immediately") {
    const Trajectory out = integrate(kDecay, 2.0, std::vector<double>{0.5}, 2.0, {});
    CHECK(out.final_time == 2.0);
    CHECK(out.final_state[0] == 0.5);
    CHECK(out.steps_accepted == 0);
}

TEST_CASE("event localization on a linear descent") {
    // Z(t) = 1 - t crosses 0.25 at t = 0.75.
    const DerivFn f = [](double, std::span<const double>, std::span<double> dy) {
        dy[0] = -1.0;
    };
    EventSpec spec;
    spec.guard = [](double, std::span<const double> y) { return y[0] - 0.25; };
    spec.direction = GuardDirection::falling;
    spec.tag = 42;
    const Trajectory out =
        integrate(f, 0.0, std::vector<double>{1.0}, 2.0, {}, std::vector<EventSpec>{spec});
    REQUIRE(out.events.size() == 1);
    CHECK(std::abs(out.events[0].t - 0.75) <= 1e-6);
    CHECK(out.events[0].tag == 42);
    CHECK_FALSE(out.events[0].rising);
    CHECK(std::abs(out.events[0].state[0] - 0.25) <= 1e-6);
    // Integration continues to t_end after the event.
    CHECK(out.final_time == 2.0);
    CHECK(std::abs(out.final_state[0] + 1.0) < 1e-9);
}

TEST_CASE("direction filters suppress mismatched crossings") {
    const DerivFn f = [](double, std::span<const double>, std::span<double> dy) {
        dy[0] = -1.0;
    };
    EventSpec rising;
    rising.guard = [](double, std::span<const double> y) { return y[0] - 0.5; };
    rising.direction = GuardDirection::rising;
    const Trajectory out = integrate(f, 0.0, std::vector<double>{1.0}, 1.0, {},
                                     std::vector<EventSpec>{rising});
    CHECK(out.events.empty());
}

TEST_CASE("tangency without a sign change is not an event") {
    // y(t) = (t - 1)^2 + 1e-6 stays positive; the guard grazes its minimum.
    const DerivFn f = [](double t, std::span<const double>, std::span<double> dy) {
        dy[0] = 2.0 * (t - 1.0);
    };
    EventSpec spec;
    spec.guard = [](double, std::span<const double> y) { return y[0]; };
    spec.direction = GuardDirection::any;
    const Trajectory out = integrate(f, 0.0, std::vector<double>{1.0 + 1e-6}, 2.0, {},
                                     std::vector<EventSpec>{spec});
    CHECK(out.events.empty());
}

TEST_CASE("coincident guards fire as one cluster") {
    const DerivFn f = [](double, std::span<const double>, std::span<double> dy) {
        dy[0] = -1.0;
    };
    auto guard_at = [](double level) {
        return [level](double, std::span<const double> y) { return y[0] - level; };
    };
    std::vector<EventSpec> specs(3);
    specs[0] = {guard_at(0.5), GuardDirection::any, 1};
    specs[1] = {guard_at(0.5), GuardDirection::any, 2};
    specs[2] = {guard_at(0.4999), GuardDirection::any, 3};
    const Trajectory out = integrate(f, 0.0, std::vector<double>{1.0}, 1.0, {}, specs);
    REQUIRE(out.events.size() == 3);
    CHECK(out.events[0].t == out.events[1].t);  // identical guards share the hit
    CHECK(out.events[0].tag + out.events[1].tag == 3);
    CHECK(out.events[2].tag == 3);
    CHECK(out.events[2].t > out.events[1].t);
    CHECK(std::abs(out.events[2].t - 0.5001) < 1e-6);
}

TEST_CASE("event-declared discontinuity is integrated cleanly") {
    // dy/dt = -1 above zero, -3 below: kink at t = 1, y(2) = -3.
    const DerivFn f = [](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = y[0] > 0.0 ? -1.0 : -3.0;
    };
    EventSpec spec;
    spec.guard = [](double, std::span<const double> y) { return y[0]; };
    spec.direction = GuardDirection::any;

    const Trajectory adaptive =
        integrate(f, 0.0, std::vector<double>{1.0}, 2.0, {}, std::vector<EventSpec>{spec});
    REQUIRE(adaptive.events.size() == 1);
    CHECK(std::abs(adaptive.events[0].t - 1.0) < 1e-6);
    CHECK(std::abs(adaptive.final_state[0] + 3.0) < 1e-6);

    const Trajectory fixed = integrate_rk4(f, 0.0, std::vector<double>{1.0}, 2.0, 1e-3,
                                           std::vector<EventSpec>{spec});
    REQUIRE(fixed.events.size() == 1);
    CHECK(std::abs(fixed.events[0].t - 1.0) < 1e-8);
    CHECK(std::abs(fixed.final_state[0] + 3.0) < 1e-8);

    // Both paths land on the same answer.
    CHECK(std::abs(adaptive.final_state[0] - fixed.final_state[0]) < 1e-6);
}

TEST_CASE("fixed-step integrator matches on smooth problems") {
    const Trajectory fixed =
        integrate_rk4(kDecay, 0.0, std::vector<double>{1.0}, 1.0, 1e-3);
    CHECK(std::abs(fixed.final_state[0] - 0.36787944117144233) < 1e-10);
    // A step width that does not divide the interval clips the last step.
    const Trajectory clipped =
        integrate_rk4(kDecay, 0.0, std::vector<double>{1.0}, 1.0, 0.3);
    CHECK(clipped.final_time == 1.0);
    // Fourth-order global error at h = 0.3 sits near 3e-5.
    CHECK(std::abs(clipped.final_state[0] - 0.36787944117144233) < 1e-4);
}

TEST_CASE("step budget violations raise") {
    IntegratorConfig cfg;
    cfg.max_steps = 3;
    cfg.h_max = 0.25;
    CHECK_THROWS_AS(integrate(kDecay, 0.0, std::vector<double>{1.0}, 10.0, cfg),
                    IntegrationError);
}

TEST_CASE("a derivative that never stabilizes underflows the step size") {
    const DerivFn bad = [](double, std::span<const double>, std::span<double> dy) {
        dy[0] = std::nan("");
    };
    CHECK_THROWS_AS(integrate(bad, 0.0, std::vector<double>{1.0}, 1.0, {}),
                    IntegrationError);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(integrate(kDecay, 0.0, std::vector<double>{}, 1.0, {}),
                    ValidationError);
    CHECK_THROWS_AS(integrate(kDecay, 0.0, std::vector<double>{std::nan("")}, 1.0, {}),
                    ValidationError);
    CHECK_THROWS_AS(integrate(kDecay, 1.0, std::vector<double>{1.0}, 0.0, {}),
                    ValidationError);
    CHECK_THROWS_AS(
        integrate(kDecay, 0.0, std::vector<double>{1.0}, 1.0, {}, {},
                  std::vector<double>{0.5, 0.25}),
        ValidationError);  // samples must ascend
    CHECK_THROWS_AS(integrate_rk4(kDecay, 0.0, std::vector<double>{1.0}, 1.0, 0.0),
                    ValidationError);
    IntegratorConfig bad;
    bad.rel_tol = -1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("bisection root localization") {
    auto g = [](double t) { return 0.75 - t; };  // falling through zero at 0.75
    const double t_star = locate_event(g, 0.0, 1.0, 1e-10);
    CHECK(std::abs(t_star - 0.75) <= 1e-9);
    CHECK(g(t_star) <= 0.0);  // carries the post-crossing sign
    CHECK_THROWS_AS(locate_event([](double) { return 1.0; }, 0.0, 1.0, 1e-6),
                    ValidationError);
}
