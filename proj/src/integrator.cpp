#include "amphibsim/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "amphibsim/errors.hpp"

namespace amphibsim {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// 5th-order minus embedded 4th-order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Dense-output weights for the quartic interpolant.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

// Step-size controller constants (PI form: order-matched exponent minus a
// damping term fed by the previous error).
constexpr double kSafety = 0.9;
constexpr double kErrExponent = 0.17;   // 1/5 - 0.75 * beta
constexpr double kErrMemory = 0.04;     // beta
constexpr double kShrinkLimit = 0.2;
constexpr double kGrowthLimit = 5.0;

int sign_of(double g) { return g >= 0.0 ? 1 : -1; }

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

[[noreturn]] void bad_derivative(double t) {
    throw IntegrationError("derivative is not finite at t=" + std::to_string(t));
}

struct StepWorkspace {
    std::vector<double> k1, k2, k3, k4, k5, k6, k7;
    std::vector<double> stage, y5;
    std::vector<double> rcont1, rcont2, rcont3, rcont4, rcont5;

    explicit StepWorkspace(std::size_t n)
        : k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), stage(n), y5(n),
          rcont1(n), rcont2(n), rcont3(n), rcont4(n), rcont5(n) {}
};

// One 5(4) attempt from (t, y) with k1 already holding f(t, y).  Fills y5
// and k2..k7 (k7 = f(t+h, y5), the FSAL stage) and returns the weighted RMS
// error measure (accept when <= 1).  Returns infinity when the result is
// not finite so the caller rejects and shrinks.
double attempt_step(const DerivFn& f, double t, std::span<const double> y, double h,
                    const IntegratorConfig& cfg, StepWorkspace& w,
                    std::size_t& deriv_evals) {
    const std::size_t n = y.size();

    for (std::size_t i = 0; i < n; ++i) w.stage[i] = y[i] + h * a21 * w.k1[i];
    f(t + c2 * h, w.stage, w.k2);
    for (std::size_t i = 0; i < n; ++i)
        w.stage[i] = y[i] + h * (a31 * w.k1[i] + a32 * w.k2[i]);
    f(t + c3 * h, w.stage, w.k3);
    for (std::size_t i = 0; i < n; ++i)
        w.stage[i] = y[i] + h * (a41 * w.k1[i] + a42 * w.k2[i] + a43 * w.k3[i]);
    f(t + c4 * h, w.stage, w.k4);
    for (std::size_t i = 0; i < n; ++i)
        w.stage[i] = y[i] + h * (a51 * w.k1[i] + a52 * w.k2[i] + a53 * w.k3[i] +
                                 a54 * w.k4[i]);
    f(t + c5 * h, w.stage, w.k5);
    for (std::size_t i = 0; i < n; ++i)
        w.stage[i] = y[i] + h * (a61 * w.k1[i] + a62 * w.k2[i] + a63 * w.k3[i] +
                                 a64 * w.k4[i] + a65 * w.k5[i]);
    f(t + h, w.stage, w.k6);
    for (std::size_t i = 0; i < n; ++i)
        w.y5[i] = y[i] + h * (b1 * w.k1[i] + b3 * w.k3[i] + b4 * w.k4[i] +
                              b5 * w.k5[i] + b6 * w.k6[i]);
    f(t + h, w.y5, w.k7);
    deriv_evals += 6;

    if (!all_finite(w.y5) || !all_finite(w.k7)) return INFINITY;

    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double err_i = h * (e1 * w.k1[i] + e3 * w.k3[i] + e4 * w.k4[i] +
                                  e5 * w.k5[i] + e6 * w.k6[i] + e7 * w.k7[i]);
        const double scale =
            cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(w.y5[i]));
        const double q = err_i / scale;
        acc += q * q;
    }
    const double err = std::sqrt(acc / static_cast<double>(n));
    return std::isfinite(err) ? err : INFINITY;
}

// Prepares the quartic dense-output coefficients for the accepted step.
void build_dense(std::span<const double> y, double h, StepWorkspace& w) {
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double dy = w.y5[i] - y[i];
        const double bspl = h * w.k1[i] - dy;
        w.rcont1[i] = y[i];
        w.rcont2[i] = dy;
        w.rcont3[i] = bspl;
        w.rcont4[i] = dy - h * w.k7[i] - bspl;
        w.rcont5[i] = h * (d1 * w.k1[i] + d3 * w.k3[i] + d4 * w.k4[i] +
                           d5 * w.k5[i] + d6 * w.k6[i] + d7 * w.k7[i]);
    }
}

// Dense interpolant at fraction theta in [0, 1] of the accepted step.
void eval_dense(const StepWorkspace& w, double theta, std::vector<double>& out) {
    const double th1 = 1.0 - theta;
    out.resize(w.rcont1.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = w.rcont1[i] +
                 theta * (w.rcont2[i] +
                          th1 * (w.rcont3[i] +
                                 theta * (w.rcont4[i] + th1 * w.rcont5[i])));
    }
}

bool direction_admits(GuardDirection dir, int s_old, int s_new) {
    if (dir == GuardDirection::rising) return s_old < 0 && s_new > 0;
    if (dir == GuardDirection::falling) return s_old > 0 && s_new < 0;
    return s_old != s_new;
}

// Tracks guard signs across accepted steps and localizes sign changes.
// state_at(t, out) must evaluate the continuous extension of the current
// accepted segment.
class EventMonitor {
  public:
    EventMonitor(std::span<const EventSpec> specs, double tol)
        : specs_(specs), tol_(tol) {}

    bool empty() const { return specs_.empty(); }

    void arm(double t, std::span<const double> y) {
        signs_.resize(specs_.size());
        for (std::size_t i = 0; i < specs_.size(); ++i)
            signs_[i] = sign_of(eval_guard(i, t, y));
    }

    struct Hit {
        double t_hit = 0.0;                 // earliest crossing, restart point
        std::vector<EventRecord> records;   // all crossings within tol of it
        std::vector<int> post_signs;        // parallel to records: sign after
    };

    // Scans [t_lo, t_hi] for sign changes given the endpoint state.  Returns
    // the earliest crossing cluster, or nullopt.  Does not modify the armed
    // signs; call settle() after restarting on a hit.
    std::optional<Hit> scan(
        double t_lo, double t_hi, std::span<const double> y_hi,
        const std::function<void(double, std::vector<double>&)>& state_at) {
        struct Candidate {
            std::size_t index;
            double t_zero;
            int s_new;
        };
        std::vector<Candidate> crossed;
        for (std::size_t i = 0; i < specs_.size(); ++i) {
            const int s_new = sign_of(eval_guard(i, t_hi, y_hi));
            if (!direction_admits(specs_[i].direction, signs_[i], s_new)) continue;
            auto g_of_t = [&](double t) {
                state_at(t, probe_);
                return eval_guard(i, t, probe_);
            };
            crossed.push_back({i, locate_event(g_of_t, t_lo, t_hi, tol_), s_new});
        }
        if (crossed.empty()) return std::nullopt;

        std::sort(crossed.begin(), crossed.end(), [](const Candidate& a, const Candidate& b) {
            if (a.t_zero != b.t_zero) return a.t_zero < b.t_zero;
            return a.index < b.index;
        });
        Hit hit;
        hit.t_hit = crossed.front().t_zero;
        // Crossings essentially coincident with the earliest one (coincident
        // rotor stations) are reported together; later ones re-trigger on the
        // next segment, where their sign is still un-flipped.
        for (const Candidate& c : crossed) {
            if (c.t_zero > hit.t_hit + tol_) break;
            EventRecord rec;
            rec.t = c.t_zero;
            rec.tag = specs_[c.index].tag;
            rec.rising = c.s_new > 0;
            state_at(c.t_zero, probe_);
            rec.state = probe_;
            hit.records.push_back(std::move(rec));
            hit.post_signs.push_back(c.s_new);
            cluster_.push_back(c.index);
        }
        return hit;
    }

    // True when any armed guard admits a sign flip at (t, y).
    bool any_crossing(double t, std::span<const double> y) const {
        for (std::size_t i = 0; i < specs_.size(); ++i)
            if (direction_admits(specs_[i].direction, signs_[i],
                                 sign_of(eval_guard(i, t, y))))
                return true;
        return false;
    }

    // Fires every guard that has flipped by (t, y); used after marching a
    // fixed-step integration just past the switching surface.
    Hit cluster_at(double t, std::span<const double> y) {
        Hit hit;
        hit.t_hit = t;
        for (std::size_t i = 0; i < specs_.size(); ++i) {
            const int s_new = sign_of(eval_guard(i, t, y));
            if (!direction_admits(specs_[i].direction, signs_[i], s_new)) continue;
            EventRecord rec;
            rec.t = t;
            rec.tag = specs_[i].tag;
            rec.rising = s_new > 0;
            rec.state.assign(y.begin(), y.end());
            hit.records.push_back(std::move(rec));
            hit.post_signs.push_back(s_new);
            cluster_.push_back(static_cast<int>(i));
        }
        return hit;
    }

    // Re-arms the guards at the restart point.  Guards that just fired take
    // their post-crossing sign so they do not immediately re-trigger.
    void settle(const Hit& hit, double t, std::span<const double> y) {
        for (std::size_t i = 0; i < specs_.size(); ++i)
            signs_[i] = sign_of(eval_guard(i, t, y));
        for (std::size_t j = 0; j < cluster_.size(); ++j)
            signs_[static_cast<std::size_t>(cluster_[j])] = hit.post_signs[j];
        cluster_.clear();
    }

    // Accepts the endpoint signs after an uneventful segment.
    void advance(double t, std::span<const double> y) {
        for (std::size_t i = 0; i < specs_.size(); ++i)
            signs_[i] = sign_of(eval_guard(i, t, y));
    }

  private:
    double eval_guard(std::size_t i, double t, std::span<const double> y) const {
        const double g = specs_[i].guard(t, y);
        if (!std::isfinite(g))
            throw IntegrationError("event guard " + std::to_string(specs_[i].tag) +
                                   " is not finite at t=" + std::to_string(t));
        return g;
    }

    std::span<const EventSpec> specs_;
    double tol_;
    std::vector<int> signs_;
    std::vector<int> cluster_;
    std::vector<double> probe_;
};

void validate_common(std::span<const double> y0, double t0, double t_end,
                     std::span<const double> samples,
                     std::span<const EventSpec> events) {
    if (y0.empty()) throw ValidationError("integrate: state must be non-empty");
    if (!all_finite(y0)) throw ValidationError("integrate: initial state must be finite");
    if (!std::isfinite(t0) || !std::isfinite(t_end) || t_end < t0)
        throw ValidationError("integrate: need finite t0 <= t_end");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i] < t0 || samples[i] > t_end)
            throw ValidationError("integrate: sample times must lie in [t0, t_end]");
        if (i > 0 && samples[i] < samples[i - 1])
            throw ValidationError("integrate: sample times must be ascending");
    }
    for (const EventSpec& e : events)
        if (!e.guard) throw ValidationError("integrate: event guard must be callable");
}

// Emits every pending sample with time <= t_hi using state_at.
void emit_samples(std::span<const double> samples, std::size_t& next, double t_hi,
                  const std::function<void(double, std::vector<double>&)>& state_at,
                  Trajectory& out) {
    std::vector<double> buf;
    while (next < samples.size() && samples[next] <= t_hi) {
        state_at(samples[next], buf);
        out.times.push_back(samples[next]);
        out.states.push_back(buf);
        ++next;
    }
}

}  // namespace

void IntegratorConfig::validate() const {
    std::vector<std::string> bad;
    auto pos = [&](double v, const char* k) {
        if (!(std::isfinite(v) && v > 0.0)) bad.push_back(std::string(k) + ": must be > 0");
    };
    pos(rel_tol, "rel_tol");
    if (!(std::isfinite(abs_tol) && abs_tol >= 0.0)) bad.push_back("abs_tol: must be >= 0");
    pos(h_init, "h_init");
    pos(h_min, "h_min");
    pos(h_max, "h_max");
    if (std::isfinite(h_min) && std::isfinite(h_max) && h_min >= h_max)
        bad.push_back("h_min: must be smaller than h_max");
    if (max_steps == 0) bad.push_back("max_steps: must be > 0");
    pos(event_tol, "event_tol");
    if (!bad.empty()) {
        std::string msg = "integrator config invalid:";
        for (const auto& b : bad) msg += "\n  " + b;
        throw ValidationError(msg);
    }
}

double locate_event(const std::function<double(double)>& guard, double t_lo,
                    double t_hi, double tol) {
    if (!(std::isfinite(t_lo) && std::isfinite(t_hi) && t_hi > t_lo))
        throw ValidationError("locate_event: need finite t_lo < t_hi");
    if (!(std::isfinite(tol) && tol > 0.0))
        throw ValidationError("locate_event: tol must be > 0");
    double a = t_lo, b = t_hi;
    const int s_lo = sign_of(guard(a));
    if (sign_of(guard(b)) == s_lo)
        throw ValidationError("locate_event: guard does not change sign over bracket");
    while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;  // bracket at floating-point resolution
        if (sign_of(guard(mid)) == s_lo)
            a = mid;
        else
            b = mid;
    }
    return b;
}

StepResult step_embedded(const DerivFn& f, double t, std::span<const double> y, double h) {
    if (!f) throw ValidationError("step_embedded: derivative must be callable");
    if (y.empty() || !all_finite(y))
        throw ValidationError("step_embedded: state must be non-empty and finite");
    if (!(std::isfinite(t) && std::isfinite(h) && h > 0.0))
        throw ValidationError("step_embedded: need finite t and h > 0");

    const std::size_t n = y.size();
    StepWorkspace w(n);
    std::size_t evals = 0;
    f(t, y, w.k1);
    if (!all_finite(w.k1)) bad_derivative(t);

    IntegratorConfig unit;  // unused tolerances; error returned raw below
    unit.abs_tol = 1.0;
    unit.rel_tol = 0.0;
    const double err = attempt_step(f, t, y, h, unit, w, evals);
    if (!std::isfinite(err)) bad_derivative(t + h);

    StepResult r;
    r.y_new = w.y5;
    r.error.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        r.error[i] = h * (e1 * w.k1[i] + e3 * w.k3[i] + e4 * w.k4[i] + e5 * w.k5[i] +
                          e6 * w.k6[i] + e7 * w.k7[i]);
    }
    return r;
}

Trajectory integrate(const DerivFn& f, double t0, std::span<const double> y0,
                     double t_end, const IntegratorConfig& config,
                     std::span<const EventSpec> events,
                     std::span<const double> sample_times, double h_start) {
    if (!f) throw ValidationError("integrate: derivative must be callable");
    config.validate();
    validate_common(y0, t0, t_end, sample_times, events);

    const std::size_t n = y0.size();
    Trajectory out;
    std::vector<double> y(y0.begin(), y0.end());
    double t = t0;

    std::size_t next_sample = 0;
    {   // samples exactly at the start
        std::vector<double> buf;
        while (next_sample < sample_times.size() && sample_times[next_sample] <= t0) {
            out.times.push_back(sample_times[next_sample]);
            out.states.push_back(y);
            ++next_sample;
        }
    }
    if (t_end == t0) {
        out.final_time = t0;
        out.final_state = y;
        out.h_last = h_start > 0.0 ? h_start : config.h_init;
        return out;
    }

    StepWorkspace w(n);
    f(t, y, w.k1);
    out.deriv_evals += 1;
    if (!all_finite(w.k1)) bad_derivative(t);

    EventMonitor monitor(events, config.event_tol);
    monitor.arm(t, y);

    double h = h_start > 0.0 ? h_start : config.h_init;
    h = std::min({h, config.h_max, t_end - t0});
    double facold = 1e-4;
    bool just_rejected = false;

    while (t < t_end) {
        if (out.steps_accepted + out.steps_rejected >= config.max_steps)
            throw IntegrationError("integrate: exceeded max_steps=" +
                                   std::to_string(config.max_steps));
        bool clipped = false;
        if (t + h >= t_end) {
            h = t_end - t;
            clipped = true;
        }

        const double err = attempt_step(f, t, y, h, config, w, out.deriv_evals);
        if (err > 1.0) {
            ++out.steps_rejected;
            just_rejected = true;
            const double fac11 = std::pow(err, kErrExponent);
            const double shrink =
                std::isfinite(err) ? std::min(1.0 / kShrinkLimit, fac11 / kSafety) : 10.0;
            h /= shrink;
            if (h < config.h_min)
                throw IntegrationError("integrate: step size underflow at t=" +
                                       std::to_string(t));
            continue;
        }

        ++out.steps_accepted;
        const double t_new = clipped ? t_end : t + h;
        build_dense(y, h, w);
        const double h_used = h;
        auto state_at = [&](double ts, std::vector<double>& buf) {
            const double theta = std::clamp((ts - t) / h_used, 0.0, 1.0);
            eval_dense(w, theta, buf);
        };

        // Step-size proposal for the next attempt (standard PI update).
        const double fac11 = std::pow(err, kErrExponent);
        double fac = fac11 / std::pow(facold, kErrMemory);
        double scale = kSafety / fac;
        scale = std::clamp(scale, kShrinkLimit, kGrowthLimit);
        if (just_rejected) scale = std::min(scale, 1.0);
        facold = std::max(err, 1e-4);
        just_rejected = false;
        double h_next = std::min(h_used * scale, config.h_max);

        auto hit = monitor.scan(t, t_new, w.y5, state_at);
        if (hit) {
            emit_samples(sample_times, next_sample, hit->t_hit, state_at, out);
            for (EventRecord& rec : hit->records) out.events.push_back(rec);
            state_at(hit->t_hit, y);
            t = hit->t_hit;
            f(t, y, w.k1);
            out.deriv_evals += 1;
            if (!all_finite(w.k1)) bad_derivative(t);
            monitor.settle(*hit, t, y);
            h = h_next;
            continue;
        }

        emit_samples(sample_times, next_sample, t_new, state_at, out);
        y = w.y5;
        t = t_new;
        std::swap(w.k1, w.k7);  // first-same-as-last
        if (!monitor.empty()) monitor.advance(t, y);
        h = h_next;
    }

    out.final_time = t;
    out.final_state = y;
    out.h_last = h;
    return out;
}

namespace {

// Classic fixed-step stage evaluation: y(t+h) from (t, y).
void rk4_step(const DerivFn& f, double t, std::span<const double> y, double h,
              std::vector<double>& k1, std::vector<double>& k2, std::vector<double>& k3,
              std::vector<double>& k4, std::vector<double>& stage,
              std::vector<double>& out, std::size_t& evals) {
    const std::size_t n = y.size();
    f(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + 0.5 * h * k1[i];
    f(t + 0.5 * h, stage, k2);
    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + 0.5 * h * k2[i];
    f(t + 0.5 * h, stage, k3);
    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + h * k3[i];
    f(t + h, stage, k4);
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    evals += 4;
    if (!all_finite(out)) bad_derivative(t + h);
}

}  // namespace

Trajectory integrate_rk4(const DerivFn& f, double t0, std::span<const double> y0,
                         double t_end, double h_step, std::span<const EventSpec> events,
                         std::span<const double> sample_times, double event_tol) {
    if (!f) throw ValidationError("integrate_rk4: derivative must be callable");
    if (!(std::isfinite(h_step) && h_step > 0.0))
        throw ValidationError("integrate_rk4: h_step must be > 0");
    if (!(std::isfinite(event_tol) && event_tol > 0.0))
        throw ValidationError("integrate_rk4: event_tol must be > 0");
    validate_common(y0, t0, t_end, sample_times, events);

    const std::size_t n = y0.size();
    Trajectory out;
    std::vector<double> y(y0.begin(), y0.end());
    double t = t0;

    std::size_t next_sample = 0;
    while (next_sample < sample_times.size() && sample_times[next_sample] <= t0) {
        out.times.push_back(sample_times[next_sample]);
        out.states.push_back(y);
        ++next_sample;
    }
    if (t_end == t0) {
        out.final_time = t0;
        out.final_state = y;
        out.h_last = h_step;
        return out;
    }

    std::vector<double> k1(n), k2(n), k3(n), k4(n), stage(n), y_new(n);
    EventMonitor monitor(events, event_tol);
    monitor.arm(t, y);

    while (t < t_end) {
        bool clipped = false;
        double h = h_step;
        if (t + h >= t_end) {
            h = t_end - t;
            clipped = true;
        }
        rk4_step(f, t, y, h, k1, k2, k3, k4, stage, y_new, out.deriv_evals);
        ++out.steps_accepted;
        const double t_new = clipped ? t_end : t + h;

        auto state_at = [&](double ts, std::vector<double>& buf) {
            const double dt = std::clamp(ts - t, 0.0, h);
            if (dt == 0.0) {
                buf.assign(y.begin(), y.end());
                return;
            }
            std::vector<double> kk1(n), kk2(n), kk3(n), kk4(n), st(n);
            rk4_step(f, t, y, dt, kk1, kk2, kk3, kk4, st, buf, out.deriv_evals);
        };

        if (!monitor.empty() && monitor.any_crossing(t_new, y_new)) {
            // A guard flips inside this step.  Interpolating across the
            // switching surface would let late stages sample the far side of
            // the discontinuity and commit an O(h) error, so re-march toward
            // the surface with halving steps and restart just past it.
            double t_cur = t;
            double h_cur = t_new - t;
            std::vector<double> y_cur = y;
            std::vector<double> y_probe(n);
            while (h_cur > event_tol) {
                const double h_half = 0.5 * h_cur;
                rk4_step(f, t_cur, y_cur, h_half, k1, k2, k3, k4, stage, y_probe,
                         out.deriv_evals);
                if (!monitor.any_crossing(t_cur + h_half, y_probe)) {
                    y_cur.swap(y_probe);
                    t_cur += h_half;
                }
                h_cur = h_half;
            }
            int sliver_budget = 64;
            do {
                if (--sliver_budget < 0)
                    throw IntegrationError(
                        "integrate_rk4: event guard does not cross cleanly near t=" +
                        std::to_string(t_cur));
                rk4_step(f, t_cur, y_cur, h_cur, k1, k2, k3, k4, stage, y_probe,
                         out.deriv_evals);
                y_cur.swap(y_probe);
                t_cur += h_cur;
            } while (!monitor.any_crossing(t_cur, y_cur));

            EventMonitor::Hit hit = monitor.cluster_at(t_cur, y_cur);
            emit_samples(sample_times, next_sample, t_cur, state_at, out);
            for (EventRecord& rec : hit.records) out.events.push_back(rec);
            y = y_cur;
            t = t_cur;
            monitor.settle(hit, t, y);
            continue;
        }

        emit_samples(sample_times, next_sample, t_new, state_at, out);
        y = y_new;
        t = t_new;
        if (!monitor.empty()) monitor.advance(t, y);
    }

    out.final_time = t;
    out.final_state = y;
    out.h_last = h_step;
    return out;
}

}  // namespace amphibsim
