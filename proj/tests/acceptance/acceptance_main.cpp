// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Numeric targets and tolerances are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "seasyn/analysis.hpp"
#include "seasyn/config.hpp"
#include "seasyn/errors.hpp"
#include "seasyn/frequency_response.hpp"
#include "seasyn/norms.hpp"
#include "seasyn/sea_model.hpp"
#include "seasyn/simulation.hpp"
#include "seasyn/synthesis.hpp"
#include "test_support.hpp"

using namespace seasyn;
using seasyn::testing::table_parameters;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!pass) ++g_failures;
}

struct CaseResult {
    std::string           name;
    double                stiffness = 0.0;
    SynthesisBounds       bounds;
    VerificationReport    verification;
    SimulationMetrics     metrics;
    double                synth_seconds = 0.0;
    ClosedLoopSystem      closed_loop;
    bool                  ok = false;
    std::string           error;
};

CaseResult run_case(const std::string& name, const DesiredImpedance& imp,
                    const SynthesisBounds& bounds, const WeightingSet& weights,
                    double duration = 10.0) {
    CaseResult r;
    r.name = name;
    r.stiffness = imp.virtual_stiffness;
    r.bounds = bounds;
    try {
        const auto plant = build_generalized_plant(table_parameters(), imp, weights);
        const auto t0 = std::chrono::steady_clock::now();
        const auto synth = synthesize_mixed(plant, bounds);
        r.synth_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.verification = verify(plant, synth.controller, bounds);
        r.closed_loop = close_loop(plant, synth.controller);
        SimulationSettings s;
        s.duration_s = duration;
        s.sample_rate_hz = recommended_sample_rate(r.closed_loop);
        r.metrics = simulate(r.closed_loop, SignalSpec::sinusoid(2.0, 2.0),
                             SignalSpec::constant(0.0), SignalSpec::constant(0.0), s)
                        .metrics;
        r.ok = true;
    } catch (const std::exception& ex) {
        r.error = ex.what();
    }
    return r;
}

bool within(double value, double target, double rel) {
    return value >= (1.0 - rel) * target && value <= (1.0 + rel) * target;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

}  // namespace

int main() {
    const auto p = table_parameters();
    const double paper_error[3] = {0.0233, 0.0130, 0.0060};
    const double paper_control[3] = {16.9859, 9.8110, 2.4232};

    std::vector<CaseResult> cases;
    {
        const double          ratios[3] = {0.3, 0.6, 0.9};
        const SynthesisBounds bounds[3] = {{0.0580, 43.4}, {0.0330, 29.9}, {0.0222, 0.685}};
        for (int i = 0; i < 3; ++i) {
            DesiredImpedance d;
            d.virtual_stiffness = ratios[i] * p.spring_stiffness;
            cases.push_back(run_case(fmt("%.1fKs", ratios[i]), d, bounds[i], default_weights()));
        }
    }

    // Criterion 1: feasibility and independently verified norm bounds.
    {
        bool pass = true;
        std::string detail;
        for (const auto& c : cases) {
            if (!c.ok) {
                pass = false;
                detail += fmt("[%s: %s] ", c.name.c_str(), c.error.c_str());
                continue;
            }
            const bool case_ok = c.verification.pass &&
                                 c.verification.hinf_error <= c.bounds.hinf_error_bound &&
                                 c.verification.h2_control <= c.bounds.h2_control_bound &&
                                 c.synth_seconds < 30.0;
            pass = pass && case_ok;
            detail += fmt("[%s: hinf %.5f<=%.4f h2 %.4f<=%.3f %.2fs] ", c.name.c_str(),
                          c.verification.hinf_error, c.bounds.hinf_error_bound,
                          c.verification.h2_control, c.bounds.h2_control_bound, c.synth_seconds);
        }
        report(1, pass, "norm-bound feasibility on the three stiffness cases " + detail);
    }

    // Criterion 2: simulation envelopes and the strict monotone trend.
    {
        bool pass = true;
        std::string detail;
        for (int i = 0; i < 3; ++i) {
            const auto& c = cases[i];
            if (!c.ok) {
                pass = false;
                continue;
            }
            const bool err_ok = within(c.metrics.max_abs_error, paper_error[i], 0.30);
            const bool ctl_ok = within(c.metrics.max_abs_control, paper_control[i], 0.30) &&
                                c.metrics.max_abs_control < 44.0;
            pass = pass && err_ok && ctl_ok;
            detail += fmt("[%s: err %.4f (ref %.4f) ctl %.3f (ref %.3f)] ", c.name.c_str(),
                          c.metrics.max_abs_error, paper_error[i], c.metrics.max_abs_control,
                          paper_control[i]);
        }
        if (cases[0].ok && cases[1].ok && cases[2].ok) {
            const bool monotone =
                cases[0].metrics.max_abs_error > cases[1].metrics.max_abs_error &&
                cases[1].metrics.max_abs_error > cases[2].metrics.max_abs_error &&
                cases[0].metrics.max_abs_control > cases[1].metrics.max_abs_control &&
                cases[1].metrics.max_abs_control > cases[2].metrics.max_abs_control;
            pass = pass && monotone;
            if (!monotone) detail += "[trend violated] ";
        }
        report(2, pass, "simulation envelopes within 30% of the reference values " + detail);
    }

    // Criterion 3: desired-torque amplitude identity.
    {
        bool pass = cases[1].ok && cases[2].ok &&
                    within(cases[1].metrics.max_abs_tau_d, 0.0580, 0.005) &&
                    within(cases[2].metrics.max_abs_tau_d, 0.0870, 0.005);
        report(3, pass,
               fmt("desired torque maxima %.5f (ref 0.0580) and %.5f (ref 0.0870) within 0.5%%",
                   cases[1].ok ? cases[1].metrics.max_abs_tau_d : 0.0,
                   cases[2].ok ? cases[2].metrics.max_abs_tau_d : 0.0));
    }

    // Criterion 4: relaxed passivity on [0.0628, 31.4] rad/s for every case.
    {
        bool pass = true;
        std::string detail;
        for (const auto& c : cases) {
            if (!c.ok) {
                pass = false;
                continue;
            }
            const auto rep = check_relaxed_passivity(c.closed_loop, 5.0);
            pass = pass && rep.passive_on_band && rep.closed_loop_hurwitz;
            detail += fmt("[%s: margin %.2f deg] ", c.name.c_str(), rep.min_phase_margin_deg);
        }
        report(4, pass, "rendered impedance phase within [-90.5, 90.5] deg below 5 Hz " + detail);
    }

    // Criterion 5: motion-filter deterioration bound.
    {
        DesiredImpedance d;
        d.virtual_stiffness = 0.9 * p.spring_stiffness;
        d.virtual_damping = 0.5 * p.motor_damping;
        d.virtual_inertia = 0.1 * p.motor_inertia;
        const auto zd = desired_models(d).second;
        const auto [mag, phase] = wphi_deterioration(zd, lowpass2(500.0), 5.0);
        report(5, mag <= 0.1 && phase <= 8.0,
               fmt("motion-filter deterioration %.4f dB <= 0.1 and %.2f deg <= 8", mag, phase));
    }

    // Criterion 6: numerical kernel properties.
    {
        const auto t0 = std::chrono::steady_clock::now();
        bool pass = true;
        std::string detail;

        std::mt19937_64 rng(0xACCE97u);
        int hinf_bad = 0;
        for (int trial = 0; trial < 50; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 7);
            const auto sys = seasyn::testing::random_stable_system(rng, n, 2, 2, 0.1, 0.01, 1e3);
            const double tol = 0.02;
            const double norm = hinf_norm(sys, tol);
            double grid_max = 0.0;
            for (double s : sigma_max(frequency_response(sys, log_grid(1e-3, 1e5, 500)))) {
                grid_max = std::max(grid_max, s);
            }
            if (!(norm >= grid_max * (1.0 - 1e-12) && norm <= grid_max * (1.0 + 10.0 * tol))) {
                ++hinf_bad;
            }
        }
        pass = pass && hinf_bad == 0;
        detail += fmt("[hinf grid consistency: %d/50 bad] ", hinf_bad);

        int h2_bad = 0;
        for (int trial = 0; trial < 50; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 5);
            const auto sys = seasyn::testing::random_stable_system(rng, n, 1, 2, 0.3, 0.5, 20.0);
            const double duration = std::min(120.0, 16.0 / -is_hurwitz(sys).spectral_abscissa);
            const double energy = seasyn::testing::impulse_response_energy(sys, duration, 1e-3);
            if (std::abs(h2_norm(sys) - std::sqrt(energy)) > 0.01 * std::sqrt(energy)) {
                ++h2_bad;
            }
        }
        pass = pass && h2_bad == 0;
        detail += fmt("[h2 quadrature: %d/50 bad] ", h2_bad);

        int rt_bad = 0;
        for (int trial = 0; trial < 200; ++trial) {
            const int n = 1 + static_cast<int>(rng() % 5);
            const auto tf = seasyn::testing::random_transfer_function(rng, n).normalized();
            const auto back = transfer_function_of(realize(tf)).normalized();
            if (!back.num().almost_equal(tf.num(), 1e-8) ||
                !back.den().almost_equal(tf.den(), 1e-8)) {
                ++rt_bad;
            }
        }
        pass = pass && rt_bad == 0;
        detail += fmt("[realize round trip: %d/200 bad] ", rt_bad);

        int lyap_bad = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 5);
            const auto sys = seasyn::testing::random_stable_system(rng, n, n, 1);
            const Eigen::MatrixXd Q = sys.B * sys.B.transpose();
            const Eigen::MatrixXd P = solve_lyapunov(sys.A, Q);
            if ((sys.A * P + P * sys.A.transpose() + Q).norm() >
                1e-8 * (sys.A.norm() * P.norm() + Q.norm())) {
                ++lyap_bad;
            }
        }
        pass = pass && lyap_bad == 0;
        detail += fmt("[lyapunov residual: %d/100 bad] ", lyap_bad);

        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        pass = pass && secs < 60.0;
        detail += fmt("[%.1fs < 60s]", secs);
        report(6, pass, "numerical kernel properties " + detail);
    }

    // Criterion 7: simulation self-consistency.
    {
        bool pass = true;
        std::string detail;
        if (!cases[0].ok || !cases[2].ok) {
            pass = false;
        } else {
            const auto& cl = cases[0].closed_loop;
            SimulationSettings s;
            s.duration_s = 6.0;
            s.sample_rate_hz = recommended_sample_rate(cl);
            const auto m1 = simulate(cl, SignalSpec::sinusoid(2.0, 2.0), SignalSpec::constant(0.0),
                                     SignalSpec::constant(0.0), s)
                                .metrics;
            s.sample_rate_hz *= 2.0;
            const auto m2 = simulate(cl, SignalSpec::sinusoid(2.0, 2.0), SignalSpec::constant(0.0),
                                     SignalSpec::constant(0.0), s)
                                .metrics;
            const double step_change =
                std::abs(m1.max_abs_error - m2.max_abs_error) / m2.max_abs_error;
            pass = pass && step_change < 0.005;
            detail += fmt("[step halving: %.4f%%] ", 100.0 * step_change);

            // Steady amplitude vs frequency response at the drive frequency.
            const auto& cl3 = cases[2].closed_loop;
            SimulationSettings s3;
            s3.duration_s = 12.0;
            s3.sample_rate_hz = recommended_sample_rate(cl3);
            const auto tr = simulate(cl3, SignalSpec::sinusoid(2.0, 2.0), SignalSpec::constant(0.0),
                                     SignalSpec::constant(0.0), s3);
            double steady_amp = 0.0;
            for (size_t i = 0; i < tr.time.size(); ++i) {
                if (tr.time[i] >= tr.steady_end - 1.0) {
                    steady_amp = std::max(steady_amp, std::abs(tr.e[i]));
                }
            }
            const auto chan = cl3.sys.subsystem(std::vector<int>{3}, std::vector<int>{0});
            const double expected = 2.0 * std::abs(frequency_response(chan, {4.0 * M_PI}).values[0](0, 0));
            pass = pass && std::abs(steady_amp - expected) <= 0.01 * expected;
            detail += fmt("[freq consistency: %.5f vs %.5f] ", steady_amp, expected);

            // Linearity at 1e-9.
            SimulationSettings sl;
            sl.duration_s = 2.0;
            sl.sample_rate_hz = recommended_sample_rate(cl);
            const auto ta = simulate(cl, SignalSpec::sinusoid(1.0, 2.0), SignalSpec::constant(0.0),
                                     SignalSpec::constant(0.0), sl);
            const auto tb = simulate(cl, SignalSpec::sinusoid(2.0, 2.0), SignalSpec::constant(0.0),
                                     SignalSpec::constant(0.0), sl);
            double dev = 0.0, scale = 0.0;
            for (size_t i = 0; i < ta.time.size(); ++i) {
                dev = std::max(dev, std::abs(tb.e[i] - 2.0 * ta.e[i]));
                dev = std::max(dev, std::abs(tb.omega_d[i] - 2.0 * ta.omega_d[i]));
                scale = std::max({scale, std::abs(tb.omega_d[i]), 1.0});
            }
            pass = pass && dev <= 1e-9 * scale;
            detail += fmt("[linearity dev %.2e] ", dev / scale);
        }
        report(7, pass, "simulation self-consistency " + detail);
    }

    // Criterion 8: general impedance case with the motion filter engaged.
    {
        DesiredImpedance d;
        d.virtual_stiffness = 0.9 * p.spring_stiffness;
        d.virtual_damping = 0.5 * p.motor_damping;
        d.virtual_inertia = 0.1 * p.motor_inertia;
        const SynthesisBounds general_bounds{0.0600, 10.0};
        const auto c = run_case("general", d, general_bounds, default_weights(lowpass2(500.0)));
        bool pass = c.ok && c.verification.pass && c.metrics.max_abs_control < 44.0;
        std::string detail;
        if (c.ok) {
            const auto rep = check_relaxed_passivity(c.closed_loop, 5.0);
            pass = pass && rep.passive_on_band && rep.closed_loop_hurwitz;
            detail = fmt("hinf %.5f h2 %.4f ctl %.3f rad/s margin %.2f deg",
                         c.verification.hinf_error, c.verification.h2_control,
                         c.metrics.max_abs_control, rep.min_phase_margin_deg);
        } else {
            detail = c.error;
        }
        report(8, pass, "general impedance case: " + detail);
    }

    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
