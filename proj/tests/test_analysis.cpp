#include <cmath>

#include "doctest.h"
#include "seasyn/analysis.hpp"
#include "seasyn/errors.hpp"
#include "test_support.hpp"

using namespace seasyn;

namespace {

ControllerRealization zero_controller() {
    ControllerRealization k;
    k.A_k = Eigen::MatrixXd::Constant(1, 1, -1.0);
    k.B_k = Eigen::MatrixXd::Zero(1, 2);
    k.C_k = Eigen::MatrixXd::Zero(1, 1);
    k.D_k = Eigen::MatrixXd::Zero(1, 2);
    return k;
}

FrequencyResponse impedance_of_tf(const RationalTransferFunction& z,
                                  const std::vector<double>& grid) {
    FrequencyResponse fr;
    fr.omegas = grid;
    for (double w : grid) {
        Eigen::MatrixXcd v(1, 1);
        v(0, 0) = z.eval({0.0, w});
        fr.values.push_back(v);
    }
    return fr;
}

std::vector<double> band_grid(double f_max_hz, int per_decade = 60) {
    const double w_lo = 2.0 * M_PI * 0.01;
    const double w_hi = 2.0 * M_PI * f_max_hz;
    const int n = static_cast<int>(std::ceil(std::log10(w_hi / w_lo) * per_decade)) + 1;
    return log_grid(w_lo, w_hi, n);
}

}  // namespace

TEST_CASE("open-loop rendered impedance is the motion path over jw") {
    const auto& c = testing::cached_stiffness_case(0);
    const auto cl = close_loop(c.plant, zero_controller());
    const auto [g1, g2] = build_sea_plant(testing::table_parameters());

    const auto grid = band_grid(5.0);
    const auto za = actual_impedance(cl, grid);
    for (int k = 0; k < za.size(); ++k) {
        const std::complex<double> jw(0.0, grid[k]);
        const auto expected = -g2.eval(jw) / jw;
        CHECK(std::abs(za.values[k](0, 0) - expected) <= 1e-9 * std::abs(expected));
    }
    // Near DC the phase approaches -90 from the spring-like behavior.
    const auto report = check_relaxed_passivity(za, 5.0);
    CHECK(report.phase_deg.front() == doctest::Approx(-90.0).epsilon(0.05));
    (void)g1;
}

TEST_CASE("definitional identity at a single frequency") {
    const auto& c = testing::cached_stiffness_case(1);
    const auto cl = close_loop(c.plant, c.controller);
    const auto grid = band_grid(5.0);
    const auto za = actual_impedance(cl, grid);
    const auto direct = frequency_response(
        cl.sys.subsystem(std::vector<int>{2}, std::vector<int>{0}), {grid[10]});
    const std::complex<double> jw(0.0, grid[10]);
    CHECK(std::abs(za.values[10](0, 0) - (-direct.values[0](0, 0) / jw)) <= 1e-12);
}

TEST_CASE("pure spring sits on the passivity boundary and passes") {
    DesiredImpedance d;
    d.virtual_stiffness = 0.04356;
    const auto [pd, zd] = desired_models(d);
    const auto report = check_relaxed_passivity(impedance_of_tf(zd, band_grid(5.0)), 5.0);
    CHECK(report.passive_on_band);
    CHECK(report.min_phase_margin_deg == doctest::Approx(0.0).epsilon(1e-6));
    (void)pd;
}

TEST_CASE("pure damper has ninety degrees of phase margin") {
    DesiredImpedance d;
    d.virtual_damping = 1.0;
    const auto [pd, zd] = desired_models(d);
    const auto report = check_relaxed_passivity(impedance_of_tf(zd, band_grid(5.0)), 5.0);
    CHECK(report.passive_on_band);
    CHECK(report.min_phase_margin_deg == doctest::Approx(90.0).epsilon(1e-9));
    (void)pd;
}

TEST_CASE("desired impedances are passive across the whole band") {
    const auto p = testing::table_parameters();
    for (double md : {0.0, 0.1 * p.motor_inertia}) {
        DesiredImpedance d;
        d.virtual_stiffness = 0.9 * p.spring_stiffness;
        d.virtual_damping = 0.5 * p.motor_damping;
        d.virtual_inertia = md;
        const auto zd = desired_models(d).second;
        const auto grid = log_grid(1e-4, 1e6, 600);
        const auto report = check_relaxed_passivity(impedance_of_tf(zd, grid), 1e5 / (2 * M_PI));
        CHECK(report.passive_on_band);
        // Phase tends to -90 at low frequency; +90 at high frequency when
        // the inertia term is present.
        CHECK(report.phase_deg.front() == doctest::Approx(-90.0).epsilon(0.02));
        if (md > 0.0) {
            CHECK(report.phase_deg.back() == doctest::Approx(90.0).epsilon(0.02));
        }
    }
}

TEST_CASE("closed-loop stiffness rendering is passive below 5 Hz") {
    for (int i = 0; i < 3; ++i) {
        const auto& c = testing::cached_stiffness_case(i);
        const auto cl = close_loop(c.plant, c.controller);
        const auto report = check_relaxed_passivity(cl, 5.0);
        CAPTURE(i);
        CHECK(report.passive_on_band);
        CHECK(report.closed_loop_hurwitz);
    }
}

TEST_CASE("rendered magnitude tracks the desired stiffness at low frequency") {
    const auto& c = testing::cached_stiffness_case(2);
    const auto cl = close_loop(c.plant, c.controller);
    const auto grid = band_grid(1.0);
    const auto pair = impedance_comparison(cl, desired_models(c.impedance).second, grid);
    for (size_t k = 0; k < grid.size(); ++k) {
        CHECK(std::abs(pair.magnitude_gap_db[k]) < 1.0);
    }
}

TEST_CASE("passivity band shrinking never flips a pass to fail") {
    const auto& c = testing::cached_stiffness_case(2);
    const auto cl = close_loop(c.plant, c.controller);
    const auto full = check_relaxed_passivity(cl, 5.0);
    REQUIRE(full.passive_on_band);
    for (double f : {4.0, 2.0, 1.0, 0.5}) {
        CHECK(check_relaxed_passivity(cl, f).passive_on_band);
    }
}

TEST_CASE("grid independence of the rendered impedance") {
    const auto& c = testing::cached_stiffness_case(1);
    const auto cl = close_loop(c.plant, c.controller);
    const auto coarse = log_grid(0.0628, 31.4, 41);
    const auto fine = log_grid(0.0628, 31.4, 81);  // contains every coarse point
    const auto za_c = actual_impedance(cl, coarse);
    const auto za_f = actual_impedance(cl, fine);
    for (int k = 0; k < za_c.size(); ++k) {
        const auto a = za_c.values[k](0, 0);
        const auto b = za_f.values[2 * k](0, 0);
        CHECK(std::abs(a - b) <= 1e-10 * std::abs(a));
    }
}

TEST_CASE("sparse grids are rejected") {
    const auto& c = testing::cached_stiffness_case(0);
    const auto cl = close_loop(c.plant, c.controller);
    const auto za = actual_impedance(cl, log_grid(0.0628, 31.4, 20));  // ~7 points/decade
    CHECK_THROWS_AS(check_relaxed_passivity(za, 5.0), GridTooSparse);
}

TEST_CASE("unity motion filter causes no deterioration") {
    DesiredImpedance d;
    d.virtual_stiffness = 0.04356;
    const auto zd = desired_models(d).second;
    const auto [mag, phase] = wphi_deterioration(zd, RationalTransferFunction::constant(1.0), 5.0);
    CHECK(mag == doctest::Approx(0.0));
    CHECK(phase == doctest::Approx(0.0));
}

TEST_CASE("second-order low-pass deterioration peaks at the band edge") {
    const auto p = testing::table_parameters();
    DesiredImpedance d;
    d.virtual_stiffness = 0.9 * p.spring_stiffness;
    d.virtual_damping = 0.5 * p.motor_damping;
    d.virtual_inertia = 0.1 * p.motor_inertia;
    const auto zd = desired_models(d).second;
    const auto [mag, phase] = wphi_deterioration(zd, lowpass2(500.0), 5.0);
    // Analytic band-edge values: |1/(1+(w/500)^2)| and 2*atan(w/500) at w = 31.4.
    CHECK(mag == doctest::Approx(0.0343).epsilon(0.02));
    CHECK(phase == doctest::Approx(7.19).epsilon(0.01));
    CHECK(mag <= 0.1);
    CHECK(phase <= 8.0);
}
