#include "doctest.h"
#include "seasyn/errors.hpp"
#include "seasyn/frequency_response.hpp"
#include "seasyn/sea_model.hpp"
#include "test_support.hpp"

using namespace seasyn;

TEST_CASE("first-order lag at its corner frequency") {
    const auto sys = realize({Polynomial({1.0}), Polynomial({1.0, 1.0})});
    const auto fr = frequency_response(sys, {1.0});
    CHECK(magnitude_db(fr)[0] == doctest::Approx(-3.0103).epsilon(1e-4));
    CHECK(phase_deg_unwrapped(fr)[0] == doctest::Approx(-45.0).epsilon(1e-9));
}

TEST_CASE("pure stiffness impedance has -90 degree phase everywhere") {
    const double kd = 0.04356;
    const auto sys = realize({Polynomial({kd}), Polynomial({0.0, 1.0})});
    const auto fr = frequency_response(sys, log_grid(1e-2, 1e2, 50));
    for (double ph : phase_deg_unwrapped(fr)) {
        CHECK(ph == doctest::Approx(-90.0).epsilon(1e-9));
    }
}

TEST_CASE("command path matches direct complex arithmetic at 60 rad/s") {
    const auto p = testing::table_parameters();
    const auto [g1, g2] = build_sea_plant(p);
    const auto sys = realize(g1);
    const auto fr = frequency_response(sys, {60.0});
    const auto expected = g1.eval({0.0, 60.0});
    CHECK(std::abs(fr.values[0](0, 0) - expected) <= 1e-9 * std::abs(expected));
    (void)g2;
}

TEST_CASE("grid point on a marginal pole raises SingularResolvent") {
    const auto integ = realize({Polynomial({1.0}), Polynomial({0.0, 0.0, 1.0})});
    // double integrator has eigenvalues at the origin only; shift one to j*2
    Eigen::MatrixXd A(2, 2);
    A << 0.0, 2.0, -2.0, 0.0;  // eigenvalues +-2j
    const StateSpaceModel osc{A, Eigen::MatrixXd::Ones(2, 1), Eigen::MatrixXd::Ones(1, 2),
                              Eigen::MatrixXd::Zero(1, 1)};
    CHECK_THROWS_AS(frequency_response(osc, {1.0, 2.0}), SingularResolvent);
    CHECK_NOTHROW(frequency_response(osc, {1.0, 2.1}));
    (void)integ;
}

TEST_CASE("grid must be strictly increasing and positive") {
    const auto sys = realize({Polynomial({1.0}), Polynomial({1.0, 1.0})});
    CHECK_THROWS_AS(frequency_response(sys, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(frequency_response(sys, {0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("phase unwrapping tracks a two-pole roll-off past -180") {
    // Third-order lag reaches -270 degrees; unwrapped phase must not fold.
    const auto lag = RationalTransferFunction{Polynomial({1.0}), Polynomial({1.0, 1.0})};
    const auto sys = realize(lag * lag * lag);
    const auto fr = frequency_response(sys, log_grid(1e-2, 1e3, 200));
    const auto ph = phase_deg_unwrapped(fr);
    CHECK(ph.front() > -10.0);
    CHECK(ph.back() < -240.0);
    for (size_t i = 1; i < ph.size(); ++i) {
        CHECK(ph[i] <= ph[i - 1] + 1e-9);  // monotone roll-off for this system
    }
}
