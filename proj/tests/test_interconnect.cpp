#include <complex>

#include "doctest.h"
#include "seasyn/errors.hpp"
#include "seasyn/frequency_response.hpp"
#include "seasyn/interconnect.hpp"
#include "seasyn/sea_model.hpp"
#include "test_support.hpp"

using namespace seasyn;

namespace {

StateSpaceModel labeled(const RationalTransferFunction& tf, const std::string& in,
                        const std::string& out) {
    StateSpaceModel sys = realize(tf);
    sys.input_labels = {in};
    sys.output_labels = {out};
    return sys;
}

}  // namespace

TEST_CASE("series cascade of two first-order lags") {
    const auto g1 = labeled({Polynomial({1.0}), Polynomial({1.0, 1.0})}, "u", "mid");
    const auto g2 = labeled({Polynomial({1.0}), Polynomial({2.0, 1.0})}, "g2_in", "y");

    InterconnectSpec spec;
    spec.external_inputs = {"u"};
    spec.connections = {{"g2_in", {{"mid", 1.0}}}};
    spec.external_outputs = {"y"};
    const auto agg = interconnect({g1, g2}, spec);

    const auto tf = transfer_function_of(agg).normalized();
    CHECK(tf.den().almost_equal(Polynomial({2.0, 3.0, 1.0}), 1e-12));
    CHECK(tf.num().almost_equal(Polynomial({1.0}), 1e-12));
}

TEST_CASE("unity negative feedback around an integrator") {
    const auto integ = labeled({Polynomial({1.0}), Polynomial({0.0, 1.0})}, "err", "y");
    InterconnectSpec spec;
    spec.external_inputs = {"r"};
    spec.connections = {{"err", {{"r", 1.0}, {"y", -1.0}}}};
    spec.external_outputs = {"y"};
    const auto cl = interconnect({integ}, spec);
    const auto tf = transfer_function_of(cl).normalized();
    CHECK(tf.den().almost_equal(Polynomial({1.0, 1.0}), 1e-12));
    CHECK(tf.num().almost_equal(Polynomial({1.0}), 1e-12));
}

TEST_CASE("velocity-loop wiring reproduces the command-path transfer function") {
    const auto p = testing::table_parameters();
    const auto [g1_ref, g2_ref] = build_sea_plant(p);

    // PI velocity controller, motor with load-torque feedback, integrator to
    // cable displacement, spring to interaction torque.
    const auto pi = labeled({Polynomial({p.velocity_loop_ki, p.velocity_loop_kp}),
                             Polynomial({0.0, 1.0})},
                            "vel_err", "motor_torque");
    const auto motor = labeled({Polynomial({1.0}), Polynomial({p.motor_damping, p.motor_inertia})},
                               "net_torque", "omega_A");
    const auto integ = labeled({Polynomial({1.0}), Polynomial({0.0, 1.0})}, "omega_in", "phi_A");
    StateSpaceModel spring = realize(RationalTransferFunction::constant(p.spring_stiffness));
    spring.input_labels = {"deflection"};
    spring.output_labels = {"tau_L"};

    InterconnectSpec spec;
    spec.external_inputs = {"omega_d"};
    spec.connections = {
        {"vel_err", {{"omega_d", 1.0}, {"omega_A", -1.0}}},
        {"net_torque", {{"motor_torque", 1.0}, {"tau_L", -1.0}}},
        {"omega_in", {{"omega_A", 1.0}}},
        {"deflection", {{"phi_A", 1.0}}},
    };
    spec.external_outputs = {"tau_L"};
    const auto loop = interconnect({pi, motor, integ, spring}, spec);

    const auto grid = log_grid(1e-2, 1e3, 20);
    const auto fr = frequency_response(loop, grid);
    for (int k = 0; k < fr.size(); ++k) {
        const std::complex<double> expected = g1_ref.eval({0.0, grid[k]});
        CHECK(std::abs(fr.values[k](0, 0) - expected) <= 1e-6 * std::abs(expected));
    }
    (void)g2_ref;
}

TEST_CASE("cascade grouping does not change the response") {
    std::mt19937_64 rng(7u);
    const auto a = labeled(testing::random_transfer_function(rng, 2), "a_in", "a_out");
    const auto b = labeled(testing::random_transfer_function(rng, 3), "b_in", "b_out");
    const auto c = labeled(testing::random_transfer_function(rng, 2), "c_in", "c_out");

    auto cascade2 = [&](const StateSpaceModel& s1, const StateSpaceModel& s2) {
        InterconnectSpec spec;
        spec.external_inputs = {s1.input_labels[0]};
        spec.connections = {{s2.input_labels[0], {{s1.output_labels[0], 1.0}}}};
        spec.external_outputs = {s2.output_labels[0]};
        return interconnect({s1, s2}, spec);
    };
    auto left = cascade2(cascade2(a, b), c);
    auto right = cascade2(a, cascade2(b, c));

    const auto grid = log_grid(1e-2, 1e2, 40);
    const auto fl = frequency_response(left, grid);
    const auto fr = frequency_response(right, grid);
    for (int k = 0; k < fl.size(); ++k) {
        const auto vl = fl.values[k](0, 0);
        const auto vr = fr.values[k](0, 0);
        CHECK(std::abs(vl - vr) <= 1e-9 * std::max(1.0, std::abs(vl)));
    }
}

TEST_CASE("dangling signals are reported") {
    const auto g = labeled({Polynomial({1.0}), Polynomial({1.0, 1.0})}, "u", "y");
    {
        InterconnectSpec spec;  // input 'u' neither connected nor external
        spec.external_inputs = {"r"};
        spec.external_outputs = {"y"};
        CHECK_THROWS_AS(interconnect({g}, spec), UnwiredInput);
    }
    {
        InterconnectSpec spec;
        spec.external_inputs = {"u"};
        spec.external_outputs = {"nope"};
        CHECK_THROWS_AS(interconnect({g}, spec), UnwiredOutput);
    }
}

TEST_CASE("singular feedthrough loop is rejected") {
    // Unity-gain static loop: q = q.
    StateSpaceModel gain = realize(RationalTransferFunction::constant(1.0));
    gain.input_labels = {"in"};
    gain.output_labels = {"out"};
    InterconnectSpec spec;
    spec.external_inputs = {"w"};
    spec.connections = {{"in", {{"out", 1.0}, {"w", 1.0}}}};
    spec.external_outputs = {"out"};
    CHECK_THROWS_AS(interconnect({gain}, spec), AlgebraicLoop);
}

TEST_CASE("feedthrough loop below unit gain is well-posed") {
    StateSpaceModel gain = realize(RationalTransferFunction::constant(0.5));
    gain.input_labels = {"in"};
    gain.output_labels = {"out"};
    InterconnectSpec spec;
    spec.external_inputs = {"w"};
    spec.connections = {{"in", {{"out", 1.0}, {"w", 1.0}}}};
    spec.external_outputs = {"out"};
    const auto sys = interconnect({gain}, spec);
    CHECK(sys.D(0, 0) == doctest::Approx(1.0));  // 0.5/(1-0.5)
}
