#pragma once

#include <Eigen/Dense>
#include <random>

#include "seasyn/sea_model.hpp"
#include "seasyn/state_space.hpp"

namespace seasyn::testing {

/// Random stable state-space system with eigenvalue damping ratio at least
/// zeta_min and natural frequencies in [w_lo, w_hi]; D = 0.
StateSpaceModel random_stable_system(std::mt19937_64& rng, int n, int m, int p,
                                     double zeta_min = 0.1, double w_lo = 0.05, double w_hi = 50.0);

/// Random proper SISO transfer function with real/conjugate roots in a box;
/// may be unstable. deg(num) <= deg(den) = n.
RationalTransferFunction random_transfer_function(std::mt19937_64& rng, int n);

/// Exact zero-order-hold style integration of x' = A x (+ impulse initial
/// state) via the matrix exponential; returns the output energy
/// integral_0^T ||C e^{At} B e_j||^2 dt summed over input columns
/// (trapezoid rule on a step h grid). Independent oracle for the H2 norm.
double impulse_response_energy(const StateSpaceModel& sys, double duration, double step);

/// Exact-propagator simulation of x' = Ax + B w(t) with w sampled and held
/// piecewise-linearly; oracle for the RK4 integrator. Returns outputs y(t_k).
Eigen::MatrixXd exact_forced_response(const StateSpaceModel& sys,
                                      const Eigen::MatrixXd& w_samples,  // m x (N+1)
                                      double step);

/// Measured parameters of the experimental platform.
SeaParameters table_parameters();

}  // namespace seasyn::testing

#include "seasyn/synthesis.hpp"

namespace seasyn::testing {

struct SynthesizedCase {
    GeneralizedPlant      plant;
    DesiredImpedance      impedance;
    SynthesisBounds       bounds;
    ControllerRealization controller;
};

/// The three pure-stiffness cases (0.3, 0.6, 0.9 of the physical spring)
/// with their norm bounds, synthesized once and cached for the test run.
const SynthesizedCase& cached_stiffness_case(int index);

}  // namespace seasyn::testing
