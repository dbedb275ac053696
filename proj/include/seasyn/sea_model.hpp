#pragma once

#include <utility>

#include "seasyn/state_space.hpp"
#include "seasyn/transfer_function.hpp"

namespace seasyn {

/// Identified parameters of the cable-driven SEA platform. The shaft radius
/// and gear ratio are carried as metadata only; no model equation uses them.
struct SeaParameters {
    double motor_inertia = 6.90e-4;         // kg*m^2
    double motor_damping = 0.0059;          // Nm/(rad/s)
    double spring_stiffness = 0.0484;       // Nm/rad; two parallel springs of 0.0242 each
    double velocity_loop_kp = 0.0457;       // Nm/(rad/s)
    double velocity_loop_ki = 1.3455;       // Nm/(rad/s)
    double motor_velocity_limit = 44.0;     // rad/s
    double shaft_radius = 7.25e-3;          // m (metadata)
    double gear_ratio = 14.0;               // dimensionless (metadata)

    void validate() const;  // throws ConfigError on violated invariants
};

/// Target mass-damper-spring model for the rendered impedance.
struct DesiredImpedance {
    double virtual_inertia = 0.0;    // kg*m^2
    double virtual_damping = 0.0;    // Nm/(rad/s)
    double virtual_stiffness = 0.0;  // Nm/rad

    void validate() const;  // nonnegative, at least one strictly positive
};

/// Weighting functions shaping the synthesis channels, plus the error-weight
/// design parameters they were built from.
struct WeightingSet {
    RationalTransferFunction error_weight;        // on the matching error
    RationalTransferFunction control_weight;      // on the velocity command
    RationalTransferFunction disturbance_weight;  // scales the disturbance input
    RationalTransferFunction noise_weight;        // scales the sensor noise input
    RationalTransferFunction motion_filter;       // pre-filter on the hand motion

    double peak_sensitivity = 1.0;  // M
    double bandwidth = 60.0;        // rad/s
    double steady_error = 0.005;    // epsilon

    void validate(const DesiredImpedance& impedance) const;
};

/// Error-weight (s/M + w0) / (s + w0*eps): magnitude 1/eps at DC, 1/M at
/// high frequency, crossover near w0.
RationalTransferFunction design_We(double peak_sensitivity, double bandwidth_rad_s,
                                   double steady_error);

// Second-order low-pass (wc/(s+wc))^2 used as the motion filter when the
// desired model contains inertia or damping terms.
RationalTransferFunction lowpass2(double cutoff_rad_s);

// Table defaults for the platform; motion_filter is unity for pure-stiffness
// rendering and must be relaxed (e.g. lowpass2(500)) otherwise.
WeightingSet default_weights(RationalTransferFunction motion_filter =
                                 RationalTransferFunction::constant(1.0));

/// Velocity-sourced SEA dynamics: returns the transfer functions from the
/// velocity command (and additive disturbance) and from the hand motion (and
/// subtractive noise) to the interaction torque.
///   command_path:  (Kpv s + Kiv) Ks / (Ja s^3 + (bf+Kpv) s^2 + (Kiv+Ks) s)
///   motion_path:  -(Ja s^2 + (bf+Kpv) s + Kiv) Ks / (Ja s^2 + (bf+Kpv) s + Kiv+Ks)
std::pair<RationalTransferFunction, RationalTransferFunction> build_sea_plant(
    const SeaParameters& p);

/// Desired torque-vs-position polynomial P_d = Md s^2 + Bd s + Kd (improper
/// when Md > 0; flagged, not rejected) and the impedance Z_d = P_d / s.
std::pair<RationalTransferFunction, RationalTransferFunction> desired_models(
    const DesiredImpedance& d);

/// Weighted generalized plant with channel groups
///   w = (phi_L, d, n),  u = omega_d,  z = (e_tilde, u_tilde),  y = (tau_L, e).
struct GeneralizedPlant {
    StateSpaceModel sys;  // inputs (phi_L, d, n, omega_d), outputs (e_tilde, u_tilde, tau_L, e)

    static constexpr int kNumExogenous = 3;
    static constexpr int kControlInput = 3;
    static constexpr int kWeightedError = 0;
    static constexpr int kWeightedControl = 1;
    static constexpr int kTorqueOutput = 2;
    static constexpr int kErrorOutput = 3;

    int order() const { return sys.n_states(); }

    Eigen::MatrixXd Bw() const { return sys.B.leftCols(kNumExogenous); }
    Eigen::MatrixXd Bu() const { return sys.B.col(kControlInput); }
    Eigen::MatrixXd Cz() const { return sys.C.topRows(2); }
    Eigen::MatrixXd Cy() const { return sys.C.bottomRows(2); }
    Eigen::MatrixXd Dzw() const { return sys.D.topRows(2).leftCols(kNumExogenous); }
    Eigen::MatrixXd Dzu() const { return sys.D.topRows(2).col(kControlInput); }
    Eigen::MatrixXd Dyw() const { return sys.D.bottomRows(2).leftCols(kNumExogenous); }
    Eigen::MatrixXd Dyu() const { return sys.D.bottomRows(2).col(kControlInput); }
};

/// Assembles the weighted generalized plant from the physical loop states
/// (velocity-loop integrator, motor velocity, cable displacement) plus one
/// state block per dynamic weight, so entries share states instead of being
/// realized one by one. Throws ImproperSystem when the desired model times
/// the motion filter would be improper (motion filter relative degree too
/// low for the requested inertia/damping terms).
GeneralizedPlant build_generalized_plant(const SeaParameters& p, const DesiredImpedance& d,
                                         const WeightingSet& w);

/// Same, but starting from the plant transfer functions and the desired
/// polynomial. The physical parameters are recovered from the coefficient
/// structure of the two paths (they are identifiable from it) so the shared
/// -state assembly above can be reused.
GeneralizedPlant build_generalized_plant(const RationalTransferFunction& command_path,
                                         const RationalTransferFunction& motion_path,
                                         const RationalTransferFunction& desired_poly,
                                         const WeightingSet& w);

// Inverse of build_sea_plant: recovers parameters from the two transfer
// functions, validating structural consistency to rel_tol.
SeaParameters sea_parameters_from_plant(const RationalTransferFunction& command_path,
                                        const RationalTransferFunction& motion_path,
                                        double rel_tol = 1e-6);

}  // namespace seasyn
