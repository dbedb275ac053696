#include "seasyn/sea_model.hpp"

#include <cmath>
#include <stdexcept>

#include "seasyn/errors.hpp"

namespace seasyn {

void SeaParameters::validate() const {
    if (!(motor_inertia > 0.0)) throw ConfigError("motor_inertia must be > 0");
    if (!(motor_damping >= 0.0)) throw ConfigError("motor_damping must be >= 0");
    if (!(spring_stiffness > 0.0)) throw ConfigError("spring_stiffness must be > 0");
    if (!(velocity_loop_kp > 0.0)) throw ConfigError("velocity_loop_kp must be > 0");
    if (!(velocity_loop_ki > 0.0)) throw ConfigError("velocity_loop_ki must be > 0");
    if (!(motor_velocity_limit > 0.0)) throw ConfigError("motor_velocity_limit must be > 0");
}

void DesiredImpedance::validate() const {
    if (virtual_inertia < 0.0 || virtual_damping < 0.0 || virtual_stiffness < 0.0) {
        throw ConfigError("desired impedance terms must be nonnegative");
    }
    if (virtual_inertia == 0.0 && virtual_damping == 0.0 && virtual_stiffness == 0.0) {
        throw ConfigError("desired impedance must have at least one positive term");
    }
}

namespace {

void require_stable_proper(const RationalTransferFunction& w, const char* name) {
    if (!w.is_proper()) {
        throw std::invalid_argument(std::string(name) + " must be proper");
    }
    if (w.den().degree() > 0) {
        for (const auto& r : w.den().roots()) {
            if (r.real() >= -1e-12) {
                throw std::invalid_argument(std::string(name) + " must be stable");
            }
        }
    }
}

}  // namespace

void WeightingSet::validate(const DesiredImpedance& impedance) const {
    require_stable_proper(error_weight, "error_weight");
    require_stable_proper(control_weight, "control_weight");
    require_stable_proper(disturbance_weight, "disturbance_weight");
    require_stable_proper(noise_weight, "noise_weight");
    require_stable_proper(motion_filter, "motion_filter");
    if (!error_weight.num().is_zero()) {
        for (const auto& r : error_weight.num().roots()) {
            if (r.real() >= -1e-12) {
                throw std::invalid_argument("error_weight must be minimum-phase");
            }
        }
    }
    const int rd = motion_filter.relative_degree();
    if (impedance.virtual_inertia > 0.0 && rd < 2) {
        throw ImproperSystem("motion filter relative degree must be >= 2 to render inertia");
    }
    if (impedance.virtual_inertia == 0.0 && impedance.virtual_damping > 0.0 && rd < 1) {
        throw ImproperSystem("motion filter relative degree must be >= 1 to render damping");
    }
}

RationalTransferFunction design_We(double peak_sensitivity, double bandwidth_rad_s,
                                   double steady_error) {
    if (!(peak_sensitivity >= 1.0) || !(bandwidth_rad_s > 0.0) || !(steady_error > 0.0) ||
        !(steady_error < 1.0)) {
        throw std::invalid_argument("design_We: need M >= 1, w0 > 0, 0 < eps < 1");
    }
    return {Polynomial({bandwidth_rad_s, 1.0 / peak_sensitivity}),
            Polynomial({bandwidth_rad_s * steady_error, 1.0})};
}

RationalTransferFunction lowpass2(double cutoff_rad_s) {
    if (!(cutoff_rad_s > 0.0)) {
        throw std::invalid_argument("lowpass2: cutoff must be positive");
    }
    const RationalTransferFunction lp{Polynomial({cutoff_rad_s}), Polynomial({cutoff_rad_s, 1.0})};
    return lp * lp;
}

WeightingSet default_weights(RationalTransferFunction motion_filter) {
    WeightingSet w;
    w.peak_sensitivity = 1.0;
    w.bandwidth = 60.0;
    w.steady_error = 0.005;
    w.error_weight = design_We(w.peak_sensitivity, w.bandwidth, w.steady_error);
    w.control_weight = RationalTransferFunction::constant(1.0 / 44.0);
    w.disturbance_weight = RationalTransferFunction::constant(0.1);
    w.noise_weight = RationalTransferFunction::constant(0.1);
    w.motion_filter = std::move(motion_filter);
    return w;
}

std::pair<RationalTransferFunction, RationalTransferFunction> build_sea_plant(
    const SeaParameters& p) {
    const double ja = p.motor_inertia;
    const double bf = p.motor_damping;
    const double ks = p.spring_stiffness;
    const double kp = p.velocity_loop_kp;
    const double ki = p.velocity_loop_ki;

    RationalTransferFunction command_path{Polynomial({ki * ks, kp * ks}),
                                          Polynomial({0.0, ki + ks, bf + kp, ja})};
    RationalTransferFunction motion_path{Polynomial({-ks * ki, -ks * (bf + kp), -ks * ja}),
                                         Polynomial({ki + ks, bf + kp, ja})};
    return {std::move(command_path), std::move(motion_path)};
}

std::pair<RationalTransferFunction, RationalTransferFunction> desired_models(
    const DesiredImpedance& d) {
    Polynomial pd({d.virtual_stiffness, d.virtual_damping, d.virtual_inertia});
    RationalTransferFunction desired_poly{pd, Polynomial::constant(1.0)};
    RationalTransferFunction desired_impedance{pd, Polynomial::identity_s()};
    return {std::move(desired_poly), std::move(desired_impedance)};
}

namespace {

// A scalar signal expressed as a linear map over the stacked state and the
// four external inputs (phi_L, d, n, omega_d).
struct Lin {
    Eigen::RowVectorXd x;
    Eigen::RowVectorXd u;

    Lin(int n_states, int n_inputs) : x(Eigen::RowVectorXd::Zero(n_states)),
                                      u(Eigen::RowVectorXd::Zero(n_inputs)) {}
    Lin& add(const Lin& other, double gain) {
        x += gain * other.x;
        u += gain * other.u;
        return *this;
    }
};

}  // namespace

GeneralizedPlant build_generalized_plant(const SeaParameters& p, const DesiredImpedance& d,
                                         const WeightingSet& w) {
    p.validate();
    d.validate();
    w.validate(d);

    const double ja = p.motor_inertia;
    const double bf = p.motor_damping;
    const double ks = p.spring_stiffness;
    const double kp = p.velocity_loop_kp;
    const double ki = p.velocity_loop_ki;
    const double md = d.virtual_inertia;
    const double bd = d.virtual_damping;
    const double kd = d.virtual_stiffness;

    const StateSpaceModel We = realize(w.error_weight);
    const StateSpaceModel Wu = realize(w.control_weight);
    const StateSpaceModel Wd = realize(w.disturbance_weight);
    const StateSpaceModel Wn = realize(w.noise_weight);
    const StateSpaceModel Wphi = realize(w.motion_filter);

    const int n_phi = Wphi.n_states();
    const int n_d = Wd.n_states();
    const int n_n = Wn.n_states();
    const int n_u = Wu.n_states();
    const int n_e = We.n_states();

    // State layout: [pi integrator, motor velocity, cable displacement,
    //                motion-filter, disturbance-weight, noise-weight,
    //                control-weight, error-weight] states.
    const int ofs_phi = 3;
    const int ofs_d = ofs_phi + n_phi;
    const int ofs_n = ofs_d + n_d;
    const int ofs_u = ofs_n + n_n;
    const int ofs_e = ofs_u + n_u;
    const int n = ofs_e + n_e;
    const int m = 4;  // phi_L, d, n, omega_d

    constexpr int kPhiL = 0, kDist = 1, kNoise = 2, kCmd = 3;

    auto state_sel = [&](int index) {
        Lin s(n, m);
        s.x(index) = 1.0;
        return s;
    };
    auto input_sel = [&](int index) {
        Lin s(n, m);
        s.u(index) = 1.0;
        return s;
    };
    auto weight_output = [&](const StateSpaceModel& wsys, int ofs, int input_index) {
        Lin s(n, m);
        if (wsys.n_states() > 0) {
            s.x.segment(ofs, wsys.n_states()) = wsys.C.row(0);
        }
        s.u(input_index) = wsys.D(0, 0);
        return s;
    };

    const Lin dist_w = weight_output(Wd, ofs_d, kDist);     // weighted disturbance
    const Lin noise_w = weight_output(Wn, ofs_n, kNoise);   // weighted noise
    const Lin motion_w = weight_output(Wphi, ofs_phi, kPhiL);

    // Velocity command seen by the motor loop: control plus weighted disturbance.
    Lin cmd(n, m);
    cmd.add(input_sel(kCmd), 1.0).add(dist_w, 1.0);

    // Interaction torque from spring deflection; the noise corrupts the
    // measured hand position, so it enters with opposite sign to the motion.
    Lin tau_L(n, m);
    tau_L.add(state_sel(2), ks).add(motion_w, -ks).add(noise_w, ks);

    // Desired torque path -tau_d = P_d applied to the filtered motion. The
    // derivatives are formed from the filter realization, which is exact as
    // long as the filter has the relative degree checked in validate().
    Lin tau_d_neg(n, m);
    if (n_phi > 0) {
        const Eigen::RowVectorXd c = Wphi.C.row(0);
        Eigen::RowVectorXd cx = kd * c + bd * c * Wphi.A + md * c * Wphi.A * Wphi.A;
        tau_d_neg.x.segment(ofs_phi, n_phi) = cx;
        const double b_feed = bd * (c * Wphi.B)(0, 0) + md * (c * Wphi.A * Wphi.B)(0, 0);
        tau_d_neg.u(kPhiL) = kd * Wphi.D(0, 0) + b_feed;
    } else {
        tau_d_neg.u(kPhiL) = kd * Wphi.D(0, 0);
    }

    Lin err(n, m);
    err.add(tau_d_neg, -1.0).add(tau_L, -1.0);

    Lin err_w(n, m);  // weighted error
    if (n_e > 0) err_w.x.segment(ofs_e, n_e) = We.C.row(0);
    err_w.add(err, We.D(0, 0));

    Lin ctrl_w(n, m);  // weighted control
    if (n_u > 0) ctrl_w.x.segment(ofs_u, n_u) = Wu.C.row(0);
    ctrl_w.add(input_sel(kCmd), Wu.D(0, 0));

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, m);

    auto set_row = [&](int row, const Lin& s) {
        A.row(row) = s.x;
        B.row(row) = s.u;
    };

    // Velocity-loop integrator, motor velocity, cable displacement.
    Lin pi_dot(n, m);
    pi_dot.add(cmd, 1.0).add(state_sel(1), -1.0);
    set_row(0, pi_dot);

    Lin omega_dot(n, m);
    omega_dot.add(cmd, kp / ja)
        .add(state_sel(1), -(kp + bf) / ja)
        .add(state_sel(0), ki / ja)
        .add(tau_L, -1.0 / ja);
    set_row(1, omega_dot);

    set_row(2, state_sel(1));

    auto set_weight_block = [&](const StateSpaceModel& wsys, int ofs, int input_index) {
        if (wsys.n_states() == 0) return;
        A.block(ofs, ofs, wsys.n_states(), wsys.n_states()) = wsys.A;
        B.block(ofs, input_index, wsys.n_states(), 1) = wsys.B;
    };
    set_weight_block(Wphi, ofs_phi, kPhiL);
    set_weight_block(Wd, ofs_d, kDist);
    set_weight_block(Wn, ofs_n, kNoise);
    set_weight_block(Wu, ofs_u, kCmd);
    // Error weight is driven by the (state-dependent) error signal.
    if (n_e > 0) {
        A.block(ofs_e, ofs_e, n_e, n_e) = We.A;
        A.block(ofs_e, 0, n_e, n) += We.B * err.x;
        B.block(ofs_e, 0, n_e, m) += We.B * err.u;
    }

    Eigen::MatrixXd C(4, n);
    Eigen::MatrixXd D(4, m);
    C.row(0) = err_w.x;   D.row(0) = err_w.u;
    C.row(1) = ctrl_w.x;  D.row(1) = ctrl_w.u;
    C.row(2) = tau_L.x;   D.row(2) = tau_L.u;
    C.row(3) = err.x;     D.row(3) = err.u;

    GeneralizedPlant plant;
    plant.sys = StateSpaceModel(std::move(A), std::move(B), std::move(C), std::move(D),
                                {"phi_L", "d", "n", "omega_d"},
                                {"e_tilde", "u_tilde", "tau_L", "e"});
    return plant;
}

SeaParameters sea_parameters_from_plant(const RationalTransferFunction& command_path,
                                        const RationalTransferFunction& motion_path,
                                        double rel_tol) {
    const auto g1 = command_path.normalized();
    const auto g2 = motion_path.normalized();
    if (g1.den().degree() != 3 || g1.num().degree() > 1 || g2.den().degree() != 2 ||
        g2.num().degree() != 2) {
        throw std::invalid_argument("plant transfer functions do not have the SEA structure");
    }
    const auto& n2 = g2.num().coeffs();
    const auto& d2 = g2.den().coeffs();
    const double ks = -n2[2] / d2[2];

    const auto& n1raw = g1.num().coeffs();
    const auto& d1 = g1.den().coeffs();
    std::vector<double> n1 = n1raw;
    n1.resize(2, 0.0);
    const double ki_beta = n1[0] / ks;
    const double ks_beta = d1[1] - ki_beta;
    const double beta = ks_beta / ks;
    if (!(beta > 0.0)) {
        throw std::invalid_argument("plant transfer functions do not have the SEA structure");
    }

    SeaParameters p;
    p.motor_inertia = d1[3] / beta;
    p.velocity_loop_kp = n1[1] / (ks * beta);
    p.motor_damping = d1[2] / beta - p.velocity_loop_kp;
    p.velocity_loop_ki = ki_beta / beta;
    p.spring_stiffness = ks;
    p.validate();

    // Round trip: the recovered parameters must regenerate both paths.
    const auto [r1, r2] = build_sea_plant(p);
    const auto check = [&](const RationalTransferFunction& a, const RationalTransferFunction& b,
                           const char* which) {
        const auto an = a.normalized();
        const auto bn = b.normalized();
        if (!an.num().almost_equal(bn.num(), rel_tol) || !an.den().almost_equal(bn.den(), rel_tol)) {
            throw std::invalid_argument(std::string("inconsistent SEA ") + which +
                                        " transfer function");
        }
    };
    check(r1, g1, "command-path");
    check(r2, g2, "motion-path");
    return p;
}

GeneralizedPlant build_generalized_plant(const RationalTransferFunction& command_path,
                                         const RationalTransferFunction& motion_path,
                                         const RationalTransferFunction& desired_poly,
                                         const WeightingSet& w) {
    const SeaParameters p = sea_parameters_from_plant(command_path, motion_path);
    if (desired_poly.den().degree() != 0 || desired_poly.num().degree() > 2) {
        throw std::invalid_argument("desired model must be a polynomial of degree <= 2");
    }
    const double den0 = desired_poly.den().coeffs()[0];
    std::vector<double> c = desired_poly.num().coeffs();
    c.resize(3, 0.0);
    DesiredImpedance d;
    d.virtual_stiffness = c[0] / den0;
    d.virtual_damping = c[1] / den0;
    d.virtual_inertia = c[2] / den0;
    return build_generalized_plant(p, d, w);
}

}  // namespace seasyn
