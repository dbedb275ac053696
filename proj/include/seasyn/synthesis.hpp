#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "seasyn/sea_model.hpp"
#include "seasyn/state_space.hpp"

namespace seasyn {

/// Norm bounds defining the mixed synthesis constraint set: an H-infinity
/// bound on the weighted matching error and an H2 bound on the weighted
/// control effort, both over all exogenous inputs.
struct SynthesisBounds {
    double hinf_error_bound = 0.0;  // gamma_e
    double h2_control_bound = 0.0;  // gamma_u

    void validate() const;
};

/// Dynamic output-feedback controller x_k' = A_k x_k + B_k y, u = C_k x_k.
/// The feedthrough is kept at zero so the control-effort channel has no
/// direct exogenous feedthrough and its H2 norm stays finite.
struct ControllerRealization {
    Eigen::MatrixXd A_k;
    Eigen::MatrixXd B_k;  // order x 2 (tau_L, e)
    Eigen::MatrixXd C_k;  // 1 x order
    Eigen::MatrixXd D_k;  // 1 x 2, identically zero

    int order() const { return static_cast<int>(A_k.rows()); }
};

/// Plant and controller in feedback; inputs (phi_L, d, n), outputs
/// (e_tilde, u_tilde, tau_L, e). States are [plant; controller].
struct ClosedLoopSystem {
    StateSpaceModel       sys;
    int                   plant_order = 0;
    int                   controller_order = 0;
    ControllerRealization controller;

    // Velocity command omega_d reconstructed from the controller states.
    Eigen::RowVectorXd control_row() const;
};

struct VerificationReport {
    double          hinf_error = 0.0;  // ||T_{w -> e_tilde}||_inf
    double          h2_control = 0.0;  // ||T_{w -> u_tilde}||_2
    double          spectral_abscissa = 0.0;
    SynthesisBounds bounds;
    bool            pass = false;
};

struct SynthesisOptions {
    // Bounds are shrunk by this factor inside the LMI so the recovered
    // controller still meets the stated bounds after floating-point loss.
    double bound_shrink = 0.999;
    // When positive, the SDP stops as soon as the LMIs hold with this
    // absolute margin instead of running to the deepest feasible point.
    double feasibility_margin_stop = 0.0;
    // Margin below which the solve is declared infeasible.
    double min_margin = 1e-7;

    // Selection among feasible points: after the margin maximization, a
    // second solve can re-center the solution at a fraction of the best
    // margin under a trace objective on the Lyapunov blocks.
    enum class Selection { DeepestPoint, MinTraceXY, MinTraceX, MinTraceY };
    Selection selection = Selection::DeepestPoint;
    double    margin_fraction = 0.5;  // margin floor for the second solve
};

struct SynthesisResult {
    ControllerRealization    controller;
    double                   lmi_margin = 0.0;  // smallest LMI eigenvalue at the solution
    int                      sdp_iterations = 0;
    std::vector<std::string> warnings;
};

ClosedLoopSystem close_loop(const GeneralizedPlant& plant, const ControllerRealization& k);

/// Mixed H2/H-infinity output-feedback synthesis: a single Lyapunov variable
/// certifies both channel bounds; the resulting matrix inequalities are
/// linearized by the standard change of controller variables and solved as a
/// semidefinite feasibility problem (margin maximization). Throws
/// Infeasible when no controller meets the bounds and RecoveryFailure when
/// the change-of-variables inversion is too ill-conditioned.
SynthesisResult synthesize_mixed(const GeneralizedPlant& plant, const SynthesisBounds& bounds,
                                 const SynthesisOptions& options = {});

/// Independent a-posteriori check of both closed-loop norms and stability,
/// computed with the Hamiltonian bisection and Gramian routines rather than
/// anything from the synthesis path. Never throws on failed bounds.
VerificationReport verify(const GeneralizedPlant& plant, const ControllerRealization& k,
                          const SynthesisBounds& bounds);

}  // namespace seasyn
