#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace seasyn {

/// Block-diagonal symmetric matrix, one dense block per entry.
using BlockMat = std::vector<Eigen::MatrixXd>;

/// Linear SDP in dual (LMI) form:
///
///   maximize    b' y
///   subject to  S = C - sum_i y_i A_i,   S >= 0 (each block PSD)
///
/// with C and A_i sharing one block-diagonal structure. Solved by an
/// infeasible-start primal-dual path-following method (predictor-corrector,
/// HKM scaling); all blocks are dense, intended for small problems.
struct SdpProblem {
    std::vector<int>      block_sizes;
    BlockMat              C;
    std::vector<BlockMat> A;  // one BlockMat per scalar variable
    Eigen::VectorXd       b;

    int n_vars() const { return static_cast<int>(A.size()); }
    void validate() const;
};

struct SdpOptions {
    int    max_iterations = 250;
    double gap_tol = 1e-8;        // relative duality gap
    double feas_tol = 1e-9;       // relative primal/dual residuals
    double step_fraction = 0.98;  // fraction of the step to the cone boundary
    bool   trace = false;         // per-iteration diagnostics on stderr
    // When positive, adds |y_i| <= variable_bound as an extra diagonal block;
    // keeps flat problems compact so the optimum is attained.
    double variable_bound = 0.0;
    // Optional early termination: called with the current dual iterate once
    // both residuals are small; returning true stops the solve.
    std::function<bool(const Eigen::VectorXd&)> early_stop;
};

struct SdpSolution {
    enum class Status { Optimal, EarlyStopped, MaxIterations, NumericalTrouble };

    Status          status = Status::NumericalTrouble;
    Eigen::VectorXd y;
    double          objective = 0.0;
    double          duality_gap = 0.0;      // relative
    double          primal_residual = 0.0;  // relative
    double          dual_residual = 0.0;    // relative
    int             iterations = 0;

    bool usable() const {
        return status == Status::Optimal || status == Status::EarlyStopped;
    }
};

SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& options = {});

// Smallest eigenvalue across the blocks of C - sum_i y_i A_i; the true
// feasibility margin of a dual point independent of solver internals.
double lmi_margin(const SdpProblem& problem, const Eigen::VectorXd& y);

}  // namespace seasyn
