#pragma once

#include <Eigen/Dense>

#include "seasyn/state_space.hpp"

namespace seasyn {

// Solves A P + P A^T + Q = 0 for symmetric P via the complex-Schur
// Bartels-Stewart reduction. A must be Hurwitz, Q symmetric.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q);

// H2 norm sqrt(trace(C P C^T)) with P the controllability Gramian.
// Throws InfiniteH2Norm when D != 0 or the system is not Hurwitz.
double h2_norm(const StateSpaceModel& sys);

// H-infinity norm via bisection on the Hamiltonian imaginary-eigenvalue
// test, bracketed from a 100-point log grid lower bound. The returned value
// is the certified upper end of the bracket, so it always dominates any
// finite-grid lower bound. rel_tol controls the bracket width.
double hinf_norm(const StateSpaceModel& sys, double rel_tol = 1e-6);

}  // namespace seasyn
