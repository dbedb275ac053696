#include "seasyn/norms.hpp"

#include <cmath>
#include <complex>

#include "seasyn/errors.hpp"
#include "seasyn/frequency_response.hpp"

namespace seasyn {

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q) {
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n || Q.rows() != n || Q.cols() != n) {
        throw DimensionMismatch("solve_lyapunov: A and Q must be square and same size");
    }
    if (n == 0) {
        return Eigen::MatrixXd(0, 0);
    }
    const auto stab = is_hurwitz(A);
    if (!stab.hurwitz) {
        throw NotHurwitz("solve_lyapunov: spectral abscissa " + std::to_string(stab.spectral_abscissa));
    }

    // Complex Schur reduction: A = U T U^H, then T Y + Y T^H = -U^H Q U is
    // solved column by column (each column is a shifted triangular solve).
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(A.cast<std::complex<double>>());
    const Eigen::MatrixXcd& T = schur.matrixT();
    const Eigen::MatrixXcd& U = schur.matrixU();
    const Eigen::MatrixXcd  Ct = -U.adjoint() * Q.cast<std::complex<double>>() * U;

    // (Y T^H) column j couples to columns k >= j of Y, so solve back to front.
    Eigen::MatrixXcd Y(n, n);
    for (int j = n - 1; j >= 0; --j) {
        Eigen::VectorXcd rhs = Ct.col(j);
        for (int k = j + 1; k < n; ++k) {
            rhs -= Y.col(k) * std::conj(T(j, k));
        }
        Eigen::MatrixXcd Tj = T;
        Tj.diagonal().array() += std::conj(T(j, j));
        // Upper-triangular back substitution.
        for (int i = n - 1; i >= 0; --i) {
            std::complex<double> acc = rhs(i);
            for (int k = i + 1; k < n; ++k) {
                acc -= Tj(i, k) * Y(k, j);
            }
            Y(i, j) = acc / Tj(i, i);
        }
    }
    Eigen::MatrixXd P = (U * Y * U.adjoint()).real();
    return 0.5 * (P + P.transpose());
}

double h2_norm(const StateSpaceModel& sys) {
    const auto stab = is_hurwitz(sys);
    if (!stab.hurwitz) {
        throw InfiniteH2Norm("h2_norm: system is not Hurwitz (abscissa " +
                             std::to_string(stab.spectral_abscissa) + ")");
    }
    const double dscale = std::max({1.0, sys.B.norm(), sys.C.norm()});
    if (sys.D.size() > 0 && sys.D.cwiseAbs().maxCoeff() > 1e-14 * dscale) {
        throw InfiniteH2Norm("h2_norm: nonzero feedthrough");
    }
    if (sys.n_states() == 0) {
        return 0.0;
    }
    const Eigen::MatrixXd P = solve_lyapunov(sys.A, sys.B * sys.B.transpose());
    const double tr = (sys.C * P * sys.C.transpose()).trace();
    return std::sqrt(std::max(0.0, tr));
}

namespace {

// True iff the Hamiltonian pencil for level gamma has an eigenvalue on the
// imaginary axis, i.e. gamma <= ||G||_inf (valid for gamma > sigma_max(D)).
bool hamiltonian_touches_axis(const StateSpaceModel& sys, double gamma) {
    const int n = sys.n_states();
    const int m = sys.n_inputs();
    const Eigen::MatrixXd& A = sys.A;
    const Eigen::MatrixXd& B = sys.B;
    const Eigen::MatrixXd& C = sys.C;
    const Eigen::MatrixXd& D = sys.D;

    const Eigen::MatrixXd R = gamma * gamma * Eigen::MatrixXd::Identity(m, m) - D.transpose() * D;
    const auto Rlu = R.partialPivLu();
    const Eigen::MatrixXd RinvDtC = Rlu.solve(D.transpose() * C);
    const Eigen::MatrixXd RinvBt = Rlu.solve(B.transpose());

    Eigen::MatrixXd H(2 * n, 2 * n);
    H.topLeftCorner(n, n) = A + B * RinvDtC;
    H.topRightCorner(n, n) = B * RinvBt;
    H.bottomLeftCorner(n, n) = -C.transpose() * (C + D * RinvDtC);
    H.bottomRightCorner(n, n) = -(A + B * RinvDtC).transpose();

    Eigen::EigenSolver<Eigen::MatrixXd> es(H, false);
    const double scale = std::max(1.0, H.norm());
    for (int i = 0; i < 2 * n; ++i) {
        const auto lam = es.eigenvalues()(i);
        if (std::abs(lam.real()) <= 1e-8 * std::max(1.0, std::abs(lam)) + 1e-12 * scale) {
            return true;
        }
    }
    return false;
}

}  // namespace

double hinf_norm(const StateSpaceModel& sys, double rel_tol) {
    const auto stab = is_hurwitz(sys);
    if (!stab.hurwitz) {
        throw NotHurwitz("hinf_norm: system is not Hurwitz (abscissa " +
                         std::to_string(stab.spectral_abscissa) + ")");
    }
    double sigma_d = 0.0;
    if (sys.D.size() > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.D);
        sigma_d = svd.singularValues()(0);
    }
    if (sys.n_states() == 0) {
        return sigma_d;
    }

    // Grid lower bound (includes DC).
    double lower = sigma_d;
    {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd0(sys.dc_gain());
        if (svd0.singularValues().size() > 0) {
            lower = std::max(lower, svd0.singularValues()(0));
        }
        const auto fr = frequency_response(sys, log_grid(1e-3, 1e5, 100));
        for (double s : sigma_max(fr)) {
            lower = std::max(lower, s);
        }
    }
    if (lower == 0.0) {
        return 0.0;  // zero system
    }

    double upper = 2.0 * lower + sigma_d;
    int expand = 0;
    while (hamiltonian_touches_axis(sys, upper)) {
        upper *= 2.0;
        if (++expand > 60) {
            throw Error("hinf_norm: failed to bracket the norm from above");
        }
    }
    while (upper - lower > rel_tol * upper) {
        const double mid = 0.5 * (lower + upper);
        if (mid <= sigma_d * (1.0 + 1e-12) || hamiltonian_touches_axis(sys, mid)) {
            lower = mid;
        } else {
            upper = mid;
        }
    }
    return upper;
}

}  // namespace seasyn
