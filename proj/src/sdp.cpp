#include "seasyn/sdp.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "seasyn/errors.hpp"

namespace seasyn {

namespace {

BlockMat zeros_like(const std::vector<int>& sizes) {
    BlockMat out;
    out.reserve(sizes.size());
    for (int s : sizes) {
        out.push_back(Eigen::MatrixXd::Zero(s, s));
    }
    return out;
}

BlockMat identity_like(const std::vector<int>& sizes, double scale) {
    BlockMat out;
    out.reserve(sizes.size());
    for (int s : sizes) {
        out.push_back(scale * Eigen::MatrixXd::Identity(s, s));
    }
    return out;
}

double inner(const BlockMat& a, const BlockMat& b) {
    double acc = 0.0;
    for (size_t k = 0; k < a.size(); ++k) {
        acc += (a[k].array() * b[k].array()).sum();
    }
    return acc;
}

double frob(const BlockMat& a) {
    double acc = 0.0;
    for (const auto& m : a) {
        acc += m.squaredNorm();
    }
    return std::sqrt(acc);
}

void axpy(BlockMat& y, double alpha, const BlockMat& x) {
    for (size_t k = 0; k < y.size(); ++k) {
        y[k] += alpha * x[k];
    }
}

void symmetrize(BlockMat& a) {
    for (auto& m : a) {
        m = 0.5 * (m + m.transpose()).eval();
    }
}

// Largest step alpha with V + alpha*dV staying PSD (+inf if unconstrained).
double max_step(const BlockMat& V, const BlockMat& dV) {
    double alpha = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < V.size(); ++k) {
        if (V[k].rows() == 0) continue;
        Eigen::LLT<Eigen::MatrixXd> llt(V[k]);
        if (llt.info() != Eigen::Success) {
            return 0.0;
        }
        const Eigen::MatrixXd& L = llt.matrixL();
        Eigen::MatrixXd W = L.triangularView<Eigen::Lower>().solve(dV[k]);
        W = L.triangularView<Eigen::Lower>().solve(W.transpose()).transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (W + W.transpose()),
                                                          Eigen::EigenvaluesOnly);
        const double lmin = es.eigenvalues().minCoeff();
        if (lmin < 0.0) {
            alpha = std::min(alpha, -1.0 / lmin);
        }
    }
    return alpha;
}

double trace_product(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q) {
    return (P.array() * Q.transpose().array()).sum();
}

}  // namespace

void SdpProblem::validate() const {
    if (b.size() != n_vars()) {
        throw DimensionMismatch("sdp: objective length does not match variable count");
    }
    if (C.size() != block_sizes.size()) {
        throw DimensionMismatch("sdp: C block count mismatch");
    }
    for (const auto& Ai : A) {
        if (Ai.size() != block_sizes.size()) {
            throw DimensionMismatch("sdp: constraint block count mismatch");
        }
    }
}

double lmi_margin(const SdpProblem& problem, const Eigen::VectorXd& y) {
    double margin = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < problem.block_sizes.size(); ++k) {
        if (problem.block_sizes[k] == 0) continue;
        Eigen::MatrixXd S = problem.C[k];
        for (int i = 0; i < problem.n_vars(); ++i) {
            S -= y(i) * problem.A[i][k];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()),
                                                          Eigen::EigenvaluesOnly);
        margin = std::min(margin, es.eigenvalues().minCoeff());
    }
    return margin;
}

SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& opt) {
    problem.validate();
    SdpProblem boxed;
    const SdpProblem* active = &problem;
    if (opt.variable_bound > 0.0) {
        // Append scalar blocks (1 -+ y_i/rho) per variable, normalized to
        // unit scale so they do not skew the iteration.
        boxed = problem;
        const Eigen::MatrixXd one = Eigen::MatrixXd::Constant(1, 1, 1.0);
        const Eigen::MatrixXd coeff = Eigen::MatrixXd::Constant(1, 1, 1.0 / opt.variable_bound);
        const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, 1);
        for (int i = 0; i < problem.n_vars(); ++i) {
            boxed.block_sizes.push_back(1);
            boxed.block_sizes.push_back(1);
            boxed.C.push_back(one);
            boxed.C.push_back(one);
            for (int j = 0; j < problem.n_vars(); ++j) {
                boxed.A[j].push_back(i == j ? coeff : zero);
                boxed.A[j].push_back(i == j ? (-coeff).eval() : zero);
            }
        }
        active = &boxed;
    }
    const SdpProblem& prob = *active;
    const int d = prob.n_vars();
    const auto& sizes = prob.block_sizes;
    int ntot = 0;
    for (int s : sizes) ntot += s;
    if (ntot == 0 || d == 0) {
        throw std::invalid_argument("sdp: empty problem");
    }

    const double normC = frob(prob.C);
    const double normb = prob.b.norm();
    double normA = 1e-12;
    for (const auto& Ai : prob.A) {
        normA = std::max(normA, frob(Ai));
    }

    // Infeasible start on the central ray.
    const double rho_d = 10.0 * std::max({1.0, normC / std::sqrt((double)ntot), normA});
    double rho_p = 1.0;
    for (int i = 0; i < d; ++i) {
        rho_p = std::max(rho_p, (1.0 + std::abs(prob.b(i))) / (1.0 + frob(prob.A[i])));
    }
    rho_p *= 10.0;

    BlockMat X = identity_like(sizes, rho_p);
    BlockMat S = identity_like(sizes, rho_d);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(d);

    SdpSolution best;
    best.y = y;

    Eigen::MatrixXd M(d, d);
    Eigen::VectorXd rp(d), h(d), g(d), kvec(d);
    std::vector<BlockMat> AX(d), ASinv(d);

    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        // Residuals.
        BlockMat Rd = prob.C;
        axpy(Rd, -1.0, S);
        for (int i = 0; i < d; ++i) {
            axpy(Rd, -y(i), prob.A[i]);
        }
        for (int i = 0; i < d; ++i) {
            rp(i) = prob.b(i) - inner(prob.A[i], X);
        }
        const double gap = inner(X, S);
        const double mu = gap / ntot;
        const double obj_dual = prob.b.dot(y);
        const double obj_primal = inner(prob.C, X);
        const double rel_gap = std::abs(gap) / (1.0 + std::abs(obj_primal) + std::abs(obj_dual));
        const double pinf = rp.norm() / (1.0 + normb);
        const double dinf = frob(Rd) / (1.0 + normC);

        best.y = y;
        best.objective = obj_dual;
        best.duality_gap = rel_gap;
        best.primal_residual = pinf;
        best.dual_residual = dinf;
        best.iterations = iter;

        if (opt.trace) {
            std::fprintf(stderr, "sdp iter %3d obj %+.6e gap %.2e pinf %.2e dinf %.2e\n", iter,
                         obj_dual, rel_gap, pinf, dinf);
        }

        if (pinf <= opt.feas_tol && dinf <= opt.feas_tol && rel_gap <= opt.gap_tol) {
            best.status = SdpSolution::Status::Optimal;
            return best;
        }
        if (opt.early_stop && pinf <= opt.feas_tol && dinf <= opt.feas_tol &&
            opt.early_stop(y)) {
            best.status = SdpSolution::Status::EarlyStopped;
            return best;
        }

        // Factorizations and Schur complement M_ij = tr(A_i X A_j S^{-1}).
        BlockMat Sinv(sizes.size());
        bool factor_ok = true;
        for (size_t k = 0; k < sizes.size(); ++k) {
            if (sizes[k] == 0) {
                Sinv[k].resize(0, 0);
                continue;
            }
            Eigen::LLT<Eigen::MatrixXd> llt(S[k]);
            if (llt.info() != Eigen::Success) {
                factor_ok = false;
                break;
            }
            Sinv[k] = llt.solve(Eigen::MatrixXd::Identity(sizes[k], sizes[k]));
        }
        if (!factor_ok) {
            best.status = SdpSolution::Status::NumericalTrouble;
            return best;
        }

        for (int i = 0; i < d; ++i) {
            AX[i].resize(sizes.size());
            ASinv[i].resize(sizes.size());
            for (size_t k = 0; k < sizes.size(); ++k) {
                AX[i][k] = prob.A[i][k] * X[k];
                ASinv[i][k] = prob.A[i][k] * Sinv[k];
            }
        }
        for (int i = 0; i < d; ++i) {
            for (int j = i; j < d; ++j) {
                double acc = 0.0;
                for (size_t k = 0; k < sizes.size(); ++k) {
                    acc += trace_product(AX[i][k], ASinv[j][k]);
                }
                M(i, j) = acc;
                M(j, i) = acc;
            }
        }

        BlockMat RdSinv(sizes.size());
        for (size_t k = 0; k < sizes.size(); ++k) {
            RdSinv[k] = Rd[k] * Sinv[k];
        }
        for (int i = 0; i < d; ++i) {
            double hacc = 0.0, gacc = 0.0;
            for (size_t k = 0; k < sizes.size(); ++k) {
                hacc += trace_product(AX[i][k], RdSinv[k]);
                gacc += (prob.A[i][k].array() * Sinv[k].array()).sum();
            }
            h(i) = hacc;
            g(i) = gacc;
        }

        Eigen::LDLT<Eigen::MatrixXd> Mldlt(M);
        if (Mldlt.info() != Eigen::Success || !Mldlt.isPositive()) {
            M.diagonal().array() += 1e-12 * (1.0 + M.diagonal().cwiseAbs().maxCoeff());
            Mldlt.compute(M);
        }

        // Predictor (affine scaling) direction.
        const Eigen::VectorXd dy_aff = Mldlt.solve(prob.b + h);
        BlockMat dS_aff = Rd;
        for (int i = 0; i < d; ++i) {
            axpy(dS_aff, -dy_aff(i), prob.A[i]);
        }
        BlockMat dX_aff = X;
        for (size_t k = 0; k < sizes.size(); ++k) {
            dX_aff[k] = -X[k] - X[k] * dS_aff[k] * Sinv[k];
        }
        symmetrize(dX_aff);

        const double ap_aff = std::min(1.0, max_step(X, dX_aff));
        const double ad_aff = std::min(1.0, max_step(S, dS_aff));
        double gap_aff = 0.0;
        {
            BlockMat Xa = X, Sa = S;
            axpy(Xa, ap_aff, dX_aff);
            axpy(Sa, ad_aff, dS_aff);
            gap_aff = inner(Xa, Sa);
        }
        double sigma = std::pow(std::max(0.0, gap_aff) / gap, 3.0);
        sigma = std::min(0.99, std::max(1e-6, sigma));

        // Corrector.
        BlockMat cross(sizes.size());
        for (size_t k = 0; k < sizes.size(); ++k) {
            cross[k] = dX_aff[k] * dS_aff[k] * Sinv[k];
        }
        for (int i = 0; i < d; ++i) {
            double acc = 0.0;
            for (size_t k = 0; k < sizes.size(); ++k) {
                acc += (prob.A[i][k].array() * cross[k].transpose().array()).sum();
            }
            kvec(i) = acc;
        }
        const Eigen::VectorXd dy = Mldlt.solve(prob.b + h + kvec - sigma * mu * g);
        BlockMat dS = Rd;
        for (int i = 0; i < d; ++i) {
            axpy(dS, -dy(i), prob.A[i]);
        }
        BlockMat dX(sizes.size());
        for (size_t k = 0; k < sizes.size(); ++k) {
            dX[k] = sigma * mu * Sinv[k] - X[k] - cross[k] - X[k] * dS[k] * Sinv[k];
        }
        symmetrize(dX);

        const double ap = std::min(1.0, opt.step_fraction * max_step(X, dX));
        const double ad = std::min(1.0, opt.step_fraction * max_step(S, dS));
        if (ap < 1e-10 && ad < 1e-10) {
            best.status = SdpSolution::Status::NumericalTrouble;
            return best;
        }
        axpy(X, ap, dX);
        axpy(S, ad, dS);
        y += ad * dy;
        best.iterations = iter + 1;
    }
    best.status = SdpSolution::Status::MaxIterations;
    return best;
}

}  // namespace seasyn
