#include "seasyn/synthesis.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "seasyn/errors.hpp"
#include "seasyn/norms.hpp"
#include "seasyn/sdp.hpp"

namespace seasyn {

void SynthesisBounds::validate() const {
    if (!(hinf_error_bound > 0.0) || !(h2_control_bound > 0.0)) {
        throw std::invalid_argument("synthesis bounds must be strictly positive");
    }
}

Eigen::RowVectorXd ClosedLoopSystem::control_row() const {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(plant_order + controller_order);
    row.tail(controller_order) = controller.C_k.row(0);
    return row;
}

ClosedLoopSystem close_loop(const GeneralizedPlant& plant, const ControllerRealization& k) {
    const int n = plant.order();
    const int nk = k.order();
    const Eigen::MatrixXd A = plant.sys.A;
    const Eigen::MatrixXd Bw = plant.Bw();
    const Eigen::MatrixXd Bu = plant.Bu();
    const Eigen::MatrixXd Cy = plant.Cy();
    const Eigen::MatrixXd Dyw = plant.Dyw();
    const Eigen::MatrixXd Cz = plant.Cz();
    const Eigen::MatrixXd Dzw = plant.Dzw();
    const Eigen::MatrixXd Dzu = plant.Dzu();

    if (k.B_k.cols() != Cy.rows() || k.C_k.rows() != Bu.cols() || k.A_k.cols() != nk ||
        k.B_k.rows() != nk || k.C_k.cols() != nk) {
        throw DimensionMismatch("controller dimensions do not match the plant");
    }
    if (plant.Dyu().cwiseAbs().maxCoeff() > 0.0) {
        throw DimensionMismatch("plant must have no feedthrough from the control to y");
    }
    const Eigen::MatrixXd Dk = k.D_k;

    Eigen::MatrixXd Acl(n + nk, n + nk);
    Acl.topLeftCorner(n, n) = A + Bu * Dk * Cy;
    Acl.topRightCorner(n, nk) = Bu * k.C_k;
    Acl.bottomLeftCorner(nk, n) = k.B_k * Cy;
    Acl.bottomRightCorner(nk, nk) = k.A_k;

    Eigen::MatrixXd Bcl(n + nk, Bw.cols());
    Bcl.topRows(n) = Bw + Bu * Dk * Dyw;
    Bcl.bottomRows(nk) = k.B_k * Dyw;

    Eigen::MatrixXd Cz_cl(2, n + nk);
    Cz_cl.leftCols(n) = Cz + Dzu * Dk * Cy;
    Cz_cl.rightCols(nk) = Dzu * k.C_k;
    const Eigen::MatrixXd Dz_cl = Dzw + Dzu * Dk * Dyw;

    Eigen::MatrixXd Cy_cl(2, n + nk);
    Cy_cl.leftCols(n) = Cy;
    Cy_cl.rightCols(nk).setZero();

    Eigen::MatrixXd Ccl(4, n + nk);
    Ccl.topRows(2) = Cz_cl;
    Ccl.bottomRows(2) = Cy_cl;
    Eigen::MatrixXd Dcl(4, Bw.cols());
    Dcl.topRows(2) = Dz_cl;
    Dcl.bottomRows(2) = Dyw;

    ClosedLoopSystem cl;
    cl.sys = StateSpaceModel(std::move(Acl), std::move(Bcl), std::move(Ccl), std::move(Dcl),
                             {"phi_L", "d", "n"}, {"e_tilde", "u_tilde", "tau_L", "e"});
    cl.plant_order = n;
    cl.controller_order = nk;
    cl.controller = k;
    return cl;
}

namespace {

// Diagonal similarity scaling balancing row/column magnitudes of (A, B, C).
// Powers of two only, so it is exactly invertible in floating point.
Eigen::VectorXd balance_states(Eigen::MatrixXd& A, Eigen::MatrixXd& B, Eigen::MatrixXd& C) {
    const int n = static_cast<int>(A.rows());
    Eigen::VectorXd scale = Eigen::VectorXd::Ones(n);
    for (int sweep = 0; sweep < 20; ++sweep) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            double row = B.row(i).cwiseAbs().sum();
            double col = C.col(i).cwiseAbs().sum();
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                row += std::abs(A(i, j));
                col += std::abs(A(j, i));
            }
            if (row == 0.0 || col == 0.0) continue;
            const double f = std::exp2(std::round(0.5 * std::log2(row / col)));
            if (f >= 2.0 || f <= 0.5) {
                A.col(i) *= f;
                A.row(i) /= f;
                B.row(i) /= f;
                C.col(i) *= f;
                scale(i) *= f;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return scale;
}

struct LmiVariables {
    Eigen::MatrixXd X, Y, Ahat, Bhat, Chat, Q;
};

struct LmiLayout {
    int n = 0, mw = 0, pinf = 0, p2 = 0, my = 0;
    int n_sym = 0;
    int total = 0;

    explicit LmiLayout(int n_, int mw_, int pinf_, int p2_, int my_)
        : n(n_), mw(mw_), pinf(pinf_), p2(p2_), my(my_) {
        n_sym = n * (n + 1) / 2;
        const int q_sym = p2 * (p2 + 1) / 2;
        total = 2 * n_sym + n * n + n * my + n + q_sym + 1;  // Chat is 1 x n
    }

    LmiVariables unpack(const Eigen::VectorXd& v) const {
        LmiVariables out;
        int ofs = 0;
        auto take_sym = [&](int dim) {
            Eigen::MatrixXd M(dim, dim);
            for (int i = 0; i < dim; ++i) {
                for (int j = i; j < dim; ++j) {
                    M(i, j) = v(ofs);
                    M(j, i) = v(ofs);
                    ++ofs;
                }
            }
            return M;
        };
        out.X = take_sym(n);
        out.Y = take_sym(n);
        out.Ahat.resize(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) out.Ahat(i, j) = v(ofs++);
        }
        out.Bhat.resize(n, my);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < my; ++j) out.Bhat(i, j) = v(ofs++);
        }
        out.Chat.resize(1, n);
        for (int j = 0; j < n; ++j) out.Chat(0, j) = v(ofs++);
        out.Q = take_sym(p2);
        return out;
    }

    double margin_var(const Eigen::VectorXd& v) const { return v(total - 1); }
};

}  // namespace

SynthesisResult synthesize_mixed(const GeneralizedPlant& plant, const SynthesisBounds& bounds,
                                 const SynthesisOptions& opt) {
    bounds.validate();
    SynthesisResult result;

    const int n = plant.order();
    Eigen::MatrixXd A = plant.sys.A;
    Eigen::MatrixXd Bfull = plant.sys.B;
    Eigen::MatrixXd Cfull = plant.sys.C;
    if (std::getenv("SEASYN_NO_BALANCE") == nullptr) {
        balance_states(A, Bfull, Cfull);
    }

    const int mw = GeneralizedPlant::kNumExogenous;
    Eigen::MatrixXd Bw = Bfull.leftCols(mw);
    Eigen::MatrixXd Bu = Bfull.col(GeneralizedPlant::kControlInput);
    Eigen::MatrixXd Cy = Cfull.bottomRows(2);
    const Eigen::MatrixXd Dyw = plant.Dyw();
    if (plant.Dyu().cwiseAbs().maxCoeff() > 0.0) {
        throw std::invalid_argument("synthesis requires zero feedthrough from u to y");
    }

    // Diagnostics: any open-loop pole hugging the imaginary axis other than
    // the expected integrator at the origin.
    {
        Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
        for (int i = 0; i < n; ++i) {
            const auto lam = es.eigenvalues()(i);
            if (std::abs(lam.real()) < 1e-8 && std::abs(lam) > 1e-6) {
                result.warnings.push_back("open-loop pole near the imaginary axis at |s| = " +
                                          std::to_string(std::abs(lam)));
            }
        }
    }

    const double ge = opt.bound_shrink * bounds.hinf_error_bound;
    const double gu = opt.bound_shrink * bounds.h2_control_bound;

    // Channel normalization: both bounds become 1.
    Eigen::MatrixXd Cinf = Cfull.row(GeneralizedPlant::kWeightedError) / ge;
    Eigen::MatrixXd Dinfw = plant.Dzw().row(0) / ge;
    Eigen::MatrixXd Dinfu = plant.Dzu().row(0) / ge;
    Eigen::MatrixXd C2 = Cfull.row(GeneralizedPlant::kWeightedControl) / gu;
    Eigen::MatrixXd D2u = plant.Dzu().row(1) / gu;
    const Eigen::MatrixXd D2w = plant.Dzw().row(1);
    if (D2w.cwiseAbs().maxCoeff() > 1e-12 * (1.0 + plant.sys.D.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument(
            "H2 channel has direct exogenous feedthrough; its norm cannot be bounded");
    }

    const int pinf = 1, p2 = 1, my = 2;
    const LmiLayout layout(n, mw, pinf, p2, my);
    const Eigen::MatrixXd Inn = Eigen::MatrixXd::Identity(n, n);

    // Affine map from packed variables (plus margin t) to the LMI blocks:
    //   [X I; I Y] - tI,  -Linf - tI,  -L2a - tI,  L2b - tI,  (1 - tr W) - t.
    auto eval_blocks = [&](const Eigen::VectorXd& v_all) {
        const LmiVariables vs = layout.unpack(v_all.head(layout.total - 1));
        const double t = v_all(layout.total - 1);
        std::vector<Eigen::MatrixXd> blocks;

        Eigen::MatrixXd Bxy(2 * n, 2 * n);
        Bxy << vs.X, Inn, Inn, vs.Y;
        Bxy -= t * Eigen::MatrixXd::Identity(2 * n, 2 * n);
        blocks.push_back(Bxy);

        const Eigen::MatrixXd k11 = A * vs.X + vs.X * A.transpose() + Bu * vs.Chat +
                                    (Bu * vs.Chat).transpose();
        const Eigen::MatrixXd k12 = A + vs.Ahat.transpose();
        const Eigen::MatrixXd k22 = vs.Y * A + A.transpose() * vs.Y + vs.Bhat * Cy +
                                    (vs.Bhat * Cy).transpose();
        const Eigen::MatrixXd bw2 = vs.Y * Bw + vs.Bhat * Dyw;
        const Eigen::MatrixXd cinf1 = Cinf * vs.X + Dinfu * vs.Chat;

        Eigen::MatrixXd Linf(2 * n + mw + pinf, 2 * n + mw + pinf);
        Linf.setZero();
        Linf.block(0, 0, n, n) = k11;
        Linf.block(0, n, n, n) = k12;
        Linf.block(n, 0, n, n) = k12.transpose();
        Linf.block(n, n, n, n) = k22;
        Linf.block(0, 2 * n, n, mw) = Bw;
        Linf.block(n, 2 * n, n, mw) = bw2;
        Linf.block(2 * n, 0, mw, n) = Bw.transpose();
        Linf.block(2 * n, n, mw, n) = bw2.transpose();
        Linf.block(2 * n, 2 * n, mw, mw) = -Eigen::MatrixXd::Identity(mw, mw);
        Linf.block(0, 2 * n + mw, n, pinf) = cinf1.transpose();
        Linf.block(n, 2 * n + mw, n, pinf) = Cinf.transpose();
        Linf.block(2 * n + mw, 0, pinf, n) = cinf1;
        Linf.block(2 * n + mw, n, pinf, n) = Cinf;
        Linf.block(2 * n, 2 * n + mw, mw, pinf) = Dinfw.transpose();
        Linf.block(2 * n + mw, 2 * n, pinf, mw) = Dinfw;
        Linf.block(2 * n + mw, 2 * n + mw, pinf, pinf) = -Eigen::MatrixXd::Identity(pinf, pinf);
        blocks.push_back((-Linf - t * Eigen::MatrixXd::Identity(Linf.rows(), Linf.cols())).eval());

        // H2 channel in covariance form: the state inequality carries the
        // exogenous columns, the trace bound carries the performance rows.
        Eigen::MatrixXd L2a(2 * n + mw, 2 * n + mw);
        L2a.setZero();
        L2a.block(0, 0, n, n) = k11;
        L2a.block(0, n, n, n) = k12;
        L2a.block(n, 0, n, n) = k12.transpose();
        L2a.block(n, n, n, n) = k22;
        L2a.block(0, 2 * n, n, mw) = Bw;
        L2a.block(n, 2 * n, n, mw) = bw2;
        L2a.block(2 * n, 0, mw, n) = Bw.transpose();
        L2a.block(2 * n, n, mw, n) = bw2.transpose();
        L2a.block(2 * n, 2 * n, mw, mw) = -Eigen::MatrixXd::Identity(mw, mw);
        blocks.push_back((-L2a - t * Eigen::MatrixXd::Identity(L2a.rows(), L2a.cols())).eval());

        const Eigen::MatrixXd c21 = C2 * vs.X + D2u * vs.Chat;
        Eigen::MatrixXd L2b(2 * n + p2, 2 * n + p2);
        L2b.setZero();
        L2b.block(0, 0, n, n) = vs.X;
        L2b.block(0, n, n, n) = Inn;
        L2b.block(n, 0, n, n) = Inn;
        L2b.block(n, n, n, n) = vs.Y;
        L2b.block(0, 2 * n, n, p2) = c21.transpose();
        L2b.block(n, 2 * n, n, p2) = C2.transpose();
        L2b.block(2 * n, 0, p2, n) = c21;
        L2b.block(2 * n, n, p2, n) = C2;
        L2b.block(2 * n, 2 * n, p2, p2) = vs.Q;
        L2b -= t * Eigen::MatrixXd::Identity(L2b.rows(), L2b.cols());
        blocks.push_back(L2b);

        Eigen::MatrixXd tr_block(1, 1);
        tr_block(0, 0) = 1.0 - vs.Q.trace() - t;
        blocks.push_back(tr_block);
        return blocks;
    };

    const int d = layout.total;
    SdpProblem sdp;
    {
        const Eigen::VectorXd zero = Eigen::VectorXd::Zero(d);
        const auto F0 = eval_blocks(zero);
        for (const auto& blk : F0) {
            sdp.block_sizes.push_back(static_cast<int>(blk.rows()));
        }
        sdp.C = F0;
        sdp.A.resize(d);
        for (int i = 0; i < d; ++i) {
            Eigen::VectorXd ei = zero;
            ei(i) = 1.0;
            auto Fi = eval_blocks(ei);
            for (size_t k = 0; k < Fi.size(); ++k) {
                Fi[k] = -(Fi[k] - F0[k]).eval();  // A_i = -dF/dv_i
            }
            sdp.A[i] = std::move(Fi);
        }
        sdp.b = Eigen::VectorXd::Zero(d);
        sdp.b(d - 1) = 1.0;  // maximize the feasibility margin
    }

    SdpOptions sdp_opt;
    sdp_opt.trace = std::getenv("SEASYN_SDP_TRACE") != nullptr;
    sdp_opt.gap_tol = 1e-8;
    sdp_opt.feas_tol = 1e-9;
    if (opt.feasibility_margin_stop > 0.0) {
        sdp_opt.early_stop = [&](const Eigen::VectorXd& y) {
            return lmi_margin(sdp, y) + y(d - 1) >= opt.feasibility_margin_stop &&
                   y(d - 1) >= opt.feasibility_margin_stop;
        };
    }
    SdpSolution sol = solve_sdp(sdp, sdp_opt);

    // True feasibility margin of the returned point, independent of the
    // solver's internal state: smallest eigenvalue across all blocks with
    // the margin variable removed.
    auto margin_of = [&](Eigen::VectorXd y) {
        y(d - 1) = 0.0;
        double m = std::numeric_limits<double>::infinity();
        for (const auto& blk : eval_blocks(y)) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (blk + blk.transpose()),
                                                              Eigen::EigenvaluesOnly);
            m = std::min(m, es.eigenvalues().minCoeff());
        }
        return m;
    };
    double true_margin = margin_of(sol.y);
    result.sdp_iterations = sol.iterations;
    if (true_margin <= opt.min_margin) {
        throw Infeasible("no controller meets (gamma_e, gamma_u) = (" +
                         std::to_string(bounds.hinf_error_bound) + ", " +
                         std::to_string(bounds.h2_control_bound) +
                         "); best LMI margin " + std::to_string(true_margin));
    }

    if (opt.selection != SynthesisOptions::Selection::DeepestPoint) {
        // Re-center at a fixed fraction of the best margin under a trace
        // objective on the transformed Lyapunov blocks.
        const double t0 = opt.margin_fraction * true_margin;
        SdpProblem phase2;
        phase2.block_sizes = sdp.block_sizes;
        {
            Eigen::VectorXd fix = Eigen::VectorXd::Zero(d);
            fix(d - 1) = t0;
            phase2.C = eval_blocks(fix);
        }
        phase2.A.assign(sdp.A.begin(), sdp.A.end() - 1);
        phase2.b = Eigen::VectorXd::Zero(d - 1);
        // Diagonal entries of X come first in the packing, then Y's.
        {
            int ofs = 0;
            for (int i = 0; i < n; ++i) {
                const bool on_x = opt.selection == SynthesisOptions::Selection::MinTraceXY ||
                                  opt.selection == SynthesisOptions::Selection::MinTraceX;
                if (on_x) phase2.b(ofs) = -1.0;
                ofs += n - i;
            }
            for (int i = 0; i < n; ++i) {
                const bool on_y = opt.selection == SynthesisOptions::Selection::MinTraceXY ||
                                  opt.selection == SynthesisOptions::Selection::MinTraceY;
                if (on_y) phase2.b(ofs) = -1.0;
                ofs += n - i;
            }
        }
        SdpOptions opt2;
        opt2.gap_tol = 1e-8;
        opt2.feas_tol = 1e-9;
        opt2.trace = sdp_opt.trace;
        opt2.variable_bound = 100.0 * std::max(1.0, sol.y.cwiseAbs().maxCoeff());
        const SdpSolution sol2 = solve_sdp(phase2, opt2);
        if (std::getenv("SEASYN_SDP_TRACE") != nullptr) {
            std::fprintf(stderr, "phase2 status=%d obj=%g gap=%g pinf=%g dinf=%g iters=%d\n",
                         (int)sol2.status, sol2.objective, sol2.duality_gap, sol2.primal_residual,
                         sol2.dual_residual, sol2.iterations);
        }
        if (sol2.usable()) {
            Eigen::VectorXd y2(d);
            y2.head(d - 1) = sol2.y;
            y2(d - 1) = t0;
            const double m2 = margin_of(y2);
            if (m2 > opt.min_margin) {
                sol.y = y2;
                true_margin = m2;
            } else {
                result.warnings.push_back("selection phase returned a degenerate point; "
                                          "keeping the deepest feasible point");
            }
        }
    }
    result.lmi_margin = true_margin;

    // Controller recovery by inverting the change of variables with
    // N M^T = I - Y X factored through the SVD.
    const LmiVariables vs = layout.unpack(sol.y.head(d - 1));
    const Eigen::MatrixXd IYX = Inn - vs.Y * vs.X;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(IYX, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0 || smax / smin > 1e12) {
        throw RecoveryFailure("change-of-variables inversion condition number " +
                              std::to_string(smax / smin));
    }
    const Eigen::VectorXd sq = svd.singularValues().cwiseSqrt();
    const Eigen::MatrixXd N = svd.matrixU() * sq.asDiagonal();
    const Eigen::MatrixXd Mt = sq.asDiagonal() * svd.matrixV().transpose();  // M^T

    const auto Nlu = N.partialPivLu();
    const auto Mtlu = Mt.partialPivLu();

    ControllerRealization k;
    k.B_k = Nlu.solve(vs.Bhat);
    // C_k = Chat M^{-T}  (solve on the right via transposes)
    k.C_k = Mt.transpose().partialPivLu().solve(vs.Chat.transpose()).transpose();
    const Eigen::MatrixXd core = vs.Ahat - vs.Y * A * vs.X;
    Eigen::MatrixXd AK = Nlu.solve(core);
    AK = Mt.transpose().partialPivLu().solve(AK.transpose()).transpose();
    AK -= k.B_k * (Cy * vs.X) * Mt.inverse();
    AK -= Nlu.solve(vs.Y * Bu) * k.C_k;
    k.A_k = AK;
    k.D_k = Eigen::MatrixXd::Zero(1, 2);

    result.controller = std::move(k);
    return result;
}

VerificationReport verify(const GeneralizedPlant& plant, const ControllerRealization& k,
                          const SynthesisBounds& bounds) {
    VerificationReport report;
    report.bounds = bounds;

    const ClosedLoopSystem cl = close_loop(plant, k);
    const auto stab = is_hurwitz(cl.sys);
    report.spectral_abscissa = stab.spectral_abscissa;
    if (!stab.hurwitz) {
        report.hinf_error = std::numeric_limits<double>::infinity();
        report.h2_control = std::numeric_limits<double>::infinity();
        report.pass = false;
        return report;
    }
    const auto error_channel = cl.sys.subsystem(std::vector<int>{0}, std::vector<int>{0, 1, 2});
    const auto control_channel = cl.sys.subsystem(std::vector<int>{1}, std::vector<int>{0, 1, 2});
    report.hinf_error = hinf_norm(error_channel, 1e-7);
    report.h2_control = h2_norm(control_channel);
    report.pass = report.hinf_error <= bounds.hinf_error_bound &&
                  report.h2_control <= bounds.h2_control_bound && stab.hurwitz;
    return report;
}

}  // namespace seasyn
