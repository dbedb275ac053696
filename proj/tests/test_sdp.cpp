#include <random>

#include "doctest.h"
#include "seasyn/sdp.hpp"

using namespace seasyn;

namespace {

// max t subject to diag(c) - t I >= 0; optimum is min(c).
SdpProblem box_problem(const std::vector<double>& c) {
    SdpProblem p;
    const int n = static_cast<int>(c.size());
    p.block_sizes = {n};
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) C(i, i) = c[i];
    p.C = {C};
    p.A = {{Eigen::MatrixXd::Identity(n, n)}};
    p.b = Eigen::VectorXd::Ones(1);
    return p;
}

}  // namespace

TEST_CASE("diagonal margin problem") {
    const auto p = box_problem({1.0, 2.0, 0.5});
    const auto sol = solve_sdp(p);
    REQUIRE(sol.usable());
    CHECK(sol.objective == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(lmi_margin(p, sol.y) == doctest::Approx(0.0).epsilon(1e-5));
}

TEST_CASE("smallest eigenvalue via margin maximization") {
    std::mt19937_64 rng(5u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 4);
        Eigen::MatrixXd G(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) G(i, j) = gauss(rng);
        }
        const Eigen::MatrixXd A0 = 0.5 * (G + G.transpose());

        SdpProblem p;
        p.block_sizes = {n};
        p.C = {A0};
        p.A = {{Eigen::MatrixXd::Identity(n, n)}};
        p.b = Eigen::VectorXd::Ones(1);
        const auto sol = solve_sdp(p);
        REQUIRE(sol.usable());

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A0, Eigen::EigenvaluesOnly);
        CAPTURE(trial);
        CHECK(sol.objective == doctest::Approx(es.eigenvalues().minCoeff()).epsilon(1e-6));
    }
}

TEST_CASE("lyapunov feasibility margin is positive iff A is stable") {
    auto lyap_problem = [](const Eigen::MatrixXd& A, double cap) {
        const int n = static_cast<int>(A.rows());
        const int nsym = n * (n + 1) / 2;
        SdpProblem p;
        p.block_sizes = {n, n, n};
        auto eval = [&](const Eigen::VectorXd& v) {
            Eigen::MatrixXd P(n, n);
            int ofs = 0;
            for (int i = 0; i < n; ++i) {
                for (int j = i; j < n; ++j) {
                    P(i, j) = v(ofs);
                    P(j, i) = v(ofs);
                    ++ofs;
                }
            }
            const double t = v(nsym);
            BlockMat blocks;
            blocks.push_back(P - t * Eigen::MatrixXd::Identity(n, n));
            blocks.push_back(-(A.transpose() * P + P * A) - t * Eigen::MatrixXd::Identity(n, n));
            blocks.push_back(cap * Eigen::MatrixXd::Identity(n, n) - P);
            return blocks;
        };
        const int d = nsym + 1;
        const Eigen::VectorXd zero = Eigen::VectorXd::Zero(d);
        p.C = eval(zero);
        p.A.resize(d);
        for (int i = 0; i < d; ++i) {
            Eigen::VectorXd ei = zero;
            ei(i) = 1.0;
            auto Fi = eval(ei);
            for (size_t k = 0; k < Fi.size(); ++k) Fi[k] = -(Fi[k] - p.C[k]).eval();
            p.A[i] = std::move(Fi);
        }
        p.b = Eigen::VectorXd::Zero(d);
        p.b(d - 1) = 1.0;
        return p;
    };

    Eigen::MatrixXd stable(2, 2);
    stable << -1.0, 2.0, 0.0, -3.0;
    auto sol = solve_sdp(lyap_problem(stable, 100.0));
    REQUIRE(sol.usable());
    CHECK(sol.objective > 0.1);

    Eigen::MatrixXd unstable(2, 2);
    unstable << 0.5, 1.0, 0.0, -1.0;
    sol = solve_sdp(lyap_problem(unstable, 100.0));
    REQUIRE(sol.usable());
    CHECK(sol.objective < 1e-6);
}

TEST_CASE("two-block problems couple through shared variables") {
    // max t: [x - t, 0; 0, 1 - x - t] >= 0 over scalar x; optimum x = 0.5, t = 0.5.
    SdpProblem p;
    p.block_sizes = {1, 1};
    Eigen::MatrixXd z(1, 1), o(1, 1);
    z << 0.0;
    o << 1.0;
    p.C = {z, o};
    Eigen::MatrixXd mone(1, 1);
    mone << -1.0;
    p.A = {{mone, o}, {o, o}};  // variables: x, t
    p.b = Eigen::VectorXd::Zero(2);
    p.b(1) = 1.0;
    const auto sol = solve_sdp(p);
    REQUIRE(sol.usable());
    CHECK(sol.objective == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(sol.y(0) == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("early stop returns a feasible but non-optimal point") {
    const auto p = box_problem({1.0, 3.0, 2.0});
    SdpOptions opt;
    opt.early_stop = [&](const Eigen::VectorXd& y) { return y(0) >= 0.2; };
    const auto sol = solve_sdp(p, opt);
    REQUIRE(sol.usable());
    CHECK(sol.objective >= 0.2);
    CHECK(lmi_margin(p, sol.y) >= -1e-7);
}
