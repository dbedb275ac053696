#include "seasyn/state_space.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "seasyn/errors.hpp"

namespace seasyn {

namespace {

void check_labels(const std::vector<std::string>& labels, int expected, const char* group) {
    if (labels.empty()) {
        return;
    }
    if (static_cast<int>(labels.size()) != expected) {
        throw DimensionMismatch(std::string(group) + " label count does not match channel count");
    }
    std::set<std::string> seen(labels.begin(), labels.end());
    if (static_cast<int>(seen.size()) != expected) {
        throw DimensionMismatch(std::string(group) + " labels are not unique");
    }
}

}  // namespace

StateSpaceModel::StateSpaceModel(Eigen::MatrixXd A_, Eigen::MatrixXd B_, Eigen::MatrixXd C_,
                                 Eigen::MatrixXd D_, std::vector<std::string> in_labels,
                                 std::vector<std::string> out_labels)
    : A(std::move(A_)),
      B(std::move(B_)),
      C(std::move(C_)),
      D(std::move(D_)),
      input_labels(std::move(in_labels)),
      output_labels(std::move(out_labels)) {
    const auto n = A.rows();
    if (A.cols() != n || B.rows() != n || C.cols() != n || D.rows() != C.rows() ||
        D.cols() != B.cols()) {
        throw DimensionMismatch("inconsistent state-space dimensions");
    }
    check_labels(input_labels, static_cast<int>(B.cols()), "input");
    check_labels(output_labels, static_cast<int>(C.rows()), "output");
}

int StateSpaceModel::input_index(const std::string& name) const {
    for (size_t i = 0; i < input_labels.size(); ++i) {
        if (input_labels[i] == name) return static_cast<int>(i);
    }
    throw DimensionMismatch("unknown input channel: " + name);
}

int StateSpaceModel::output_index(const std::string& name) const {
    for (size_t i = 0; i < output_labels.size(); ++i) {
        if (output_labels[i] == name) return static_cast<int>(i);
    }
    throw DimensionMismatch("unknown output channel: " + name);
}

StateSpaceModel StateSpaceModel::subsystem(const std::vector<int>& outputs,
                                           const std::vector<int>& inputs) const {
    Eigen::MatrixXd Bs(n_states(), inputs.size());
    Eigen::MatrixXd Cs(outputs.size(), n_states());
    Eigen::MatrixXd Ds(outputs.size(), inputs.size());
    std::vector<std::string> in_l, out_l;
    for (size_t j = 0; j < inputs.size(); ++j) {
        Bs.col(j) = B.col(inputs[j]);
        if (!input_labels.empty()) in_l.push_back(input_labels[inputs[j]]);
    }
    for (size_t i = 0; i < outputs.size(); ++i) {
        Cs.row(i) = C.row(outputs[i]);
        if (!output_labels.empty()) out_l.push_back(output_labels[outputs[i]]);
    }
    for (size_t i = 0; i < outputs.size(); ++i) {
        for (size_t j = 0; j < inputs.size(); ++j) {
            Ds(i, j) = D(outputs[i], inputs[j]);
        }
    }
    return {A, Bs, Cs, Ds, in_l, out_l};
}

StateSpaceModel StateSpaceModel::subsystem(const std::vector<std::string>& outputs,
                                           const std::vector<std::string>& inputs) const {
    std::vector<int> oi, ii;
    for (const auto& o : outputs) oi.push_back(output_index(o));
    for (const auto& i : inputs) ii.push_back(input_index(i));
    return subsystem(oi, ii);
}

Eigen::MatrixXd StateSpaceModel::dc_gain() const {
    if (n_states() == 0) {
        return D;
    }
    return C * (-A).partialPivLu().solve(B) + D;
}

StabilityInfo is_hurwitz(const Eigen::MatrixXd& A) {
    if (A.rows() == 0) {
        return {true, -std::numeric_limits<double>::infinity()};
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, /*computeEigenvectors=*/false);
    double abscissa = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < A.rows(); ++i) {
        abscissa = std::max(abscissa, es.eigenvalues()(i).real());
    }
    return {abscissa < -1e-9, abscissa};
}

StabilityInfo is_hurwitz(const StateSpaceModel& sys) { return is_hurwitz(sys.A); }

double spectral_radius(const Eigen::MatrixXd& A) {
    if (A.rows() == 0) {
        return 0.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, /*computeEigenvectors=*/false);
    double rho = 0.0;
    for (int i = 0; i < A.rows(); ++i) {
        rho = std::max(rho, std::abs(es.eigenvalues()(i)));
    }
    return rho;
}

StateSpaceModel realize(const RationalTransferFunction& tf) {
    if (!tf.is_proper()) {
        throw ImproperSystem("cannot realize improper transfer function " + tf.to_string());
    }
    const auto norm = tf.normalized();
    const auto& den = norm.den().coeffs();
    const int   n   = norm.den().degree();

    std::vector<double> b(n + 1, 0.0);  // numerator, ascending, padded to deg n
    if (!norm.num().is_zero()) {
        const auto& nc = norm.num().coeffs();
        for (size_t i = 0; i < nc.size(); ++i) b[i] = nc[i];
    }

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, 1);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(1, n);
    Eigen::MatrixXd D(1, 1);
    D(0, 0) = b[n];
    for (int i = 0; i + 1 < n; ++i) {
        A(i, i + 1) = 1.0;
    }
    for (int j = 0; j < n; ++j) {
        A(n - 1, j) = -den[j];
        C(0, j)     = b[j] - b[n] * den[j];
    }
    if (n > 0) {
        B(n - 1, 0) = 1.0;
    }
    return {A, B, C, D};
}

RationalTransferFunction transfer_function_of(const StateSpaceModel& sys, int output, int input) {
    const int n = sys.n_states();
    if (output < 0 || output >= sys.n_outputs() || input < 0 || input >= sys.n_inputs()) {
        throw DimensionMismatch("transfer_function_of: channel index out of range");
    }
    const double d = sys.D(output, input);
    if (n == 0) {
        return RationalTransferFunction::constant(d);
    }

    // Faddeev-LeVerrier: den(s) = s^n + c1 s^{n-1} + ... + cn and
    // (sI - A)^{-1} = sum_k s^{n-1-k} B_k / den(s).
    const Eigen::MatrixXd& A = sys.A;
    Eigen::MatrixXd        Bk = Eigen::MatrixXd::Identity(n, n);
    std::vector<double>    den_desc(n + 1);  // descending: s^n ... s^0
    den_desc[0] = 1.0;
    std::vector<double> resolvent_desc(n);  // coefficients of s^{n-1} ... s^0 for C B_k B
    const Eigen::VectorXd bcol = sys.B.col(input);
    const Eigen::RowVectorXd crow = sys.C.row(output);
    for (int k = 0; k < n; ++k) {
        resolvent_desc[k] = crow * Bk * bcol;
        const Eigen::MatrixXd ABk = A * Bk;
        const double ck = -ABk.trace() / (k + 1);
        den_desc[k + 1] = ck;
        Bk = ABk + ck * Eigen::MatrixXd::Identity(n, n);
    }

    std::vector<double> den_asc(n + 1);
    for (int i = 0; i <= n; ++i) den_asc[i] = den_desc[n - i];
    std::vector<double> num_asc(n + 1, 0.0);
    for (int i = 0; i < n; ++i) num_asc[i] = resolvent_desc[n - 1 - i];
    // Feedthrough contributes d * den(s).
    for (int i = 0; i <= n; ++i) num_asc[i] += d * den_asc[i];

    return {Polynomial(num_asc), Polynomial(den_asc)};
}

}  // namespace seasyn
