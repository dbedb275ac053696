#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "seasyn/transfer_function.hpp"

namespace seasyn {

/// Continuous-time LTI system (A, B, C, D) with named input/output channels.
/// Zero-state systems (n = 0, pure gain) are supported throughout.
struct StateSpaceModel {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Eigen::MatrixXd C;
    Eigen::MatrixXd D;
    std::vector<std::string> input_labels;   // size m; unique
    std::vector<std::string> output_labels;  // size p; unique

    StateSpaceModel() = default;
    StateSpaceModel(Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd C, Eigen::MatrixXd D,
                    std::vector<std::string> input_labels = {},
                    std::vector<std::string> output_labels = {});

    int n_states() const { return static_cast<int>(A.rows()); }
    int n_inputs() const { return static_cast<int>(B.cols()); }
    int n_outputs() const { return static_cast<int>(C.rows()); }

    int input_index(const std::string& name) const;
    int output_index(const std::string& name) const;

    // Row/column selection; labels follow the selection.
    StateSpaceModel subsystem(const std::vector<int>& outputs, const std::vector<int>& inputs) const;
    StateSpaceModel subsystem(const std::vector<std::string>& outputs,
                              const std::vector<std::string>& inputs) const;

    Eigen::MatrixXd dc_gain() const;  // C (-A)^{-1} B + D
};

struct StabilityInfo {
    bool   hurwitz;
    double spectral_abscissa;  // max real part of eig(A); -inf when n = 0
};

// Strict Hurwitz test: true iff the spectral abscissa is below -1e-9.
StabilityInfo is_hurwitz(const StateSpaceModel& sys);
StabilityInfo is_hurwitz(const Eigen::MatrixXd& A);

// Largest |eigenvalue| of A; 0 for n = 0.
double spectral_radius(const Eigen::MatrixXd& A);

// Controllable-canonical realization of a proper transfer function.
// State dimension equals deg(den); throws ImproperSystem when deg(num) > deg(den).
StateSpaceModel realize(const RationalTransferFunction& tf);

// SISO transfer function of one (output, input) entry via the
// Faddeev-LeVerrier resolvent expansion. Intended for modest state
// dimensions (round-trip checks, test oracles).
RationalTransferFunction transfer_function_of(const StateSpaceModel& sys, int output = 0, int input = 0);

}  // namespace seasyn
