#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "seasyn/state_space.hpp"

namespace seasyn {

/// Sampled frequency response: one p x m complex matrix per grid point.
struct FrequencyResponse {
    std::vector<double>          omegas;  // rad/s, strictly increasing, positive
    std::vector<Eigen::MatrixXcd> values;

    int size() const { return static_cast<int>(omegas.size()); }
};

// Log-spaced grid of n points over [w_lo, w_hi] rad/s (inclusive).
std::vector<double> log_grid(double w_lo, double w_hi, int n);

// C (jw I - A)^{-1} B + D over the grid. The grid must be strictly
// increasing and positive; throws SingularResolvent when a grid point
// coincides with an imaginary-axis eigenvalue of A.
FrequencyResponse frequency_response(const StateSpaceModel& sys, const std::vector<double>& grid);

// Pointwise evaluation helpers for one channel.
std::vector<double> magnitude_db(const FrequencyResponse& fr, int output = 0, int input = 0);

// Phase in degrees, unwrapped along the grid (branch corrections applied when
// consecutive samples jump by more than 180 degrees). Needs >= 20 points per
// decade to track fast phase variation reliably.
std::vector<double> phase_deg_unwrapped(const FrequencyResponse& fr, int output = 0, int input = 0);

// Largest singular value per grid point.
std::vector<double> sigma_max(const FrequencyResponse& fr);

}  // namespace seasyn
