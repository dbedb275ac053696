#pragma once

#include <optional>
#include <vector>

#include "seasyn/frequency_response.hpp"
#include "seasyn/synthesis.hpp"
#include "seasyn/transfer_function.hpp"

namespace seasyn {

/// Band phase check of a driving-point impedance. Interaction with a passive
/// environment is stable when the impedance phase stays within +-90 degrees;
/// here that is required only on the low-frequency band of hand motion.
struct PassivityReport {
    double              band_low_rad_s = 0.0;
    double              band_high_rad_s = 0.0;
    std::vector<double> grid;       // checked frequencies within the band
    std::vector<double> phase_deg;  // unwrapped impedance phase on the grid
    double              min_phase_margin_deg = 0.0;  // min of (90 - |phase|)
    bool                passive_on_band = false;
    double              tolerance_deg = 0.5;
    // Pole condition of the underlying closed loop, when one was supplied.
    std::optional<double> spectral_abscissa;
    bool                  closed_loop_hurwitz = true;
};

/// Desired vs rendered impedance on a common grid.
struct ImpedancePair {
    FrequencyResponse   desired;
    FrequencyResponse   actual;
    std::vector<double> magnitude_gap_db;
    std::vector<double> phase_gap_deg;
};

/// Rendered impedance of the closed loop: the transfer from the hand motion
/// to the interaction torque, divided by jw to convert position to velocity,
/// with the sign convention of a driving-point impedance.
FrequencyResponse actual_impedance(const ClosedLoopSystem& cl, const std::vector<double>& grid);

/// Checks the relaxed passivity condition on [2*pi*0.01, 2*pi*f_max] rad/s.
/// The supplied response must cover the band with at least 20 points per
/// decade (GridTooSparse otherwise). Phase tolerance at the +-90 boundary
/// keeps exact pure-spring impedances from failing on rounding.
PassivityReport check_relaxed_passivity(const FrequencyResponse& impedance, double f_max_hz,
                                        double tolerance_deg = 0.5);

/// Convenience overload: evaluates the rendered impedance itself on a
/// 60-points-per-decade grid and attaches the closed-loop pole condition.
PassivityReport check_relaxed_passivity(const ClosedLoopSystem& cl, double f_max_hz,
                                        double tolerance_deg = 0.5);

/// Largest magnitude (dB) and phase (deg) deviation that the motion filter
/// introduces between the desired impedance and its filtered version over
/// the band up to f_max_hz.
std::pair<double, double> wphi_deterioration(const RationalTransferFunction& desired_impedance,
                                             const RationalTransferFunction& motion_filter,
                                             double f_max_hz);

/// Desired vs actual impedance with per-frequency gaps.
ImpedancePair impedance_comparison(const ClosedLoopSystem& cl,
                                   const RationalTransferFunction& desired_impedance,
                                   const std::vector<double>& grid);

}  // namespace seasyn
