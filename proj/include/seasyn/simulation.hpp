#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "seasyn/sea_model.hpp"
#include "seasyn/synthesis.hpp"

namespace seasyn {

/// Exogenous signal description for one closed-loop input channel.
struct SignalSpec {
    enum class Kind { Sinusoid, Constant, File };

    Kind        kind = Kind::Constant;
    double      amplitude = 0.0;     // rad (hand motion) or channel units
    double      frequency_hz = 0.0;  // sinusoid frequency
    double      phase_rad = 0.0;
    std::string file_path;           // Kind::File: CSV replay

    static SignalSpec sinusoid(double amplitude, double frequency_hz, double phase_rad = 0.0) {
        return {Kind::Sinusoid, amplitude, frequency_hz, phase_rad, {}};
    }
    static SignalSpec constant(double value) { return {Kind::Constant, value, 0.0, 0.0, {}}; }
    static SignalSpec from_file(std::string path) {
        return {Kind::File, 0.0, 0.0, 0.0, std::move(path)};
    }
};

struct SimulationSettings {
    double duration_s = 10.0;
    double sample_rate_hz = 2000.0;
    double steady_window_fraction = 0.25;  // discarded leading fraction

    void validate() const;
};

struct SimulationMetrics {
    double max_abs_error = 0.0;    // Nm, over the steady window
    double max_abs_control = 0.0;  // rad/s
    double max_abs_tau_d = 0.0;    // Nm
};

struct SimulationTrace {
    std::vector<double> time;     // s
    std::vector<double> phi_L;    // rad
    std::vector<double> tau_d;    // Nm
    std::vector<double> tau_L;    // Nm
    std::vector<double> e;        // Nm
    std::vector<double> omega_d;  // rad/s
    SimulationMetrics   metrics;
    double              steady_start = 0.0;
    double              steady_end = 0.0;
};

/// Fixed-step 4th-order integration of the closed loop from zero initial
/// state. Throws UnstableClosedLoop when the loop is not Hurwitz and
/// StepTooLarge when h * spectral_radius(Abar) > 0.1. The desired torque is
/// reconstructed exactly as tau_d = e + tau_L.
SimulationTrace simulate(const ClosedLoopSystem& cl, const SignalSpec& hand_motion,
                         const SignalSpec& disturbance, const SignalSpec& noise,
                         const SimulationSettings& settings = {});

// Smallest sample rate passing the step-size check, with 20% headroom.
double recommended_sample_rate(const ClosedLoopSystem& cl, double minimum_hz = 2000.0);

struct SweepCase {
    std::string      name;
    DesiredImpedance impedance;
    SynthesisBounds  bounds;
    WeightingSet     weights;
};

struct SweepRow {
    std::string                      name;
    DesiredImpedance                 impedance;
    SynthesisBounds                  bounds;
    std::optional<VerificationReport> report;   // empty on synthesis failure
    std::optional<SimulationMetrics>  metrics;  // empty on simulation failure
    std::string                      error;     // failure description, if any
};

/// Runs synthesis + verification + simulation for each case; failures are
/// recorded per row and do not abort the remaining rows.
std::vector<SweepRow> sweep_cases(const SeaParameters& params, const std::vector<SweepCase>& cases,
                                  const SignalSpec& hand_motion,
                                  const SimulationSettings& settings = {},
                                  const SynthesisOptions& synth_options = {});

}  // namespace seasyn
