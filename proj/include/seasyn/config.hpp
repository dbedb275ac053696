#pragma once

#include <string>
#include <vector>

#include "seasyn/frequency_response.hpp"
#include "seasyn/sea_model.hpp"
#include "seasyn/simulation.hpp"
#include "seasyn/synthesis.hpp"

namespace seasyn {

/// Numerator/denominator coefficient lists (ascending). Scalars are stored
/// as a single numerator coefficient over 1.
struct RationalSpec {
    std::vector<double> num{0.0};
    std::vector<double> den{1.0};

    static RationalSpec scalar(double k) { return {{k}, {1.0}}; }
    bool is_scalar() const { return num.size() == 1 && den.size() == 1 && den[0] == 1.0; }
    RationalTransferFunction tf() const {
        return {Polynomial(num), Polynomial(den)};
    }
    bool operator==(const RationalSpec&) const = default;
};

/// Flat key-value experiment description; the on-disk format is sectioned
/// text with '#' comments. Unknown keys are a hard error.
struct ExperimentConfig {
    SeaParameters    sea;
    DesiredImpedance impedance;

    struct Weights {
        double       peak_sensitivity = 1.0;
        double       bandwidth = 60.0;
        double       steady_error = 0.005;
        RationalSpec control_weight = RationalSpec::scalar(1.0 / 44.0);
        RationalSpec disturbance_weight = RationalSpec::scalar(0.1);
        RationalSpec noise_weight = RationalSpec::scalar(0.1);
        enum class Filter { Unity, Lowpass2 } motion_filter = Filter::Unity;
        double motion_filter_cutoff = 500.0;  // rad/s, Lowpass2 only

        bool operator==(const Weights&) const = default;
    } weights;

    SynthesisBounds bounds;

    struct Signals {
        double      motion_amplitude = 2.0;
        double      motion_frequency = 2.0;  // Hz
        double      motion_phase = 0.0;
        double      duration = 10.0;
        double      sample_rate = 2000.0;
        double      steady_window_fraction = 0.25;
        double      disturbance_amplitude = 0.0;
        double      noise_amplitude = 0.0;
        std::string motion_file;  // optional replay file; overrides the sinusoid

        bool operator==(const Signals&) const = default;
    } signals;

    std::string output_directory = "out";

    // Derived objects.
    WeightingSet       weighting_set() const;
    SignalSpec         motion_signal() const;
    SignalSpec         disturbance_signal() const;
    SignalSpec         noise_signal() const;
    SimulationSettings simulation_settings() const;

    void validate() const;

    bool operator==(const ExperimentConfig& other) const;
};

ExperimentConfig parse_config(const std::string& text, const std::string& source_name = "config");
ExperimentConfig load_config(const std::string& path);
std::string      serialize_config(const ExperimentConfig& config);

// Controller persistence: labeled plain-text matrix blocks, row-major,
// full decimal precision.
void                  save_controller(const std::string& path, const ControllerRealization& k);
ControllerRealization load_controller(const std::string& path);

// CSV emitters (atomic: temp file + rename). Column schemas are fixed.
void write_trace_csv(const std::string& path, const SimulationTrace& trace);
void write_bode_csv(const std::string& path, const FrequencyResponse& fr, int output = 0,
                    int input = 0);

// Atomic small-file write used by the emitters above.
void write_file_atomic(const std::string& path, const std::string& contents);

/// The four bundled experiment descriptions (three stiffness ratios and the
/// general mass-damper-spring case). The same texts ship as files under
/// configs/; the reproduce command uses these embedded copies so the binary
/// is self-contained.
struct BundledCase {
    std::string name;
    std::string text;
};
const std::vector<BundledCase>& bundled_cases();

}  // namespace seasyn
