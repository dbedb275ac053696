#include "seasyn/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "seasyn/errors.hpp"
#include "seasyn/frequency_response.hpp"

namespace seasyn {

WeightingSet ExperimentConfig::weighting_set() const {
    RationalTransferFunction filter = RationalTransferFunction::constant(1.0);
    if (weights.motion_filter == Weights::Filter::Lowpass2) {
        filter = lowpass2(weights.motion_filter_cutoff);
    }
    WeightingSet w;
    w.peak_sensitivity = weights.peak_sensitivity;
    w.bandwidth = weights.bandwidth;
    w.steady_error = weights.steady_error;
    w.error_weight = design_We(weights.peak_sensitivity, weights.bandwidth, weights.steady_error);
    w.control_weight = weights.control_weight.tf();
    w.disturbance_weight = weights.disturbance_weight.tf();
    w.noise_weight = weights.noise_weight.tf();
    w.motion_filter = filter;
    return w;
}

SignalSpec ExperimentConfig::motion_signal() const {
    if (!signals.motion_file.empty()) {
        return SignalSpec::from_file(signals.motion_file);
    }
    return SignalSpec::sinusoid(signals.motion_amplitude, signals.motion_frequency,
                                signals.motion_phase);
}

SignalSpec ExperimentConfig::disturbance_signal() const {
    return SignalSpec::constant(signals.disturbance_amplitude);
}

SignalSpec ExperimentConfig::noise_signal() const {
    return SignalSpec::constant(signals.noise_amplitude);
}

SimulationSettings ExperimentConfig::simulation_settings() const {
    SimulationSettings s;
    s.duration_s = signals.duration;
    s.sample_rate_hz = signals.sample_rate;
    s.steady_window_fraction = signals.steady_window_fraction;
    return s;
}

void ExperimentConfig::validate() const {
    sea.validate();
    impedance.validate();
    bounds.validate();
    weighting_set().validate(impedance);
    simulation_settings().validate();
    if (signals.motion_file.empty() && signals.motion_frequency > 0.0 &&
        signals.sample_rate < 50.0 * signals.motion_frequency) {
        throw ConfigError("sample_rate must be at least 50x motion_frequency");
    }
}

bool ExperimentConfig::operator==(const ExperimentConfig& other) const {
    auto sea_tuple = [](const SeaParameters& p) {
        return std::tie(p.motor_inertia, p.motor_damping, p.spring_stiffness, p.velocity_loop_kp,
                        p.velocity_loop_ki, p.motor_velocity_limit, p.shaft_radius, p.gear_ratio);
    };
    auto imp_tuple = [](const DesiredImpedance& d) {
        return std::tie(d.virtual_inertia, d.virtual_damping, d.virtual_stiffness);
    };
    return sea_tuple(sea) == sea_tuple(other.sea) &&
           imp_tuple(impedance) == imp_tuple(other.impedance) && weights == other.weights &&
           bounds.hinf_error_bound == other.bounds.hinf_error_bound &&
           bounds.h2_control_bound == other.bounds.h2_control_bound &&
           signals == other.signals && output_directory == other.output_directory;
}

namespace {

struct RawConfig {
    // section -> key -> (value, line)
    std::map<std::string, std::map<std::string, std::pair<std::string, int>>> values;
    std::string source;

    std::optional<std::string> take(const std::string& section, const std::string& key) {
        auto sit = values.find(section);
        if (sit == values.end()) return std::nullopt;
        auto kit = sit->second.find(key);
        if (kit == sit->second.end()) return std::nullopt;
        std::string v = kit->second.first;
        sit->second.erase(kit);
        return v;
    }

    std::string require(const std::string& section, const std::string& key) {
        auto v = take(section, key);
        if (!v) {
            throw ConfigError(source + ": missing required key '" + key + "' in [" + section + "]");
        }
        return *v;
    }

    void finish() const {
        for (const auto& [section, keys] : values) {
            if (!keys.empty()) {
                const auto& [key, val] = *keys.begin();
                throw ConfigError(source + ": line " + std::to_string(val.second) +
                                  ": unknown key '" + key + "' in [" + section + "]");
            }
        }
    }
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

RawConfig tokenize(const std::string& text, const std::string& source) {
    RawConfig raw;
    raw.source = source;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(source + ": line " + std::to_string(lineno) +
                                  ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source + ": line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            throw ConfigError(source + ": line " + std::to_string(lineno) +
                              ": key '" + key + "' outside any section");
        }
        if (!raw.values[section].emplace(key, std::make_pair(value, lineno)).second) {
            throw ConfigError(source + ": line " + std::to_string(lineno) + ": duplicate key '" +
                              key + "'");
        }
    }
    return raw;
}

double parse_double(const std::string& text, const std::string& context) {
    try {
        size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (trim(text.substr(pos)).empty()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw ConfigError(context + ": cannot parse number '" + text + "'");
}

std::vector<double> parse_list(const std::string& text, const std::string& context) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        out.push_back(parse_double(tok, context));
    }
    if (out.empty()) {
        throw ConfigError(context + ": empty coefficient list");
    }
    return out;
}

RationalSpec parse_weight(RawConfig& raw, const std::string& name) {
    const auto scalar = raw.take("weights", name);
    const auto num = raw.take("weights", name + "_num");
    const auto den = raw.take("weights", name + "_den");
    if (scalar && (num || den)) {
        throw ConfigError(raw.source + ": give either '" + name + "' or '" + name +
                          "_num'/'_den', not both");
    }
    if (scalar) {
        return RationalSpec::scalar(parse_double(*scalar, name));
    }
    if (num && den) {
        return {parse_list(*num, name + "_num"), parse_list(*den, name + "_den")};
    }
    throw ConfigError(raw.source + ": missing required key '" + name + "' in [weights]");
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_list(const std::vector<double>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += " ";
        out += format_double(v[i]);
    }
    return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source_name) {
    RawConfig raw = tokenize(text, source_name);
    ExperimentConfig cfg;

    cfg.sea.motor_inertia = parse_double(raw.require("sea", "motor_inertia"), "motor_inertia");
    cfg.sea.motor_damping = parse_double(raw.require("sea", "motor_damping"), "motor_damping");
    cfg.sea.spring_stiffness =
        parse_double(raw.require("sea", "spring_stiffness"), "spring_stiffness");
    cfg.sea.velocity_loop_kp =
        parse_double(raw.require("sea", "velocity_loop_kp"), "velocity_loop_kp");
    cfg.sea.velocity_loop_ki =
        parse_double(raw.require("sea", "velocity_loop_ki"), "velocity_loop_ki");
    cfg.sea.motor_velocity_limit =
        parse_double(raw.require("sea", "motor_velocity_limit"), "motor_velocity_limit");
    if (auto v = raw.take("sea", "shaft_radius")) {
        cfg.sea.shaft_radius = parse_double(*v, "shaft_radius");
    }
    if (auto v = raw.take("sea", "gear_ratio")) {
        cfg.sea.gear_ratio = parse_double(*v, "gear_ratio");
    }

    cfg.impedance.virtual_inertia =
        parse_double(raw.require("impedance", "virtual_inertia"), "virtual_inertia");
    cfg.impedance.virtual_damping =
        parse_double(raw.require("impedance", "virtual_damping"), "virtual_damping");
    cfg.impedance.virtual_stiffness =
        parse_double(raw.require("impedance", "virtual_stiffness"), "virtual_stiffness");

    cfg.weights.peak_sensitivity =
        parse_double(raw.require("weights", "peak_sensitivity"), "peak_sensitivity");
    cfg.weights.bandwidth = parse_double(raw.require("weights", "bandwidth"), "bandwidth");
    cfg.weights.steady_error = parse_double(raw.require("weights", "steady_error"), "steady_error");
    cfg.weights.control_weight = parse_weight(raw, "control_weight");
    cfg.weights.disturbance_weight = parse_weight(raw, "disturbance_weight");
    cfg.weights.noise_weight = parse_weight(raw, "noise_weight");
    {
        const std::string filter = raw.require("weights", "motion_filter");
        if (filter == "unity") {
            cfg.weights.motion_filter = ExperimentConfig::Weights::Filter::Unity;
        } else if (filter == "lowpass2") {
            cfg.weights.motion_filter = ExperimentConfig::Weights::Filter::Lowpass2;
            cfg.weights.motion_filter_cutoff = parse_double(
                raw.require("weights", "motion_filter_cutoff"), "motion_filter_cutoff");
        } else {
            throw ConfigError(source_name + ": motion_filter must be 'unity' or 'lowpass2', got '" +
                              filter + "'");
        }
        if (cfg.weights.motion_filter == ExperimentConfig::Weights::Filter::Unity) {
            if (auto v = raw.take("weights", "motion_filter_cutoff")) {
                cfg.weights.motion_filter_cutoff = parse_double(*v, "motion_filter_cutoff");
            }
        }
    }

    cfg.bounds.hinf_error_bound =
        parse_double(raw.require("bounds", "hinf_error_bound"), "hinf_error_bound");
    cfg.bounds.h2_control_bound =
        parse_double(raw.require("bounds", "h2_control_bound"), "h2_control_bound");

    cfg.signals.motion_amplitude =
        parse_double(raw.require("signals", "motion_amplitude"), "motion_amplitude");
    cfg.signals.motion_frequency =
        parse_double(raw.require("signals", "motion_frequency"), "motion_frequency");
    if (auto v = raw.take("signals", "motion_phase")) {
        cfg.signals.motion_phase = parse_double(*v, "motion_phase");
    }
    cfg.signals.duration = parse_double(raw.require("signals", "duration"), "duration");
    cfg.signals.sample_rate = parse_double(raw.require("signals", "sample_rate"), "sample_rate");
    if (auto v = raw.take("signals", "steady_window_fraction")) {
        cfg.signals.steady_window_fraction = parse_double(*v, "steady_window_fraction");
    }
    if (auto v = raw.take("signals", "disturbance_amplitude")) {
        cfg.signals.disturbance_amplitude = parse_double(*v, "disturbance_amplitude");
    }
    if (auto v = raw.take("signals", "noise_amplitude")) {
        cfg.signals.noise_amplitude = parse_double(*v, "noise_amplitude");
    }
    if (auto v = raw.take("signals", "motion_file")) {
        cfg.signals.motion_file = *v;
    }

    if (auto v = raw.take("output", "directory")) {
        cfg.output_directory = *v;
    }

    raw.finish();
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "[sea]\n";
    os << "motor_inertia = " << format_double(c.sea.motor_inertia) << "\n";
    os << "motor_damping = " << format_double(c.sea.motor_damping) << "\n";
    os << "spring_stiffness = " << format_double(c.sea.spring_stiffness) << "\n";
    os << "velocity_loop_kp = " << format_double(c.sea.velocity_loop_kp) << "\n";
    os << "velocity_loop_ki = " << format_double(c.sea.velocity_loop_ki) << "\n";
    os << "motor_velocity_limit = " << format_double(c.sea.motor_velocity_limit) << "\n";
    os << "shaft_radius = " << format_double(c.sea.shaft_radius) << "\n";
    os << "gear_ratio = " << format_double(c.sea.gear_ratio) << "\n\n";

    os << "[impedance]\n";
    os << "virtual_inertia = " << format_double(c.impedance.virtual_inertia) << "\n";
    os << "virtual_damping = " << format_double(c.impedance.virtual_damping) << "\n";
    os << "virtual_stiffness = " << format_double(c.impedance.virtual_stiffness) << "\n\n";

    os << "[weights]\n";
    os << "peak_sensitivity = " << format_double(c.weights.peak_sensitivity) << "\n";
    os << "bandwidth = " << format_double(c.weights.bandwidth) << "\n";
    os << "steady_error = " << format_double(c.weights.steady_error) << "\n";
    auto emit_weight = [&](const char* name, const RationalSpec& w) {
        if (w.is_scalar()) {
            os << name << " = " << format_double(w.num[0]) << "\n";
        } else {
            os << name << "_num = " << format_list(w.num) << "\n";
            os << name << "_den = " << format_list(w.den) << "\n";
        }
    };
    emit_weight("control_weight", c.weights.control_weight);
    emit_weight("disturbance_weight", c.weights.disturbance_weight);
    emit_weight("noise_weight", c.weights.noise_weight);
    if (c.weights.motion_filter == ExperimentConfig::Weights::Filter::Unity) {
        os << "motion_filter = unity\n";
    } else {
        os << "motion_filter = lowpass2\n";
        os << "motion_filter_cutoff = " << format_double(c.weights.motion_filter_cutoff) << "\n";
    }
    os << "\n[bounds]\n";
    os << "hinf_error_bound = " << format_double(c.bounds.hinf_error_bound) << "\n";
    os << "h2_control_bound = " << format_double(c.bounds.h2_control_bound) << "\n";

    os << "\n[signals]\n";
    os << "motion_amplitude = " << format_double(c.signals.motion_amplitude) << "\n";
    os << "motion_frequency = " << format_double(c.signals.motion_frequency) << "\n";
    os << "motion_phase = " << format_double(c.signals.motion_phase) << "\n";
    os << "duration = " << format_double(c.signals.duration) << "\n";
    os << "sample_rate = " << format_double(c.signals.sample_rate) << "\n";
    os << "steady_window_fraction = " << format_double(c.signals.steady_window_fraction) << "\n";
    os << "disturbance_amplitude = " << format_double(c.signals.disturbance_amplitude) << "\n";
    os << "noise_amplitude = " << format_double(c.signals.noise_amplitude) << "\n";
    if (!c.signals.motion_file.empty()) {
        os << "motion_file = " << c.signals.motion_file << "\n";
    }

    os << "\n[output]\n";
    os << "directory = " << c.output_directory << "\n";
    return os.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        fs::create_directories(target.parent_path());
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) {
            throw Error("cannot write file: " + tmp.string());
        }
        out << contents;
    }
    fs::rename(tmp, target);
}

namespace {

void emit_matrix(std::ostringstream& os, const char* name, const Eigen::MatrixXd& m) {
    os << name << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) os << " ";
            os << format_double(m(i, j));
        }
        os << "\n";
    }
}

}  // namespace

void save_controller(const std::string& path, const ControllerRealization& k) {
    std::ostringstream os;
    os << "# seasyn controller\n";
    os << "order " << k.order() << "\n";
    os << "inputs " << k.B_k.cols() << "\n";
    os << "outputs " << k.C_k.rows() << "\n";
    emit_matrix(os, "A_k", k.A_k);
    emit_matrix(os, "B_k", k.B_k);
    emit_matrix(os, "C_k", k.C_k);
    emit_matrix(os, "D_k", k.D_k);
    write_file_atomic(path, os.str());
}

ControllerRealization load_controller(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open controller file: " + path);
    }
    int order = -1, inputs = -1, outputs = -1;
    std::string tok;
    auto read_header = [&](const char* name) {
        std::string key;
        int value;
        if (!(in >> key >> value) || key != name) {
            throw ConfigError(path + ": expected '" + name + " <count>'");
        }
        return value;
    };
    // Skip comment lines.
    std::string line;
    while (in.peek() == '#') std::getline(in, line);
    order = read_header("order");
    inputs = read_header("inputs");
    outputs = read_header("outputs");
    if (order < 0 || inputs <= 0 || outputs <= 0) {
        throw ConfigError(path + ": malformed controller header");
    }
    auto read_matrix = [&](const char* name, int rows, int cols) {
        std::string key;
        if (!(in >> key) || key != name) {
            throw ConfigError(path + ": expected matrix block '" + name + "'");
        }
        Eigen::MatrixXd m(rows, cols);
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) {
                if (!(in >> m(i, j))) {
                    throw ConfigError(path + ": truncated matrix block '" + name + "'");
                }
            }
        }
        return m;
    };
    ControllerRealization k;
    k.A_k = read_matrix("A_k", order, order);
    k.B_k = read_matrix("B_k", order, inputs);
    k.C_k = read_matrix("C_k", outputs, order);
    k.D_k = read_matrix("D_k", outputs, inputs);
    if (k.D_k.cwiseAbs().maxCoeff() != 0.0) {
        throw ConfigError(path + ": controller feedthrough must be zero");
    }
    return k;
}

void write_trace_csv(const std::string& path, const SimulationTrace& trace) {
    std::ostringstream os;
    os << "time_s,phi_L_rad,tau_d_Nm,tau_L_Nm,e_Nm,omega_d_rad_s\n";
    char buf[256];
    for (size_t i = 0; i < trace.time.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", trace.time[i],
                      trace.phi_L[i], trace.tau_d[i], trace.tau_L[i], trace.e[i],
                      trace.omega_d[i]);
        os << buf;
    }
    write_file_atomic(path, os.str());
}

#include "bundled_configs.inc"

const std::vector<BundledCase>& bundled_cases() {
    static const std::vector<BundledCase> cases = {
        {"0.3Ks", kCase03Ks},
        {"0.6Ks", kCase06Ks},
        {"0.9Ks", kCase09Ks},
        {"general", kCaseGeneral},
    };
    return cases;
}

void write_bode_csv(const std::string& path, const FrequencyResponse& fr, int output, int input) {
    const auto mags = magnitude_db(fr, output, input);
    const auto phases = phase_deg_unwrapped(fr, output, input);
    std::ostringstream os;
    os << "omega_rad_s,mag_db,phase_deg\n";
    char buf[160];
    for (int k = 0; k < fr.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g\n", fr.omegas[k], mags[k], phases[k]);
        os << buf;
    }
    write_file_atomic(path, os.str());
}

}  // namespace seasyn
