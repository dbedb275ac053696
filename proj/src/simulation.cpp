#include "seasyn/simulation.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "seasyn/errors.hpp"

namespace seasyn {

void SimulationSettings::validate() const {
    if (!(duration_s > 0.0)) throw std::invalid_argument("duration must be positive");
    if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("sample rate must be positive");
    if (!(steady_window_fraction >= 0.0 && steady_window_fraction < 1.0)) {
        throw std::invalid_argument("steady window fraction must lie in [0, 1)");
    }
}

namespace {

// Evaluated signal: either an analytic expression or interpolated samples.
class SignalEval {
  public:
    SignalEval(const SignalSpec& spec, double sample_rate_hz) : spec_(spec) {
        if (spec.kind == SignalSpec::Kind::Sinusoid) {
            if (spec.frequency_hz > 0.0 && sample_rate_hz < 50.0 * spec.frequency_hz) {
                throw std::invalid_argument(
                    "sample rate must be at least 50x the sinusoid frequency");
            }
        } else if (spec.kind == SignalSpec::Kind::File) {
            load(spec.file_path);
        }
    }

    double operator()(double t) const {
        switch (spec_.kind) {
            case SignalSpec::Kind::Constant:
                return spec_.amplitude;
            case SignalSpec::Kind::Sinusoid:
                return spec_.amplitude *
                       std::sin(2.0 * M_PI * spec_.frequency_hz * t + spec_.phase_rad);
            case SignalSpec::Kind::File:
                return interp(t);
        }
        return 0.0;
    }

  private:
    void load(const std::string& path) {
        std::ifstream in(path);
        if (!in) {
            throw std::invalid_argument("cannot open signal file: " + path);
        }
        std::string header;
        std::getline(in, header);
        int value_col = 1;
        {
            std::stringstream hs(header);
            std::string col;
            int idx = 0;
            while (std::getline(hs, col, ',')) {
                if (col == "phi_L_rad" || col == "value") value_col = idx;
                ++idx;
            }
        }
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::stringstream ls(line);
            std::string cell;
            int idx = 0;
            double t = 0.0, v = 0.0;
            while (std::getline(ls, cell, ',')) {
                if (idx == 0) t = std::stod(cell);
                if (idx == value_col) v = std::stod(cell);
                ++idx;
            }
            ts_.push_back(t);
            vs_.push_back(v);
        }
        if (ts_.size() < 2) {
            throw std::invalid_argument("signal file needs at least two samples: " + path);
        }
    }

    double interp(double t) const {
        if (t <= ts_.front()) return vs_.front();
        if (t >= ts_.back()) return vs_.back();
        auto it = std::lower_bound(ts_.begin(), ts_.end(), t);
        const size_t hi = it - ts_.begin();
        const size_t lo = hi - 1;
        const double f = (t - ts_[lo]) / (ts_[hi] - ts_[lo]);
        return vs_[lo] + f * (vs_[hi] - vs_[lo]);
    }

    SignalSpec          spec_;
    std::vector<double> ts_, vs_;
};

}  // namespace

double recommended_sample_rate(const ClosedLoopSystem& cl, double minimum_hz) {
    const double rho = spectral_radius(cl.sys.A);
    return std::max(minimum_hz, 12.0 * rho);  // h * rho <= 1/12 < 0.1
}

SimulationTrace simulate(const ClosedLoopSystem& cl, const SignalSpec& hand_motion,
                         const SignalSpec& disturbance, const SignalSpec& noise,
                         const SimulationSettings& settings) {
    settings.validate();
    const auto stab = is_hurwitz(cl.sys);
    if (!stab.hurwitz) {
        throw UnstableClosedLoop("closed loop spectral abscissa " +
                                 std::to_string(stab.spectral_abscissa));
    }
    const double h = 1.0 / settings.sample_rate_hz;
    const double rho = spectral_radius(cl.sys.A);
    if (h * rho > 0.1) {
        throw StepTooLarge("h * spectral_radius = " + std::to_string(h * rho) +
                           " > 0.1; raise the sample rate to at least " +
                           std::to_string(12.0 * rho) + " Hz");
    }

    const SignalEval phi(hand_motion, settings.sample_rate_hz);
    const SignalEval dist(disturbance, settings.sample_rate_hz);
    const SignalEval noi(noise, settings.sample_rate_hz);

    const Eigen::MatrixXd& A = cl.sys.A;
    const Eigen::MatrixXd& B = cl.sys.B;
    const int nx = cl.sys.n_states();
    const int steps = static_cast<int>(std::llround(settings.duration_s * settings.sample_rate_hz));

    const Eigen::RowVectorXd ctrl_row = cl.control_row();
    const Eigen::RowVectorXd tauL_row = cl.sys.C.row(2);
    const Eigen::RowVectorXd err_row = cl.sys.C.row(3);
    const Eigen::RowVectorXd tauL_feed = cl.sys.D.row(2);
    const Eigen::RowVectorXd err_feed = cl.sys.D.row(3);

    SimulationTrace trace;
    trace.time.reserve(steps + 1);
    trace.phi_L.reserve(steps + 1);
    trace.tau_d.reserve(steps + 1);
    trace.tau_L.reserve(steps + 1);
    trace.e.reserve(steps + 1);
    trace.omega_d.reserve(steps + 1);

    Eigen::VectorXd x = Eigen::VectorXd::Zero(nx);
    Eigen::Vector3d w;
    auto eval_w = [&](double t) {
        w << phi(t), dist(t), noi(t);
        return w;
    };
    auto record = [&](double t) {
        const Eigen::Vector3d wt = eval_w(t);
        const double tau_L = tauL_row.dot(x) + tauL_feed.dot(wt);
        const double err = err_row.dot(x) + err_feed.dot(wt);
        trace.time.push_back(t);
        trace.phi_L.push_back(wt(0));
        trace.tau_L.push_back(tau_L);
        trace.e.push_back(err);
        trace.tau_d.push_back(err + tau_L);
        trace.omega_d.push_back(ctrl_row.dot(x));
    };

    record(0.0);
    Eigen::VectorXd k1(nx), k2(nx), k3(nx), k4(nx);
    for (int i = 0; i < steps; ++i) {
        const double t = i * h;
        k1 = A * x + B * eval_w(t);
        k2 = A * (x + 0.5 * h * k1) + B * eval_w(t + 0.5 * h);
        k3 = A * (x + 0.5 * h * k2) + B * eval_w(t + 0.5 * h);
        k4 = A * (x + h * k3) + B * eval_w(t + h);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        record((i + 1) * h);
    }

    trace.steady_start = settings.steady_window_fraction * settings.duration_s;
    trace.steady_end = settings.duration_s;
    for (size_t i = 0; i < trace.time.size(); ++i) {
        if (trace.time[i] < trace.steady_start) continue;
        trace.metrics.max_abs_error = std::max(trace.metrics.max_abs_error, std::abs(trace.e[i]));
        trace.metrics.max_abs_control =
            std::max(trace.metrics.max_abs_control, std::abs(trace.omega_d[i]));
        trace.metrics.max_abs_tau_d =
            std::max(trace.metrics.max_abs_tau_d, std::abs(trace.tau_d[i]));
    }
    return trace;
}

std::vector<SweepRow> sweep_cases(const SeaParameters& params, const std::vector<SweepCase>& cases,
                                  const SignalSpec& hand_motion,
                                  const SimulationSettings& settings,
                                  const SynthesisOptions& synth_options) {
    std::vector<SweepRow> rows;
    rows.reserve(cases.size());
    for (const auto& c : cases) {
        SweepRow row;
        row.name = c.name;
        row.impedance = c.impedance;
        row.bounds = c.bounds;
        try {
            const GeneralizedPlant plant = build_generalized_plant(params, c.impedance, c.weights);
            const SynthesisResult synth = synthesize_mixed(plant, c.bounds, synth_options);
            row.report = verify(plant, synth.controller, c.bounds);
            const ClosedLoopSystem cl = close_loop(plant, synth.controller);
            SimulationSettings s = settings;
            s.sample_rate_hz = recommended_sample_rate(cl, settings.sample_rate_hz);
            row.metrics = simulate(cl, hand_motion, SignalSpec::constant(0.0),
                                   SignalSpec::constant(0.0), s)
                              .metrics;
        } catch (const std::exception& ex) {
            row.error = ex.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace seasyn
