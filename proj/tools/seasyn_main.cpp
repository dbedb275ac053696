// seasyn command line: synthesize, simulate, analyze and reproduce the
// bundled impedance-control case studies for the cable-driven SEA platform.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>

#include "seasyn/analysis.hpp"
#include "seasyn/config.hpp"
#include "seasyn/errors.hpp"
#include "seasyn/frequency_response.hpp"
#include "seasyn/sea_model.hpp"
#include "seasyn/simulation.hpp"
#include "seasyn/synthesis.hpp"

using namespace seasyn;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct PaperReference {
    double max_error;    // Nm
    double max_control;  // rad/s
    std::optional<double> max_tau_d;  // Nm, when reported
};

// Reference simulation figures for the three stiffness ratios.
const std::map<std::string, PaperReference>& reference_targets() {
    static const std::map<std::string, PaperReference> refs = {
        {"0.3Ks", {0.0233, 16.9859, std::nullopt}},
        {"0.6Ks", {0.0130, 9.8110, 0.0580}},
        {"0.9Ks", {0.0060, 2.4232, 0.0870}},
    };
    return refs;
}

FrequencyResponse tf_response(const RationalTransferFunction& tf, const std::vector<double>& grid) {
    FrequencyResponse fr;
    fr.omegas = grid;
    fr.values.reserve(grid.size());
    for (double w : grid) {
        Eigen::MatrixXcd v(1, 1);
        v(0, 0) = tf.eval({0.0, w});
        fr.values.push_back(v);
    }
    return fr;
}

std::vector<double> band_grid(double f_max_hz, int per_decade = 60) {
    const double w_lo = 2.0 * M_PI * 0.01;
    const double w_hi = 2.0 * M_PI * f_max_hz;
    const int n = static_cast<int>(std::ceil(std::log10(w_hi / w_lo) * per_decade)) + 1;
    return log_grid(w_lo, w_hi, n);
}

json verification_json(const VerificationReport& r) {
    return json{{"hinf_error", r.hinf_error},
                {"h2_control", r.h2_control},
                {"spectral_abscissa", r.spectral_abscissa},
                {"hinf_error_bound", r.bounds.hinf_error_bound},
                {"h2_control_bound", r.bounds.h2_control_bound},
                {"pass", r.pass}};
}

json metrics_json(const SimulationMetrics& m) {
    return json{{"max_abs_error_Nm", m.max_abs_error},
                {"max_abs_control_rad_s", m.max_abs_control},
                {"max_abs_tau_d_Nm", m.max_abs_tau_d}};
}

void print_verification(const VerificationReport& r) {
    std::printf("  ||T_w->e_tilde||_inf = %.6f (bound %.6f)\n", r.hinf_error,
                r.bounds.hinf_error_bound);
    std::printf("  ||T_w->u_tilde||_2   = %.6f (bound %.6f)\n", r.h2_control,
                r.bounds.h2_control_bound);
    std::printf("  spectral abscissa    = %.6f\n", r.spectral_abscissa);
    std::printf("  verification         : %s\n", r.pass ? "pass" : "FAIL");
}

int cmd_synth(const std::string& config_path, std::string out_dir) {
    const ExperimentConfig cfg = load_config(config_path);
    if (out_dir.empty()) out_dir = cfg.output_directory;
    const auto plant = build_generalized_plant(cfg.sea, cfg.impedance, cfg.weighting_set());

    SynthesisResult result;
    try {
        result = synthesize_mixed(plant, cfg.bounds);
    } catch (const Infeasible& ex) {
        std::fprintf(stderr, "infeasible: %s\n", ex.what());
        return 1;
    }
    for (const auto& w : result.warnings) {
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    }
    const auto report = verify(plant, result.controller, cfg.bounds);

    fs::create_directories(out_dir);
    const std::string controller_path = (fs::path(out_dir) / "controller.txt").string();
    save_controller(controller_path, result.controller);
    json j{{"config", config_path},
           {"controller", controller_path},
           {"lmi_margin", result.lmi_margin},
           {"sdp_iterations", result.sdp_iterations},
           {"verification", verification_json(report)}};
    write_file_atomic((fs::path(out_dir) / "synth_report.json").string(), j.dump(2) + "\n");

    std::printf("controller written to %s (order %d)\n", controller_path.c_str(),
                result.controller.order());
    print_verification(report);
    return report.pass ? 0 : 2;
}

int cmd_simulate(const std::string& config_path, const std::string& controller_path,
                 std::string out_dir, double sample_rate_flag) {
    const ExperimentConfig cfg = load_config(config_path);
    if (out_dir.empty()) out_dir = cfg.output_directory;
    const auto plant = build_generalized_plant(cfg.sea, cfg.impedance, cfg.weighting_set());
    const auto controller = load_controller(controller_path);
    if (controller.order() != plant.order() || controller.B_k.cols() != 2) {
        throw DimensionMismatch("controller file does not match the plant dimensions (order " +
                                std::to_string(controller.order()) + " vs plant " +
                                std::to_string(plant.order()) + ")");
    }
    const auto cl = close_loop(plant, controller);

    SimulationSettings settings = cfg.simulation_settings();
    if (sample_rate_flag > 0.0) settings.sample_rate_hz = sample_rate_flag;
    const auto trace = simulate(cl, cfg.motion_signal(), cfg.disturbance_signal(),
                                cfg.noise_signal(), settings);

    fs::create_directories(out_dir);
    const std::string trace_path = (fs::path(out_dir) / "trace.csv").string();
    write_trace_csv(trace_path, trace);
    std::printf("trace written to %s (%zu samples)\n", trace_path.c_str(), trace.time.size());
    std::printf("  max |e|       = %.6f Nm\n", trace.metrics.max_abs_error);
    std::printf("  max |omega_d| = %.6f rad/s\n", trace.metrics.max_abs_control);
    std::printf("  max |tau_d|   = %.6f Nm\n", trace.metrics.max_abs_tau_d);
    return 0;
}

int cmd_bode(const std::string& config_path, const std::string& controller_path,
             std::string out_dir, double f_max_hz) {
    const ExperimentConfig cfg = load_config(config_path);
    if (out_dir.empty()) out_dir = cfg.output_directory;
    const auto plant = build_generalized_plant(cfg.sea, cfg.impedance, cfg.weighting_set());
    const auto controller = load_controller(controller_path);
    const auto cl = close_loop(plant, controller);

    const auto grid = band_grid(f_max_hz);
    const auto weights = cfg.weighting_set();
    const auto zd = desired_models(cfg.impedance).second;

    fs::create_directories(out_dir);
    write_bode_csv((fs::path(out_dir) / "impedance_desired.csv").string(), tf_response(zd, grid));
    write_bode_csv((fs::path(out_dir) / "impedance_actual.csv").string(),
                   actual_impedance(cl, grid));
    if (!weights.motion_filter.num().almost_equal(Polynomial::constant(1.0)) ||
        weights.motion_filter.den().degree() != 0) {
        write_bode_csv((fs::path(out_dir) / "impedance_desired_filtered.csv").string(),
                       tf_response(zd * weights.motion_filter, grid));
    }
    std::printf("bode data written to %s\n", out_dir.c_str());
    return 0;
}

int cmd_passivity(const std::string& config_path, const std::string& controller_path,
                  double f_max_hz) {
    const ExperimentConfig cfg = load_config(config_path);
    const auto plant = build_generalized_plant(cfg.sea, cfg.impedance, cfg.weighting_set());
    const auto controller = load_controller(controller_path);
    const auto cl = close_loop(plant, controller);
    const auto report = check_relaxed_passivity(cl, f_max_hz);

    std::printf("relaxed passivity on [%.4f, %.4f] rad/s (%zu points)\n", report.band_low_rad_s,
                report.band_high_rad_s, report.grid.size());
    std::printf("  min phase margin = %.3f deg (tolerance %.1f)\n", report.min_phase_margin_deg,
                report.tolerance_deg);
    std::printf("  closed loop      : %s (abscissa %.4f)\n",
                report.closed_loop_hurwitz ? "Hurwitz" : "NOT Hurwitz",
                report.spectral_abscissa.value_or(0.0));
    std::printf("  passive_on_band  : %s\n", report.passive_on_band ? "yes" : "no");
    return (report.passive_on_band && report.closed_loop_hurwitz) ? 0 : 1;
}

struct ReproduceRow {
    std::string        name;
    ExperimentConfig   cfg;
    VerificationReport verification;
    SimulationMetrics  metrics;
    PassivityReport    passivity;
    double             synth_seconds = 0.0;
    bool               ok = false;
    bool               checks_pass = false;
    std::string        detail;
    std::string        error;
};

int cmd_reproduce(const std::string& out_dir, const std::vector<std::string>& case_filters,
                  double f_max_hz, double sample_rate_hz) {
    std::vector<ReproduceRow> rows;
    for (const auto& bundled : bundled_cases()) {
        if (!case_filters.empty()) {
            bool selected = false;
            for (const auto& f : case_filters) {
                if (bundled.name.find(f) != std::string::npos) selected = true;
            }
            if (!selected) continue;
        }
        ReproduceRow row;
        row.name = bundled.name;
        try {
            row.cfg = parse_config(bundled.text, bundled.name);
            const auto plant =
                build_generalized_plant(row.cfg.sea, row.cfg.impedance, row.cfg.weighting_set());
            const auto t0 = std::chrono::steady_clock::now();
            const auto synth = synthesize_mixed(plant, row.cfg.bounds);
            row.synth_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            row.verification = verify(plant, synth.controller, row.cfg.bounds);
            const auto cl = close_loop(plant, synth.controller);

            SimulationSettings settings = row.cfg.simulation_settings();
            settings.sample_rate_hz =
                recommended_sample_rate(cl, std::max(sample_rate_hz, settings.sample_rate_hz));
            const auto trace = simulate(cl, row.cfg.motion_signal(), row.cfg.disturbance_signal(),
                                        row.cfg.noise_signal(), settings);
            row.metrics = trace.metrics;
            row.passivity = check_relaxed_passivity(cl, f_max_hz);

            const fs::path case_dir = fs::path(out_dir) / row.name;
            fs::create_directories(case_dir);
            save_controller((case_dir / "controller.txt").string(), synth.controller);
            write_trace_csv((case_dir / "trace.csv").string(), trace);
            const auto grid = band_grid(f_max_hz);
            const auto zd = desired_models(row.cfg.impedance).second;
            write_bode_csv((case_dir / "impedance_desired.csv").string(), tf_response(zd, grid));
            write_bode_csv((case_dir / "impedance_actual.csv").string(),
                           actual_impedance(cl, grid));

            // Per-case checks against the reference envelopes.
            bool pass = row.verification.pass && row.passivity.passive_on_band &&
                        row.passivity.closed_loop_hurwitz &&
                        row.metrics.max_abs_control < row.cfg.sea.motor_velocity_limit;
            const auto ref = reference_targets().find(row.name);
            if (ref != reference_targets().end()) {
                const auto& t = ref->second;
                const bool err_ok = row.metrics.max_abs_error >= 0.70 * t.max_error &&
                                    row.metrics.max_abs_error <= 1.30 * t.max_error;
                const bool ctl_ok = row.metrics.max_abs_control >= 0.70 * t.max_control &&
                                    row.metrics.max_abs_control <= 1.30 * t.max_control;
                bool tau_ok = true;
                if (t.max_tau_d) {
                    tau_ok = std::abs(row.metrics.max_abs_tau_d - *t.max_tau_d) <=
                             0.005 * *t.max_tau_d;
                }
                pass = pass && err_ok && ctl_ok && tau_ok;
                row.detail = std::string(err_ok ? "" : "error-envelope ") +
                             (ctl_ok ? "" : "control-envelope ") + (tau_ok ? "" : "tau_d ");
            }
            row.checks_pass = pass;
            row.ok = true;
        } catch (const std::exception& ex) {
            row.error = ex.what();
        }
        rows.push_back(std::move(row));
    }

    if (rows.empty()) {
        std::fprintf(stderr, "no cases selected\n");
        return 1;
    }

    std::printf("\n%-8s %-12s %-9s %-9s %-11s %-11s %-22s %-22s %-9s %s\n", "case", "Kd[Nm/rad]",
                "gamma_e", "gamma_u", "hinf", "h2", "max|e| (ref)", "max|w| (ref)", "passive",
                "checks");
    bool all_pass = true;
    bool monotone_ok = true;
    {
        std::vector<const ReproduceRow*> stiffness_rows;
        for (const auto& r : rows) {
            if (r.ok && reference_targets().count(r.name)) stiffness_rows.push_back(&r);
        }
        for (size_t i = 1; i < stiffness_rows.size(); ++i) {
            if (!(stiffness_rows[i]->metrics.max_abs_error <
                      stiffness_rows[i - 1]->metrics.max_abs_error &&
                  stiffness_rows[i]->metrics.max_abs_control <
                      stiffness_rows[i - 1]->metrics.max_abs_control)) {
                monotone_ok = false;
            }
        }
    }
    json jcases = json::array();
    for (const auto& r : rows) {
        if (!r.ok) {
            std::printf("%-8s FAILED: %s\n", r.name.c_str(), r.error.c_str());
            all_pass = false;
            jcases.push_back(json{{"name", r.name}, {"error", r.error}});
            continue;
        }
        const auto ref = reference_targets().find(r.name);
        char err_ref[32] = "-", ctl_ref[32] = "-";
        if (ref != reference_targets().end()) {
            std::snprintf(err_ref, sizeof(err_ref), "%.4f", ref->second.max_error);
            std::snprintf(ctl_ref, sizeof(ctl_ref), "%.4f", ref->second.max_control);
        }
        std::printf("%-8s %-12.5f %-9.4f %-9.3f %-11.6f %-11.6f %.4f (%s)%*s %.4f (%s)%*s %-9s %s\n",
                    r.name.c_str(), r.cfg.impedance.virtual_stiffness,
                    r.cfg.bounds.hinf_error_bound, r.cfg.bounds.h2_control_bound,
                    r.verification.hinf_error, r.verification.h2_control,
                    r.metrics.max_abs_error, err_ref,
                    (int)std::max<ptrdiff_t>(0, 13 - strlen(err_ref)), "",
                    r.metrics.max_abs_control, ctl_ref,
                    (int)std::max<ptrdiff_t>(0, 13 - strlen(ctl_ref)), "",
                    r.passivity.passive_on_band ? "yes" : "NO",
                    r.checks_pass ? "pass" : ("FAIL " + r.detail).c_str());
        all_pass = all_pass && r.checks_pass;
        jcases.push_back(json{{"name", r.name},
                              {"virtual_stiffness", r.cfg.impedance.virtual_stiffness},
                              {"verification", verification_json(r.verification)},
                              {"metrics", metrics_json(r.metrics)},
                              {"passive_on_band", r.passivity.passive_on_band},
                              {"min_phase_margin_deg", r.passivity.min_phase_margin_deg},
                              {"synth_seconds", r.synth_seconds},
                              {"checks_pass", r.checks_pass}});
    }
    if (!monotone_ok) {
        std::printf("stiffness trend violated: errors/control must shrink as Kd grows\n");
        all_pass = false;
    }
    json jreport{{"cases", jcases}, {"monotone_trend", monotone_ok}, {"pass", all_pass}};
    fs::create_directories(out_dir);
    write_file_atomic((fs::path(out_dir) / "report.json").string(), jreport.dump(2) + "\n");
    std::printf("\n%s (report at %s/report.json)\n",
                all_pass ? "all reproduction checks passed" : "REPRODUCTION CHECKS FAILED",
                out_dir.c_str());
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixed H2/H-infinity impedance control toolkit for a cable-driven SEA"};
    app.require_subcommand(1);

    std::string config_path, controller_path, out_dir;
    double f_max_hz = 5.0;
    double sample_rate_hz = 0.0;
    std::vector<std::string> case_filters;

    auto* synth = app.add_subcommand("synth", "synthesize a controller from a config");
    synth->add_option("--config", config_path, "experiment config")->required();
    synth->add_option("--out", out_dir, "output directory (default from config)");

    auto* sim = app.add_subcommand("simulate", "simulate a closed loop from a controller file");
    sim->add_option("--config", config_path, "experiment config")->required();
    sim->add_option("--controller", controller_path, "controller file")->required();
    sim->add_option("--out", out_dir, "output directory (default from config)");
    sim->add_option("--sample-rate-hz", sample_rate_hz, "override the config sample rate");

    auto* bode = app.add_subcommand("bode", "export impedance bode CSVs");
    bode->add_option("--config", config_path, "experiment config")->required();
    bode->add_option("--controller", controller_path, "controller file")->required();
    bode->add_option("--out", out_dir, "output directory (default from config)");
    bode->add_option("--fmax-hz", f_max_hz, "band edge (default 5 Hz)");

    auto* pasv = app.add_subcommand("passivity", "check relaxed passivity of the closed loop");
    pasv->add_option("--config", config_path, "experiment config")->required();
    pasv->add_option("--controller", controller_path, "controller file")->required();
    pasv->add_option("--fmax-hz", f_max_hz, "band edge (default 5 Hz)");

    auto* repro = app.add_subcommand("reproduce", "run the bundled case studies end to end");
    repro->add_option("--out", out_dir, "output directory")->default_val("out");
    repro->add_option("--cases", case_filters, "subset selector, e.g. 0.9 or general");
    repro->add_option("--fmax-hz", f_max_hz, "passivity band edge (default 5 Hz)");
    repro->add_option("--sample-rate-hz", sample_rate_hz,
                      "minimum simulation sample rate (default 2000)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return cmd_synth(config_path, out_dir);
        if (sim->parsed()) return cmd_simulate(config_path, controller_path, out_dir, sample_rate_hz);
        if (bode->parsed()) return cmd_bode(config_path, controller_path, out_dir, f_max_hz);
        if (pasv->parsed()) return cmd_passivity(config_path, controller_path, f_max_hz);
        if (repro->parsed()) {
            return cmd_reproduce(out_dir, case_filters, f_max_hz,
                                 sample_rate_hz > 0.0 ? sample_rate_hz : 2000.0);
        }
    } catch (const ConfigError& ex) {
        std::fprintf(stderr, "config error: %s\n", ex.what());
        return 3;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 4;
    }
    return 0;
}
