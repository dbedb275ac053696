#include "seasyn/analysis.hpp"

#include <cmath>

#include "seasyn/errors.hpp"

namespace seasyn {

FrequencyResponse actual_impedance(const ClosedLoopSystem& cl, const std::vector<double>& grid) {
    const auto motion_to_torque = cl.sys.subsystem(std::vector<int>{2}, std::vector<int>{0});
    FrequencyResponse fr = frequency_response(motion_to_torque, grid);
    for (int k = 0; k < fr.size(); ++k) {
        const std::complex<double> jw(0.0, fr.omegas[k]);
        fr.values[k](0, 0) = -fr.values[k](0, 0) / jw;
    }
    return fr;
}

namespace {

PassivityReport phase_band_check(const std::vector<double>& omegas,
                                 const std::vector<double>& phase, double f_max_hz,
                                 double tolerance_deg) {
    const double w_lo = 2.0 * M_PI * 0.01;
    const double w_hi = 2.0 * M_PI * f_max_hz;

    PassivityReport report;
    report.band_low_rad_s = w_lo;
    report.band_high_rad_s = w_hi;
    report.tolerance_deg = tolerance_deg;

    if (omegas.empty() || omegas.front() > w_lo * (1.0 + 1e-9) ||
        omegas.back() < w_hi * (1.0 - 1e-9)) {
        throw GridTooSparse("impedance grid does not cover the passivity band");
    }
    // Density check: at least 20 points per decade everywhere on the band.
    for (size_t i = 1; i < omegas.size(); ++i) {
        if (omegas[i] < w_lo || omegas[i - 1] > w_hi) continue;
        const double step_decades = std::log10(omegas[i] / omegas[i - 1]);
        if (step_decades > 1.0 / 20.0 + 1e-12) {
            throw GridTooSparse("impedance grid coarser than 20 points per decade on the band");
        }
    }

    report.min_phase_margin_deg = 180.0;
    for (size_t i = 0; i < omegas.size(); ++i) {
        if (omegas[i] < w_lo * (1.0 - 1e-12) || omegas[i] > w_hi * (1.0 + 1e-12)) continue;
        report.grid.push_back(omegas[i]);
        report.phase_deg.push_back(phase[i]);
        report.min_phase_margin_deg =
            std::min(report.min_phase_margin_deg, 90.0 - std::abs(phase[i]));
    }
    report.passive_on_band = report.min_phase_margin_deg >= -tolerance_deg;
    return report;
}

}  // namespace

PassivityReport check_relaxed_passivity(const FrequencyResponse& impedance, double f_max_hz,
                                        double tolerance_deg) {
    return phase_band_check(impedance.omegas, phase_deg_unwrapped(impedance), f_max_hz,
                            tolerance_deg);
}

PassivityReport check_relaxed_passivity(const ClosedLoopSystem& cl, double f_max_hz,
                                        double tolerance_deg) {
    const double w_lo = 2.0 * M_PI * 0.01;
    const double w_hi = 2.0 * M_PI * f_max_hz;
    const int    points = static_cast<int>(std::ceil(std::log10(w_hi / w_lo) * 60.0)) + 1;
    const auto   grid = log_grid(w_lo, w_hi, points);
    PassivityReport report = check_relaxed_passivity(actual_impedance(cl, grid), f_max_hz,
                                                     tolerance_deg);
    const auto stab = is_hurwitz(cl.sys);
    report.spectral_abscissa = stab.spectral_abscissa;
    report.closed_loop_hurwitz = stab.hurwitz;
    return report;
}

std::pair<double, double> wphi_deterioration(const RationalTransferFunction& desired_impedance,
                                             const RationalTransferFunction& motion_filter,
                                             double f_max_hz) {
    const double w_lo = 2.0 * M_PI * 0.01;
    const double w_hi = 2.0 * M_PI * f_max_hz;
    const int    points = static_cast<int>(std::ceil(std::log10(w_hi / w_lo) * 60.0)) + 1;

    double max_mag_gap_db = 0.0;
    double max_phase_gap_deg = 0.0;
    for (double w : log_grid(w_lo, w_hi, points)) {
        const std::complex<double> jw(0.0, w);
        const std::complex<double> z1 = desired_impedance.eval(jw);
        const std::complex<double> z2 = motion_filter.eval(jw) * z1;
        if (std::abs(z1) == 0.0 || std::abs(z2) == 0.0) continue;
        max_mag_gap_db =
            std::max(max_mag_gap_db, std::abs(20.0 * std::log10(std::abs(z1) / std::abs(z2))));
        double dphase = std::arg(z1 / z2) * 180.0 / M_PI;
        max_phase_gap_deg = std::max(max_phase_gap_deg, std::abs(dphase));
    }
    return {max_mag_gap_db, max_phase_gap_deg};
}

ImpedancePair impedance_comparison(const ClosedLoopSystem& cl,
                                   const RationalTransferFunction& desired_impedance,
                                   const std::vector<double>& grid) {
    ImpedancePair pair;
    pair.actual = actual_impedance(cl, grid);
    pair.desired.omegas = grid;
    pair.desired.values.reserve(grid.size());
    for (double w : grid) {
        Eigen::MatrixXcd v(1, 1);
        v(0, 0) = desired_impedance.eval(std::complex<double>(0.0, w));
        pair.desired.values.push_back(v);
    }
    pair.magnitude_gap_db.resize(grid.size());
    pair.phase_gap_deg.resize(grid.size());
    for (size_t k = 0; k < grid.size(); ++k) {
        const auto zd = pair.desired.values[k](0, 0);
        const auto za = pair.actual.values[k](0, 0);
        pair.magnitude_gap_db[k] = 20.0 * std::log10(std::abs(zd) / std::abs(za));
        pair.phase_gap_deg[k] = std::arg(zd / za) * 180.0 / M_PI;
    }
    return pair;
}

}  // namespace seasyn
