#include "seasyn/frequency_response.hpp"

#include <cmath>
#include <stdexcept>

#include "seasyn/errors.hpp"

namespace seasyn {

std::vector<double> log_grid(double w_lo, double w_hi, int n) {
    if (!(w_lo > 0.0) || !(w_hi > w_lo) || n < 2) {
        throw std::invalid_argument("log_grid: need 0 < w_lo < w_hi and n >= 2");
    }
    std::vector<double> out(n);
    const double l0 = std::log10(w_lo), l1 = std::log10(w_hi);
    for (int i = 0; i < n; ++i) {
        out[i] = std::pow(10.0, l0 + (l1 - l0) * i / (n - 1));
    }
    return out;
}

FrequencyResponse frequency_response(const StateSpaceModel& sys, const std::vector<double>& grid) {
    for (size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
            throw std::invalid_argument("frequency grid must be strictly increasing and positive");
        }
    }
    const int n = sys.n_states();

    std::vector<std::complex<double>> eigs;
    if (n > 0) {
        Eigen::EigenSolver<Eigen::MatrixXd> es(sys.A, false);
        for (int i = 0; i < n; ++i) eigs.push_back(es.eigenvalues()(i));
    }

    FrequencyResponse fr;
    fr.omegas = grid;
    fr.values.reserve(grid.size());
    const Eigen::MatrixXcd Bc = sys.B.cast<std::complex<double>>();
    for (double w : grid) {
        if (n == 0) {
            fr.values.push_back(sys.D.cast<std::complex<double>>());
            continue;
        }
        const std::complex<double> jw(0.0, w);
        for (const auto& lam : eigs) {
            if (std::abs(jw - lam) <= 1e-9 * std::max(1.0, std::abs(lam))) {
                throw SingularResolvent("grid point " + std::to_string(w) +
                                        " rad/s coincides with a system pole");
            }
        }
        Eigen::MatrixXcd M = -sys.A.cast<std::complex<double>>();
        M.diagonal().array() += jw;
        const Eigen::MatrixXcd X = M.partialPivLu().solve(Bc);
        fr.values.push_back(sys.C * X + sys.D);
    }
    return fr;
}

std::vector<double> magnitude_db(const FrequencyResponse& fr, int output, int input) {
    std::vector<double> out(fr.size());
    for (int k = 0; k < fr.size(); ++k) {
        out[k] = 20.0 * std::log10(std::abs(fr.values[k](output, input)));
    }
    return out;
}

std::vector<double> phase_deg_unwrapped(const FrequencyResponse& fr, int output, int input) {
    std::vector<double> out(fr.size());
    double correction = 0.0;
    double prev = 0.0;
    for (int k = 0; k < fr.size(); ++k) {
        const double raw = std::arg(fr.values[k](output, input)) * 180.0 / M_PI;
        if (k > 0) {
            double diff = raw + correction - prev;
            while (diff > 180.0) {
                correction -= 360.0;
                diff -= 360.0;
            }
            while (diff < -180.0) {
                correction += 360.0;
                diff += 360.0;
            }
        }
        out[k] = raw + correction;
        prev = out[k];
    }
    return out;
}

std::vector<double> sigma_max(const FrequencyResponse& fr) {
    std::vector<double> out(fr.size());
    for (int k = 0; k < fr.size(); ++k) {
        if (fr.values[k].size() == 0) {
            out[k] = 0.0;
            continue;
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(fr.values[k]);
        out[k] = svd.singularValues()(0);
    }
    return out;
}

}  // namespace seasyn
