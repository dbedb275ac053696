#include "seasyn/polynomial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace seasyn {

namespace {
constexpr double kTrimRel = 1e-13;
}

Polynomial::Polynomial(std::vector<double> ascending_coeffs) : coeffs_(std::move(ascending_coeffs)) {
    if (coeffs_.empty()) {
        coeffs_ = {0.0};
    }
    trim();
}

Polynomial::Polynomial(std::initializer_list<double> ascending_coeffs)
    : Polynomial(std::vector<double>(ascending_coeffs)) {}

void Polynomial::trim() {
    double max_abs = 0.0;
    for (double c : coeffs_) {
        max_abs = std::max(max_abs, std::abs(c));
    }
    const double cut = max_abs * kTrimRel;
    while (coeffs_.size() > 1 && std::abs(coeffs_.back()) <= cut) {
        coeffs_.pop_back();
    }
    if (coeffs_.size() == 1 && std::abs(coeffs_[0]) <= cut) {
        coeffs_[0] = 0.0;
    }
}

bool Polynomial::is_zero() const {
    return coeffs_.size() == 1 && coeffs_[0] == 0.0;
}

Polynomial Polynomial::from_roots(const std::vector<std::complex<double>>& roots) {
    std::vector<std::complex<double>> acc{1.0};
    for (const auto& r : roots) {
        std::vector<std::complex<double>> next(acc.size() + 1, 0.0);
        for (size_t i = 0; i < acc.size(); ++i) {
            next[i + 1] += acc[i];
            next[i] -= acc[i] * r;
        }
        acc = std::move(next);
    }
    std::vector<double> real_coeffs(acc.size());
    for (size_t i = 0; i < acc.size(); ++i) {
        real_coeffs[i] = acc[i].real();
    }
    return Polynomial(std::move(real_coeffs));
}

std::complex<double> Polynomial::eval(std::complex<double> s) const {
    std::complex<double> acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * s + *it;
    }
    return acc;
}

double Polynomial::eval(double s) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * s + *it;
    }
    return acc;
}

std::vector<std::complex<double>> Polynomial::roots() const {
    const int n = degree();
    if (n <= 0 || is_zero()) {
        return {};
    }
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    const double lead = coeffs_.back();
    for (int i = 0; i < n; ++i) {
        companion(i, n - 1) = -coeffs_[i] / lead;
        if (i > 0) {
            companion(i, i - 1) = 1.0;
        }
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> out(n);
    for (int i = 0; i < n; ++i) {
        out[i] = es.eigenvalues()(i);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
    std::vector<double> out(std::max(coeffs_.size(), rhs.coeffs_.size()), 0.0);
    for (size_t i = 0; i < coeffs_.size(); ++i) out[i] += coeffs_[i];
    for (size_t i = 0; i < rhs.coeffs_.size(); ++i) out[i] += rhs.coeffs_[i];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
    return *this + (rhs * -1.0);
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
    if (is_zero() || rhs.is_zero()) {
        return Polynomial();
    }
    std::vector<double> out(coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        for (size_t j = 0; j < rhs.coeffs_.size(); ++j) {
            out[i + j] += coeffs_[i] * rhs.coeffs_[j];
        }
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(double k) const {
    std::vector<double> out = coeffs_;
    for (double& c : out) c *= k;
    return Polynomial(std::move(out));
}

bool Polynomial::almost_equal(const Polynomial& rhs, double rel_tol) const {
    double scale = 0.0;
    for (double c : coeffs_) scale = std::max(scale, std::abs(c));
    for (double c : rhs.coeffs_) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) {
        return true;
    }
    const size_t n = std::max(coeffs_.size(), rhs.coeffs_.size());
    for (size_t i = 0; i < n; ++i) {
        const double a = i < coeffs_.size() ? coeffs_[i] : 0.0;
        const double b = i < rhs.coeffs_.size() ? rhs.coeffs_[i] : 0.0;
        if (std::abs(a - b) > rel_tol * scale) {
            return false;
        }
    }
    return true;
}

std::string Polynomial::to_string() const {
    std::ostringstream os;
    for (int i = degree(); i >= 0; --i) {
        if (i != degree()) os << " + ";
        os << coeffs_[i];
        if (i > 0) os << "*s^" << i;
    }
    return os.str();
}

}  // namespace seasyn
