#include "seasyn/transfer_function.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace seasyn {

RationalTransferFunction::RationalTransferFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) {
        throw std::invalid_argument("transfer function denominator is the zero polynomial");
    }
}

int RationalTransferFunction::relative_degree() const {
    if (num_.is_zero()) {
        return den_.degree();
    }
    return den_.degree() - num_.degree();
}

RationalTransferFunction RationalTransferFunction::normalized() const {
    const double lead = den_.leading_coeff();
    return {num_ * (1.0 / lead), den_ * (1.0 / lead)};
}

RationalTransferFunction RationalTransferFunction::minimize(double root_tol) const {
    if (num_.is_zero()) {
        return {Polynomial::constant(0.0), Polynomial::constant(1.0)};
    }
    auto nr = num_.roots();
    auto dr = den_.roots();
    std::vector<bool> num_used(nr.size(), false);
    std::vector<bool> den_used(dr.size(), false);
    for (size_t i = 0; i < nr.size(); ++i) {
        for (size_t j = 0; j < dr.size(); ++j) {
            if (!den_used[j] && std::abs(nr[i] - dr[j]) <= root_tol) {
                num_used[i] = true;
                den_used[j] = true;
                break;
            }
        }
    }
    std::vector<std::complex<double>> nkeep;
    std::vector<std::complex<double>> dkeep;
    for (size_t i = 0; i < nr.size(); ++i) {
        if (!num_used[i]) nkeep.push_back(nr[i]);
    }
    for (size_t j = 0; j < dr.size(); ++j) {
        if (!den_used[j]) dkeep.push_back(dr[j]);
    }
    const double gain = num_.leading_coeff() / den_.leading_coeff();
    return {Polynomial::from_roots(nkeep) * gain, Polynomial::from_roots(dkeep)};
}

RationalTransferFunction RationalTransferFunction::operator+(const RationalTransferFunction& rhs) const {
    return {num_ * rhs.den_ + rhs.num_ * den_, den_ * rhs.den_};
}

RationalTransferFunction RationalTransferFunction::operator-(const RationalTransferFunction& rhs) const {
    return {num_ * rhs.den_ - rhs.num_ * den_, den_ * rhs.den_};
}

RationalTransferFunction RationalTransferFunction::operator*(const RationalTransferFunction& rhs) const {
    return {num_ * rhs.num_, den_ * rhs.den_};
}

RationalTransferFunction RationalTransferFunction::operator/(const RationalTransferFunction& rhs) const {
    if (rhs.num_.is_zero()) {
        throw std::invalid_argument("division by the zero transfer function");
    }
    return {num_ * rhs.den_, den_ * rhs.num_};
}

RationalTransferFunction RationalTransferFunction::operator*(double k) const {
    return {num_ * k, den_};
}

std::string RationalTransferFunction::to_string() const {
    std::ostringstream os;
    os << "(" << num_.to_string() << ") / (" << den_.to_string() << ")";
    return os.str();
}

}  // namespace seasyn
