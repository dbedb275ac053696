#pragma once

#include <complex>

#include "seasyn/polynomial.hpp"

namespace seasyn {

/// Ratio of two real polynomials in s. Properness is a computed property,
/// not an invariant: improper objects (e.g. a mass-damper-spring impedance
/// polynomial) are legal values; only state-space realization rejects them.
/// Common roots are never cancelled silently; call minimize() explicitly.
class RationalTransferFunction {
  public:
    RationalTransferFunction() : num_(Polynomial::constant(0.0)), den_(Polynomial::constant(1.0)) {}
    RationalTransferFunction(Polynomial num, Polynomial den);

    static RationalTransferFunction constant(double k) {
        return {Polynomial::constant(k), Polynomial::constant(1.0)};
    }
    static RationalTransferFunction s() {
        return {Polynomial::identity_s(), Polynomial::constant(1.0)};
    }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    bool is_proper() const { return num_.is_zero() || num_.degree() <= den_.degree(); }
    bool is_zero() const { return num_.is_zero(); }
    // deg(den) - deg(num); negative for improper objects.
    int relative_degree() const;

    std::complex<double> eval(std::complex<double> s) const { return num_.eval(s) / den_.eval(s); }
    double               dc_gain() const { return num_.eval(0.0) / den_.eval(0.0); }

    // Scale both polynomials so the denominator is monic.
    RationalTransferFunction normalized() const;

    // Cancel numerator/denominator root pairs closer than root_tol in the
    // complex plane. Opt-in so marginal dynamics (e.g. a pole at the origin)
    // are never altered behind the caller's back.
    RationalTransferFunction minimize(double root_tol = 1e-7) const;

    RationalTransferFunction operator+(const RationalTransferFunction& rhs) const;
    RationalTransferFunction operator-(const RationalTransferFunction& rhs) const;
    RationalTransferFunction operator*(const RationalTransferFunction& rhs) const;
    RationalTransferFunction operator/(const RationalTransferFunction& rhs) const;
    RationalTransferFunction operator*(double k) const;

    std::string to_string() const;

  private:
    Polynomial num_;
    Polynomial den_;
};

inline RationalTransferFunction operator*(double k, const RationalTransferFunction& g) {
    return g * k;
}

}  // namespace seasyn
