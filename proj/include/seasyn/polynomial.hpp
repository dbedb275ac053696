#pragma once

#include <complex>
#include <string>
#include <vector>

namespace seasyn {

/// Real-coefficient polynomial in the Laplace variable, stored in ascending
/// degree order. Trailing (near-)zero coefficients are trimmed on
/// construction so that degree() is well defined; the zero polynomial is
/// representable and reports is_zero().
class Polynomial {
  public:
    Polynomial() : coeffs_{0.0} {}
    explicit Polynomial(std::vector<double> ascending_coeffs);
    Polynomial(std::initializer_list<double> ascending_coeffs);

    static Polynomial constant(double c) { return Polynomial({c}); }
    // The monomial s.
    static Polynomial identity_s() { return Polynomial({0.0, 1.0}); }
    // Monic polynomial with the given roots; conjugate pairs must both be
    // present so the product has real coefficients.
    static Polynomial from_roots(const std::vector<std::complex<double>>& roots);

    const std::vector<double>& coeffs() const { return coeffs_; }
    int    degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool   is_zero() const;
    double leading_coeff() const { return coeffs_.back(); }

    std::complex<double> eval(std::complex<double> s) const;
    double               eval(double s) const;

    // Roots via companion-matrix eigenvalues.
    std::vector<std::complex<double>> roots() const;

    Polynomial operator+(const Polynomial& rhs) const;
    Polynomial operator-(const Polynomial& rhs) const;
    Polynomial operator*(const Polynomial& rhs) const;
    Polynomial operator*(double k) const;
    Polynomial operator-() const { return *this * -1.0; }

    bool almost_equal(const Polynomial& rhs, double rel_tol = 1e-12) const;

    std::string to_string() const;

  private:
    void trim();

    std::vector<double> coeffs_;
};

inline Polynomial operator*(double k, const Polynomial& p) { return p * k; }

}  // namespace seasyn
