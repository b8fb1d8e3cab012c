#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qes {

// Dense univariate polynomial with real coefficients in ascending degree
// order. The zero polynomial is stored as {0}; otherwise the leading
// coefficient is nonzero.
class Polynomial {
public:
    Polynomial() : c_{0.0} {}
    explicit Polynomial(std::vector<double> coeffs);

    // Monic product of (t - r) over the given roots; degree == roots.size().
    static Polynomial monic_from_roots(const std::vector<double>& roots);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<double>& coeffs() const { return c_; }
    double coeff(std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }
    bool is_zero() const { return c_.size() == 1 && c_[0] == 0.0; }

    double eval(double t) const;
    std::complex<double> eval(std::complex<double> t) const;

    Polynomial derivative() const;
    Polynomial times_t() const;   // multiply by t

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(double s, const Polynomial& p);

private:
    std::vector<double> c_;
    void trim();
};

}  // namespace qes
