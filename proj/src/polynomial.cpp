#include "qes/polynomial.hpp"

#include <cmath>
#include <stdexcept>

namespace qes {

Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_ = {0.0};
    trim();
}

void Polynomial::trim() {
    while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
}

Polynomial Polynomial::monic_from_roots(const std::vector<double>& roots) {
    std::vector<double> c{1.0};
    for (double r : roots) {
        // c <- c * (t - r)
        std::vector<double> next(c.size() + 1, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= r * c[k];
        }
        c = std::move(next);
    }
    return Polynomial(std::move(c));
}

double Polynomial::eval(double t) const {
    double acc = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * t + c_[k];
    return acc;
}

std::complex<double> Polynomial::eval(std::complex<double> t) const {
    std::complex<double> acc = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * t + c_[k];
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() == 1) return Polynomial();
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k)
        d[k - 1] = static_cast<double>(k) * c_[k];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::times_t() const {
    if (is_zero()) return Polynomial();
    std::vector<double> s(c_.size() + 1, 0.0);
    for (std::size_t k = 0; k < c_.size(); ++k) s[k + 1] = c_[k];
    return Polynomial(std::move(s));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> s(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t k = 0; k < s.size(); ++k)
        s[k] = a.coeff(k) + b.coeff(k);
    return Polynomial(std::move(s));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<double> s(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t k = 0; k < s.size(); ++k)
        s[k] = a.coeff(k) - b.coeff(k);
    return Polynomial(std::move(s));
}

Polynomial operator*(double s, const Polynomial& p) {
    std::vector<double> c = p.c_;
    for (double& x : c) x *= s;
    return Polynomial(std::move(c));
}

}  // namespace qes
