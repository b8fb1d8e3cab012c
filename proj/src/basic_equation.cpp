#include "qes/basic_equation.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qes {

double residual(const BasicEquation& eq, const Polynomial& S, double t) {
    const Polynomial dS = S.derivative();
    const Polynomial d2S = dS.derivative();
    const double s = S.eval(t);
    const double s1 = dS.eval(t);
    const double s2 = d2S.eval(t);
    return t * (t - eq.alpha) * s2 +
           (eq.b2 * t * t + eq.b1 * t + eq.b0) * s1 + eq.c1 * t * s -
           eq.c0 * s;
}

GsweParams to_gswe(const BasicEquation& eq) {
    if (eq.b2 == 0.0)
        throw std::domain_error("degenerate exponential scaling");
    const std::complex<double> i(0.0, 1.0);
    GsweParams g;
    g.t0 = eq.alpha;
    g.omega = -0.5 * i * eq.b2;
    g.k = 0.5 * i * (eq.b1 + eq.alpha * eq.b2 - 2.0 * eq.c1 / eq.b2);
    g.B1 = eq.b0;
    g.B2 = eq.b1 + eq.alpha * eq.b2;
    g.B3 = eq.alpha * eq.c1 - eq.c0 -
           0.5 * eq.b2 *
               (eq.b0 + eq.alpha * eq.b1 + eq.alpha * eq.alpha * eq.b2);
    return g;
}

BasicEquation from_gswe(const GsweParams& g) {
    if (g.omega == std::complex<double>(0.0, 0.0))
        throw std::domain_error("degenerate exponential scaling");
    const double tol_o = 1e-12 * (1.0 + std::abs(g.omega));
    const double tol_k = 1e-12 * (1.0 + std::abs(g.k));
    if (std::abs(g.omega.real()) > tol_o || std::abs(g.k.real()) > tol_k)
        throw std::domain_error("complex basic equation unsupported");

    BasicEquation eq;
    eq.alpha = g.t0;
    // b2 = 2 i omega, and omega = i Im(omega) here, so b2 = -2 Im(omega).
    eq.b2 = -2.0 * g.omega.imag();
    eq.b0 = g.B1;
    eq.b1 = g.B2 - eq.alpha * eq.b2;
    // c1 = b2 (B2 + 2 i k) / 2 and 2 i k = -2 Im k for purely imaginary k.
    eq.c1 = 0.5 * eq.b2 * (g.B2 - 2.0 * g.k.imag());
    eq.c0 = eq.alpha * eq.c1 - g.B3 -
            0.5 * eq.b2 *
                (eq.b0 + eq.alpha * eq.b1 + eq.alpha * eq.alpha * eq.b2);
    return eq;
}

std::optional<int> qes_degree(const BasicEquation& eq) {
    if (eq.b2 == 0.0) return std::nullopt;
    const double ratio = -eq.c1 / eq.b2;
    const double rounded = std::round(ratio);
    if (rounded < -0.5) return std::nullopt;
    if (std::abs(ratio - rounded) > 1e-9) return std::nullopt;
    return static_cast<int>(rounded);
}

double c0_from_roots(const BasicEquation& eq,
                     const std::vector<double>& roots) {
    const double n = static_cast<double>(roots.size());
    const double sum = std::accumulate(roots.begin(), roots.end(), 0.0);
    return n * (n - 1.0) + eq.b2 * sum + n * eq.b1;
}

}  // namespace qes
