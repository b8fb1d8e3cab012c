#include "qes/sl2.hpp"

#include <cmath>
#include <stdexcept>

namespace qes {

GeneratorRep generators(int n) {
    if (n < 0) throw std::invalid_argument("negative degree");
    GeneratorRep g;
    g.n = n;
    const int m = n + 1;
    g.lower = Eigen::MatrixXd::Zero(m, m);
    g.diag = Eigen::MatrixXd::Zero(m, m);
    g.raise = Eigen::MatrixXd::Zero(m, m);
    const double half_n = 0.5 * static_cast<double>(n);
    for (int k = 0; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        if (k >= 1) g.lower(k - 1, k) = kk;
        g.diag(k, k) = kk - half_n;
        if (k + 1 <= n) g.raise(k + 1, k) = kk - static_cast<double>(n);
    }
    return g;
}

double commutator_defect(const GeneratorRep& g) {
    const auto comm = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
        return (a * b - b * a).eval();
    };
    const double d1 =
        (comm(g.diag, g.raise) - g.raise).lpNorm<Eigen::Infinity>();
    const double d2 =
        (comm(g.diag, g.lower) + g.lower).lpNorm<Eigen::Infinity>();
    const double d3 =
        (comm(g.raise, g.lower) + 2.0 * g.diag).lpNorm<Eigen::Infinity>();
    return std::max({d1, d2, d3});
}

double commutator_report(int n) { return commutator_defect(generators(n)); }

Eigen::MatrixXd casimir(const GeneratorRep& g) {
    return g.diag * g.diag -
           0.5 * (g.raise * g.lower + g.lower * g.raise);
}

Eigen::MatrixXd algebraized_h(const BasicEquation& eq, int n) {
    const double leakage = eq.b2 * static_cast<double>(n) + eq.c1;
    const double scale =
        1.0 + std::abs(eq.b2) * static_cast<double>(n) + std::abs(eq.c1);
    if (std::abs(leakage) > 1e-9 * scale)
        throw std::domain_error("not QES at this degree");
    const GeneratorRep g = generators(n);
    const double nn = static_cast<double>(n);
    const Eigen::MatrixXd id =
        Eigen::MatrixXd::Identity(n + 1, n + 1);
    return g.diag * g.diag - eq.alpha * (g.diag * g.lower) +
           eq.b2 * g.raise + (nn - 1.0 + eq.b1) * g.diag +
           (eq.b0 - 0.5 * nn * eq.alpha) * g.lower +
           0.5 * nn * (0.5 * nn - 1.0 + eq.b1) * id;
}

}  // namespace qes
