#include "qes/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qes {

InvariantMatrix invariant_matrix(const BasicEquation& eq, int n) {
    if (n < 0) throw std::invalid_argument("negative degree");
    const double leakage = eq.b2 * static_cast<double>(n) + eq.c1;
    const double scale =
        1.0 + std::abs(eq.b2) * static_cast<double>(n) + std::abs(eq.c1);
    if (std::abs(leakage) > 1e-9 * scale) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", leakage);
        throw std::domain_error(
            std::string("subspace not invariant: leakage coefficient ") + buf);
    }

    InvariantMatrix m;
    m.n = n;
    m.leakage = leakage;
    m.H = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int k = 0; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        if (k + 1 <= n) m.H(k + 1, k) = eq.b2 * kk + eq.c1;
        m.H(k, k) = kk * (kk - 1.0) + eq.b1 * kk;
        if (k - 1 >= 0) m.H(k - 1, k) = -eq.alpha * kk * (kk - 1.0) + eq.b0 * kk;
    }
    return m;
}

std::vector<std::complex<double>> poly_roots(
    const std::vector<double>& coeffs) {
    double maxc = 0.0;
    for (double c : coeffs) maxc = std::max(maxc, std::abs(c));
    if (coeffs.empty() || maxc == 0.0)
        throw std::domain_error("degree deflation required");
    if (std::abs(coeffs.back()) < 1e-13 * maxc)
        throw std::domain_error("degree deflation required");

    const int n = static_cast<int>(coeffs.size()) - 1;
    if (n == 0) return {};
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
    const double lead = coeffs.back();
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) C(i, n - 1) = -coeffs[i] / lead;
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> roots(n);
    for (int i = 0; i < n; ++i) roots[i] = es.eigenvalues()(i);
    std::sort(roots.begin(), roots.end(),
              [](const std::complex<double>& a, const std::complex<double>& b) {
                  if (a.real() != b.real()) return a.real() < b.real();
                  return a.imag() < b.imag();
              });
    return roots;
}

namespace {

// Companion-matrix roots for a complex-coefficient eigenpolynomial (the
// complex-eigenvalue levels); same contract as poly_roots.
std::vector<std::complex<double>> poly_roots_complex(
    const std::vector<std::complex<double>>& coeffs) {
    const int n = static_cast<int>(coeffs.size()) - 1;
    if (n <= 0) return {};
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
    const std::complex<double> lead = coeffs.back();
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) C(i, n - 1) = -coeffs[i] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    std::vector<std::complex<double>> roots(n);
    for (int i = 0; i < n; ++i) roots[i] = es.eigenvalues()(i);
    std::sort(roots.begin(), roots.end(),
              [](const std::complex<double>& a, const std::complex<double>& b) {
                  if (a.real() != b.real()) return a.real() < b.real();
                  return a.imag() < b.imag();
              });
    return roots;
}

}  // namespace

std::vector<OracleLevel> oracle_solutions(const BasicEquation& eq, int n) {
    const InvariantMatrix m = invariant_matrix(eq, n);
    Eigen::EigenSolver<Eigen::MatrixXd> es(m.H);

    struct Raw {
        std::complex<double> c0;
        Eigen::VectorXcd v;
    };
    std::vector<Raw> raws(n + 1);
    for (int i = 0; i <= n; ++i)
        raws[i] = {es.eigenvalues()(i), es.eigenvectors().col(i)};
    std::sort(raws.begin(), raws.end(), [](const Raw& a, const Raw& b) {
        if (a.c0.real() != b.c0.real()) return a.c0.real() < b.c0.real();
        return a.c0.imag() < b.c0.imag();
    });

    // Defective-cluster detection: (nearly) repeated eigenvalues whose
    // computed eigenvectors are (nearly) parallel mark a Jordan block.
    std::vector<bool> defective(n + 1, false);
    for (int i = 0; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            const double gap = std::abs(raws[j].c0 - raws[i].c0);
            if (gap > 1e-7 * (1.0 + std::abs(raws[i].c0))) continue;
            const double cosang = std::abs(raws[i].v.dot(raws[j].v)) /
                                  (raws[i].v.norm() * raws[j].v.norm());
            if (cosang > 1.0 - 1e-6) defective[i] = defective[j] = true;
        }
    }

    std::vector<OracleLevel> out;
    out.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
        OracleLevel lvl;
        lvl.c0 = raws[i].c0;
        const bool c0_real =
            std::abs(lvl.c0.imag()) <= 1e-9 * (1.0 + std::abs(lvl.c0));

        Eigen::VectorXcd v = raws[i].v;
        if (c0_real) {
            // Rotate the phase so a real-eigenvalue eigenvector is real.
            int imax = 0;
            for (int j = 1; j <= n; ++j)
                if (std::abs(v(j)) > std::abs(v(imax))) imax = j;
            v /= v(imax) / std::abs(v(imax));
            for (int j = 0; j <= n; ++j) v(j) = v(j).real();
        }

        const bool spans = std::abs(v(n)) > 1e-9 * v.lpNorm<Eigen::Infinity>();
        if (spans) v /= v(n);  // monic normalization
        lvl.coeffs.assign(v.data(), v.data() + n + 1);
        lvl.degenerate = defective[i] || !spans;

        if (spans && !lvl.degenerate) {
            if (c0_real) {
                std::vector<double> rc(n + 1);
                for (int j = 0; j <= n; ++j) rc[j] = v(j).real();
                lvl.roots = poly_roots(rc);
            } else {
                lvl.roots = poly_roots_complex(lvl.coeffs);
            }
        }

        bool roots_real = spans && !lvl.degenerate;
        for (const std::complex<double>& z : lvl.roots)
            if (std::abs(z.imag()) > 1e-9 * (1.0 + std::abs(z)))
                roots_real = false;
        lvl.all_real = c0_real && roots_real;
        out.push_back(std::move(lvl));
    }
    return out;
}

}  // namespace qes
