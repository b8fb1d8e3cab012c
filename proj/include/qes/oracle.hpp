#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qes/basic_equation.hpp"

namespace qes {

// The differential operator T[S] = t(t-alpha)S'' + (b2 t^2 + b1 t + b0)S'
// + c1 t S maps span{1, t, ..., t^n} into itself exactly when c1 = -n b2.
// In the monomial basis it is tridiagonal:
//
//   T[t^k] = (b2 k + c1) t^{k+1} + (k(k-1) + b1 k) t^k
//            + (-alpha k(k-1) + b0 k) t^{k-1},
//
// and polynomial solutions of T[S] = c0 S are its eigenpairs.
struct InvariantMatrix {
    int n = 0;
    Eigen::MatrixXd H;   // (n+1) x (n+1); column k holds T[t^k]
    double leakage;      // coefficient of t^{n+1} escaping the top column,
                         // always exactly b2*n + c1
};

// Throws std::domain_error("subspace not invariant: leakage coefficient
// <value>") when |b2*n + c1| exceeds 1e-9 * (1 + n|b2| + |c1|).
InvariantMatrix invariant_matrix(const BasicEquation& eq, int n);

// One eigenpair of the restricted operator, reported as a polynomial.
// Complex-eigenvalue levels are retained (they flag parameter regimes where
// a QES level is unphysical) with complex coefficients and roots.
struct OracleLevel {
    std::complex<double> c0;
    std::vector<std::complex<double>> coeffs;  // ascending degree
    std::vector<std::complex<double>> roots;   // empty when degenerate
    bool all_real = false;   // c0 and every root real (within 1e-9 scale)
    bool degenerate = false; // eigenvector fails to span degree n, or the
                             // eigenvalue repeats with a parallel eigenvector
                             // (defective cluster)
};

// All n+1 eigenpairs (counted with multiplicity) of the restricted
// operator, sorted by (Re c0, Im c0). Eigenpolynomials are normalized to
// leading coefficient 1 when they span degree n; a level whose eigenvector
// does not span degree n is flagged degenerate and its roots are omitted.
// Errors propagate from invariant_matrix.
std::vector<OracleLevel> oracle_solutions(const BasicEquation& eq, int n);

// Roots of a real-coefficient polynomial (ascending coefficients) via the
// balanced companion matrix. Throws std::domain_error("degree deflation
// required") if the leading coefficient is zero or negligibly small
// relative to the largest coefficient (< 1e-13 of max |coeff|).
std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs);

}  // namespace qes
