#pragma once

#include <Eigen/Dense>

#include "qes/basic_equation.hpp"

namespace qes {

// First-order differential operators acting on polynomials of degree <= n,
// written out in the monomial basis {1, t, ..., t^n}:
//
//   lower = d/dt            : t^k -> k t^{k-1}
//   diag  = t d/dt - n/2    : t^k -> (k - n/2) t^k
//   raise = t^2 d/dt - n t  : t^k -> (k - n) t^{k+1}
//
// They close into a Lie algebra on that space:
//   [diag, raise] = raise, [diag, lower] = -lower, [raise, lower] = -2 diag,
// and raise annihilates t^n, which is what traps the space.
struct GeneratorRep {
    int n = 0;
    Eigen::MatrixXd lower;   // (n+1) x (n+1)
    Eigen::MatrixXd diag;
    Eigen::MatrixXd raise;
};

GeneratorRep generators(int n);

// Max-norm deviation over the three closure identities above. Exactly zero
// in double arithmetic: every entry involved is a small integer or half-
// integer times another, so no rounding occurs.
double commutator_defect(const GeneratorRep& g);
double commutator_report(int n);  // commutator_defect(generators(n))

// diag^2 - (raise*lower + lower*raise)/2, which equals (n/2)(n/2+1) * I.
Eigen::MatrixXd casimir(const GeneratorRep& g);

// The differential operator of the basic equation rebuilt as a quadratic
// element of the algebra:
//
//   H = diag^2 - alpha diag lower + b2 raise + (n - 1 + b1) diag
//       + (b0 - n alpha / 2) lower + (n/2)(n/2 - 1 + b1) I.
//
// When c1 == -n b2 this reproduces invariant_matrix(eq, n).H entry for
// entry; the c1 t term is exactly what the raise generator contributes.
// Requires that degree condition (to 1e-9 scale); otherwise throws
// std::domain_error("not QES at this degree").
Eigen::MatrixXd algebraized_h(const BasicEquation& eq, int n);

}  // namespace qes
