#pragma once

#include <complex>
#include <optional>

#include "qes/polynomial.hpp"

namespace qes {

// Second-order linear ODE on the line,
//
//   t (t - alpha) S'' + (b2 t^2 + b1 t + b0) S' + c1 t S = c0 S,
//
// the common normal form every model in this package reduces to. Polynomial
// solutions S of degree n exist only for quantized (c1, c0); see bethe.hpp.
struct BasicEquation {
    double alpha = 0.0;
    double b2 = 0.0;
    double b1 = 0.0;
    double b0 = 0.0;
    double c1 = 0.0;
    double c0 = 0.0;
};

// Left-hand side minus right-hand side of the ODE evaluated at t for a
// candidate polynomial S. Exactly zero (up to roundoff) iff S solves the
// equation at t.
double residual(const BasicEquation& eq, const Polynomial& S, double t);

// Parameters of the generalized spheroidal form
//
//   t (t - t0) W'' + (B1 + B2 t) W' + [omega^2 t (t - t0) - 2 eta omega (t - t0) + B3] W = 0
//
// reached from the basic equation by the substitution S = exp(-i omega t) W
// with omega = Omega and 2 eta omega = -i k * (stored complex so the mapping
// is total; for real basic equations Omega and k come out purely imaginary).
struct GsweParams {
    double t0 = 0.0;
    std::complex<double> omega;  // exponential scaling frequency
    std::complex<double> k;      // linear-term strength
    double B1 = 0.0;
    double B2 = 0.0;
    double B3 = 0.0;
};

// Forward map. Throws std::domain_error("degenerate exponential scaling")
// when b2 == 0 (the scaling frequency vanishes and the map is singular).
GsweParams to_gswe(const BasicEquation& eq);

// Inverse map. Requires omega and k purely imaginary (tolerance 1e-12 on the
// real parts, relative to magnitude) so the reconstructed coefficients are
// real; otherwise throws std::domain_error("complex basic equation
// unsupported"). A vanishing omega throws "degenerate exponential scaling".
BasicEquation from_gswe(const GsweParams& g);

// Degree n >= 0 at which the equation admits polynomial solutions, i.e. the
// nonnegative integer with -c1/b2 within absolute tolerance 1e-9 of an
// integer. Returns std::nullopt when b2 == 0 or the ratio is not a
// nonnegative integer.
std::optional<int> qes_degree(const BasicEquation& eq);

// Value c0 must take for S = prod (t - roots[i]) to solve the equation:
// n(n-1) + b2 * sum(roots) + n*b1 with n = roots.size().
double c0_from_roots(const BasicEquation& eq, const std::vector<double>& roots);

}  // namespace qes
