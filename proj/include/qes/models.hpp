#pragma once

#include <map>
#include <string>
#include <vector>

#include "qes/basic_equation.hpp"
#include "qes/bethe.hpp"

namespace qes {

// The four radial potentials handled by this package:
//   Anharmonic       V(r) = w^2 r^2 / 2 + e / r^4 + d / r^6
//   Isotonic         V(r) = w^2 r^2 / 2 + g (r^2 - a^2) / (r^2 + a^2)^2
//   SoftCoreCoulomb  V(r) = G / r - Z / (r + beta)
//   NonPolynomial    V(r) = w^2 r^2 / 2 + lambda r^2 / (1 + delta r^2)
// in the reduced radial convention -u''/2 + [V + l(l+1)/(2 r^2)] u = E u.
enum class ModelKind { Anharmonic, Isotonic, SoftCoreCoulomb, NonPolynomial };

std::string kind_name(ModelKind k);               // canonical token
ModelKind kind_from_name(const std::string& s);   // accepts aliases

// Parameter names per kind:
//   Anharmonic:      omega, e, d        (all > 0)
//   Isotonic:        omega (>0), g (>=0), a (>0)
//   SoftCoreCoulomb: G, Z, beta         (beta > 0, Z != G)
//   NonPolynomial:   omega (>0), delta (>0), lambda
struct ModelSpec {
    ModelKind kind = ModelKind::Anharmonic;
    int ell = 0;  // >= -1
    std::map<std::string, double> params;

    double param(const std::string& name) const;
    ModelSpec with_param(const std::string& name, double value) const;
};

// Declared parameter names for a kind, in canonical order.
const std::vector<std::string>& param_names(ModelKind k);

// Default released parameter: the one each closed-form treatment solves
// for (Anharmonic: omega; Isotonic: g; SoftCoreCoulomb: Z; NonPolynomial:
// lambda).
std::string default_free(ModelKind k);

// Validates ranges and parameter presence. A parameter named in skip is
// exempt from its range check (it is about to be solved for). Throws
// std::invalid_argument with a field diagnostic.
void validate(const ModelSpec& m, const std::string& skip = "");

// Coefficients of the basic equation for this model at degree n, with the
// spectral condition c1 = -n b2 already imposed (which pins the energy)
// and c0 set to the model-imposed target value. All parameters are taken
// from m as given.
BasicEquation equation_at(const ModelSpec& m, int n);

// One-parameter family releasing `free`, for the joint solve: the returned
// family's equation(p) is equation_at(m with free set to p, n). Includes
// deterministic parameter starts and the parameter's domain guard. Throws
// std::invalid_argument when `free` is not a parameter of the model.
EquationFamily reduce(const ModelSpec& m, int n, const std::string& free);

// Closed-form energy of the n-th QES level for a fully parametrized model:
//   Anharmonic       w (2n + 2 + e / sqrt(2d))
//   Isotonic         w (2n + l + 5/2 - sqrt(4g + 1))
//   SoftCoreCoulomb  -((Z - G) / (n + l + 2))^2 / 2
//   NonPolynomial    lambda / delta + w (2n + l + 7/2)
double energy_of(const ModelSpec& m, int n);

// One solved QES level: the model with the released parameter filled in,
// its roots in the transformed variable, and the resulting energy.
struct QesLevel {
    ModelSpec model;  // free parameter replaced by the solved value
    int n = 0;
    double energy = 0.0;
    BetheSolution bethe;
    std::string free_name;
    double free_value = 0.0;
    double oracle_c0_dev = 0.0;  // |c0 - nearest matrix-restriction level|
};

// All QES levels at degree n found by the joint Newton solve over (roots,
// free parameter), cross-checked against the matrix restriction (levels
// whose c0 misses every matrix eigenvalue by more than 1e-8 are dropped —
// none should be). SoftCoreCoulomb levels need a decaying exponential:
// solutions with (Z - G)/(n + l + 2) <= 0 are rejected. Sorted by
// (free_value, c0).
std::vector<QesLevel> solve_level(const ModelSpec& m, int n,
                                  const std::string& free,
                                  const SolverConfig& cfg = {});

// Reference path, independent of the Newton solver: evaluates the printed
// n = 0 / n = 1 formulas for the default released parameter (quadratic
// root formulas and parameter constraints; the isotonic n = 1 constraint
// is scalar-solved numerically). Returns every real branch; an empty
// result means no real level exists (negative discriminant). Throws
// std::invalid_argument for n > 1.
std::vector<QesLevel> closed_form(const ModelSpec& m, int n,
                                  const SolverConfig& cfg = {});

// Unnormalized radial wavefunction:
//
//   Psi(r) = r^r_power * (r^2 + sq_shift)^sq_exponent
//            * (r + lin_shift)^lin_exponent
//            * exp(-gauss r^2 - inv_square / r^2 - linear_decay r)
//            * prod_i (t(r) - roots_t[i])
//
// with t(r) = t_scale r^2 + t_shift, or t(r) = r when t_is_r.
struct RadialWavefunction {
    ModelKind kind = ModelKind::Anharmonic;
    int ell = 0;
    bool ell_flagged = false;  // ell == -1 accepted but flagged
    double r_power = 0.0;
    double gauss = 0.0;
    double inv_square = 0.0;
    double linear_decay = 0.0;
    double sq_shift = 0.0;
    double sq_exponent = 0.0;
    double lin_shift = 0.0;
    double lin_exponent = 0.0;
    std::vector<double> roots_t;
    bool t_is_r = false;
    double t_scale = 1.0;
    double t_shift = 0.0;

    double t_of_r(double r) const { return t_is_r ? r : t_scale * r * r + t_shift; }
    double eval(double r) const;

    // Nodes on (0, inf): each root with t_i > t_shift (t_i > 0 when t = r)
    // crosses zero at exactly one radius.
    int expected_nodes() const;
};

RadialWavefunction wavefunction(const QesLevel& level);

}  // namespace qes
