#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qes/basic_equation.hpp"

namespace qes {

struct SolverConfig {
    int max_newton_iters = 200;
    double newton_tol = 1e-13;   // Newton stopping tolerance (scaled)
    int num_starts = 64;         // random multi-start budget
    double damping = 1.0;        // initial Newton step fraction
    std::uint64_t seed = 0;      // start-pool shuffle seed
};

// Residual of the root-coupling system for S = prod (t - roots[i]):
//
//   F_i = sum_{j != i} 2 / (t_i - t_j)
//         + (b2 t_i^2 + b1 t_i + b0) / (t_i (t_i - alpha)).
//
// All F_i vanish exactly when S solves the basic equation with
// c0 = c0_from_roots(eq, roots). Throws std::domain_error("singular
// configuration") when two roots coincide (within 1e-8 * (1 + max|t|)) or
// a root sits within 1e-10 of a singular point 0 or alpha.
std::vector<double> bae_residual_vec(const BasicEquation& eq,
                                     const std::vector<double>& roots);

struct BetheSolution {
    std::vector<double> roots;    // sorted ascending, pairwise distinct
    double c0 = 0.0;              // eigenvalue reconstructed from the roots
    double residual_norm = 0.0;   // max |F_i| at the solution
    bool distinct_ok = true;      // pairwise-distinct / off-singular check
};

// Every real distinct-root solution of the coupling system at degree n,
// found by damped Newton iteration from a deterministic multi-start pool
// (Chebyshev-node subsets of a coefficient-scaled interval, plus warm
// starts from the matrix restriction). Solutions are deduplicated and
// sorted by (c0, roots); an exhausted start pool yields an empty set, not
// an error. Throws std::domain_error("not QES at this degree") when
// c1 != -n b2 (no degree-n polynomial solutions exist).
std::vector<BetheSolution> solve_bae(const BasicEquation& eq, int n,
                                     const SolverConfig& cfg = {});

// A one-parameter family of basic equations with the eigenvalue target
// baked into each member's c0: solve_joint finds parameter values p and
// root sets that satisfy the coupling system *and* c0_from_roots == c0
// simultaneously (n + 1 unknowns). Every member must satisfy the degree-n
// condition c1 == -n b2; otherwise std::domain_error("inconsistent QES
// family") is thrown.
struct EquationFamily {
    int n = 0;
    std::string free_name;                            // parameter label
    std::function<BasicEquation(double)> equation;    // p -> equation
    std::vector<double> p_starts;                     // initial guesses
    std::function<bool(double)> p_valid;              // domain guard (optional)
};

struct JointSolution {
    double p = 0.0;
    std::vector<double> roots;    // sorted ascending
    double c0 = 0.0;
    double residual_norm = 0.0;   // max over coupling and eigenvalue residuals
};

std::vector<JointSolution> solve_joint(const EquationFamily& fam,
                                       const SolverConfig& cfg = {});

}  // namespace qes
