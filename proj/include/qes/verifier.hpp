#pragma once

#include <functional>
#include <vector>

#include "qes/models.hpp"

namespace qes {

// Uniform radial grid with Dirichlet walls at r_min and r_max; the interior
// nodes r_i = r_min + (i+1) h, i = 0..num_points-1, carry the unknowns.
struct RadialGrid {
    double r_min = 1e-3;
    double r_max = 40.0;
    int num_points = 4000;  // interior nodes

    double h() const { return (r_max - r_min) / (num_points + 1); }
    double node(int i) const { return r_min + (i + 1) * h(); }
    // same endpoints, half the spacing
    RadialGrid refined() const { return {r_min, r_max, 2 * num_points + 1}; }
};

// V_eff(r) = l(l+1)/(2 r^2) + V(r) for the reduced radial problem
//   -u''/2 + V_eff u = E u.
// Throws std::domain_error for r <= 0.
std::function<double(double)> effective_potential(const ModelSpec& m);

struct FdLevel {
    double energy = 0.0;
    std::vector<double> u;  // eigenvector on the interior nodes, ~unit
                            // trapezoid norm
    int nodes = 0;          // strict interior sign changes
};

// Lowest `count` Dirichlet eigenpairs of the second-order central-difference
// discretization on the grid, ascending.
std::vector<FdLevel> fd_spectrum(const ModelSpec& m, const RadialGrid& grid,
                                 int count);

// Sign changes of u ignoring entries below 1e-10 * max|u|.
int count_nodes(const std::vector<double>& u);

// Heuristic box for a state near |E| = |energy_hint|: walls pushed to where
// the asymptotic damping factors reach ~1e-16, and (for the 1/r^6 core)
// r_min pulled off zero to where the inner damping factor is ~1e-15.
RadialGrid default_grid(const ModelSpec& m, double energy_hint);

struct FdCheck {
    int level_index = 0;      // = expected node count of the solved level
    double fd_energy = 0.0;   // grid spacing h
    double fd_energy_half = 0.0;
    double richardson = 0.0;  // (4 E_{h/2} - E_h) / 3
    double deviation = 0.0;   // |richardson - level.energy|
    int node_count = 0;       // nodes of the matched FD eigenvector at h
};

// Compares the level's closed-form energy against the FD eigenvalue of the
// same node count in the same ell channel, with one Richardson step.
FdCheck fd_check_level(const QesLevel& level, const RadialGrid& grid);
FdCheck fd_check_level(const QesLevel& level);  // default_grid

}  // namespace qes
