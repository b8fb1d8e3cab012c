#include "qes/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <lapacke.h>

namespace qes {

std::function<double(double)> effective_potential(const ModelSpec& m) {
    validate(m);
    const double cent = 0.5 * m.ell * (m.ell + 1.0);
    switch (m.kind) {
        case ModelKind::Anharmonic: {
            const double omega = m.param("omega");
            const double e = m.param("e");
            const double d = m.param("d");
            return [=](double r) {
                if (r <= 0.0) throw std::domain_error("radius must be > 0");
                const double r2 = r * r;
                return cent / r2 + 0.5 * omega * omega * r2 + e / (r2 * r2) +
                       d / (r2 * r2 * r2);
            };
        }
        case ModelKind::Isotonic: {
            const double omega = m.param("omega");
            const double g = m.param("g");
            const double a2 = m.param("a") * m.param("a");
            return [=](double r) {
                if (r <= 0.0) throw std::domain_error("radius must be > 0");
                const double r2 = r * r;
                const double den = r2 + a2;
                return cent / r2 + 0.5 * omega * omega * r2 +
                       g * (r2 - a2) / (den * den);
            };
        }
        case ModelKind::SoftCoreCoulomb: {
            const double G = m.param("G");
            const double Z = m.param("Z");
            const double beta = m.param("beta");
            return [=](double r) {
                if (r <= 0.0) throw std::domain_error("radius must be > 0");
                return cent / (r * r) + G / r - Z / (r + beta);
            };
        }
        case ModelKind::NonPolynomial: {
            const double omega = m.param("omega");
            const double lambda = m.param("lambda");
            const double delta = m.param("delta");
            return [=](double r) {
                if (r <= 0.0) throw std::domain_error("radius must be > 0");
                const double r2 = r * r;
                return cent / r2 + 0.5 * omega * omega * r2 +
                       lambda * r2 / (1.0 + delta * r2);
            };
        }
    }
    throw std::invalid_argument("unknown model kind");
}

int count_nodes(const std::vector<double>& u) {
    double mx = 0.0;
    for (double v : u) mx = std::max(mx, std::abs(v));
    const double floor_ = 1e-10 * mx;
    int last = 0, changes = 0;
    for (double v : u) {
        if (std::abs(v) <= floor_) continue;
        const int s = v > 0.0 ? 1 : -1;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

std::vector<FdLevel> fd_spectrum(const ModelSpec& m, const RadialGrid& grid,
                                 int count) {
    const int n = grid.num_points;
    if (n < 200) throw std::invalid_argument("grid needs at least 200 interior points");
    if (!(grid.r_max > grid.r_min) || !(grid.r_min > 0.0))
        throw std::invalid_argument("grid needs 0 < r_min < r_max");
    if (count < 1 || count > n)
        throw std::invalid_argument("eigenpair count out of range");

    const double h = grid.h();
    const double inv_h2 = 1.0 / (h * h);
    auto V = effective_potential(m);
    std::vector<double> diag(n), off(n - 1, -0.5 * inv_h2);
    for (int i = 0; i < n; ++i) diag[i] = inv_h2 + V(grid.node(i));

    std::vector<double> w(n), z(static_cast<std::size_t>(n) * count);
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(count));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dstevr(
        LAPACK_COL_MAJOR, 'V', 'I', n, diag.data(), off.data(),
        /*vl=*/0.0, /*vu=*/0.0, /*il=*/1, /*iu=*/count, /*abstol=*/0.0, &found,
        w.data(), z.data(), /*ldz=*/n, isuppz.data());
    if (info != 0)
        throw std::runtime_error("tridiagonal eigensolver failed, info " +
                                 std::to_string(info));
    if (found < count)
        throw std::runtime_error("tridiagonal eigensolver returned too few levels");

    std::vector<FdLevel> out(count);
    const double scale = 1.0 / std::sqrt(h);  // unit trapezoid norm
    for (int j = 0; j < count; ++j) {
        out[j].energy = w[j];
        out[j].u.resize(n);
        for (int i = 0; i < n; ++i) out[j].u[i] = scale * z[j * n + i];
        out[j].nodes = count_nodes(out[j].u);
    }
    return out;
}

RadialGrid default_grid(const ModelSpec& m, double energy_hint) {
    validate(m);
    const double E = std::abs(energy_hint);
    RadialGrid grid;
    switch (m.kind) {
        case ModelKind::Anharmonic: {
            const double omega = m.param("omega");
            const double sq2d = std::sqrt(2.0 * m.param("d"));
            grid.r_max = std::max(std::sqrt(76.0 / omega),
                                  std::sqrt(2.0 * (E + 10.0)) / omega);
            // inner wall deep in the forbidden core: the damping factor
            // exp(-sqrt(2d)/(2 r^2)) below 1e-14 and V_eff well above E
            grid.r_min = std::min(std::sqrt(sq2d / 68.0), 0.2 * grid.r_max);
            auto V = effective_potential(m);
            for (int guard = 0; guard < 200 && V(grid.r_min) <= E + 1e3; ++guard)
                grid.r_min *= 0.8;
            break;
        }
        case ModelKind::Isotonic:
        case ModelKind::NonPolynomial: {
            const double omega = m.param("omega");
            // the reduced wave grows linearly from the origin when ell = 0,
            // and a Dirichlet wall at r_min biases the level by
            // u'(0)^2 r_min / 2 (sharply peaked states reach u'(0)^2 ~ 1e3)
            // -- keep the wall essentially at zero
            grid.r_min = 1e-9;
            grid.r_max = std::max(std::sqrt(76.0 / omega),
                                  std::sqrt(2.0 * (E + 10.0)) / omega);
            break;
        }
        case ModelKind::SoftCoreCoulomb: {
            const double c = std::sqrt(2.0 * std::max(E, 1e-4));
            grid.r_min = 1e-9;
            grid.r_max = std::max(40.0, 38.0 / c);
            break;
        }
    }
    grid.num_points = 4000;
    return grid;
}

FdCheck fd_check_level(const QesLevel& level, const RadialGrid& grid) {
    const int k = wavefunction(level).expected_nodes();
    const auto coarse = fd_spectrum(level.model, grid, k + 1);
    const auto fine = fd_spectrum(level.model, grid.refined(), k + 1);
    FdCheck chk;
    chk.level_index = k;
    chk.fd_energy = coarse[k].energy;
    chk.fd_energy_half = fine[k].energy;
    chk.richardson = (4.0 * fine[k].energy - coarse[k].energy) / 3.0;
    chk.deviation = std::abs(chk.richardson - level.energy);
    chk.node_count = coarse[k].nodes;
    return chk;
}

FdCheck fd_check_level(const QesLevel& level) {
    return fd_check_level(level, default_grid(level.model, level.energy));
}

}  // namespace qes
