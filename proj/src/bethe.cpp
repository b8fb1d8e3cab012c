#include "qes/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "qes/oracle.hpp"
#include "qes/rng.hpp"

namespace qes {

namespace {

// Shared admissibility test: pairwise distinct within scale, and clear of
// the two regular singular points. bae_residual_vec turns a violation into
// an error; the Newton driver uses it (plus bounds) as its step guard.
bool roots_admissible(const BasicEquation& eq, const double* t, int n) {
    double tmax = 0.0;
    for (int i = 0; i < n; ++i) tmax = std::max(tmax, std::abs(t[i]));
    const double dtol = 1e-8 * (1.0 + tmax);
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(t[i])) return false;
        if (std::abs(t[i]) <= 1e-10) return false;
        if (std::abs(t[i] - eq.alpha) <= 1e-10) return false;
        for (int j = i + 1; j < n; ++j)
            if (std::abs(t[i] - t[j]) <= dtol) return false;
    }
    return true;
}

}  // namespace

std::vector<double> bae_residual_vec(const BasicEquation& eq,
                                     const std::vector<double>& roots) {
    const std::size_t n = roots.size();
    if (!roots_admissible(eq, roots.data(), static_cast<int>(n)))
        throw std::domain_error("singular configuration");
    std::vector<double> f(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double ti = roots[i];
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            s += 2.0 / (ti - roots[j]);
        }
        const double num = eq.b2 * ti * ti + eq.b1 * ti + eq.b0;
        const double den = ti * (ti - eq.alpha);
        f[i] = s + num / den;
    }
    return f;
}

namespace {

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Analytic Jacobian of the coupling system in the roots.
Eigen::MatrixXd bae_jacobian(const BasicEquation& eq,
                             const std::vector<double>& roots) {
    const int n = static_cast<int>(roots.size());
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double ti = roots[i];
        double diag = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = ti - roots[j];
            J(i, j) = 2.0 / (d * d);
            diag -= 2.0 / (d * d);
        }
        const double num = eq.b2 * ti * ti + eq.b1 * ti + eq.b0;
        const double dnum = 2.0 * eq.b2 * ti + eq.b1;
        const double den = ti * (ti - eq.alpha);
        const double dden = 2.0 * ti - eq.alpha;
        diag += (dnum * den - num * dden) / (den * den);
        J(i, i) = diag;
    }
    return J;
}

struct NewtonOutcome {
    bool ok = false;
    Eigen::VectorXd x;
    double fnorm = 0.0;
};

// Damped Newton with backtracking line search and a domain guard. Stops when
// the max-norm of the residual drops below stop_tol or the line search can
// no longer make progress, then applies up to two full polishing steps. The
// caller decides with its own acceptance threshold whether the returned
// point counts as solved: near a singular point of the equation the residual
// evaluation has a noise floor that can sit above stop_tol, and bailing out
// there would discard genuinely converged roots.
NewtonOutcome damped_newton(
    const std::function<bool(const Eigen::VectorXd&)>& valid,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& F,
    const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& J,
    Eigen::VectorXd x, const SolverConfig& cfg, double stop_tol) {
    NewtonOutcome out;
    if (!valid(x)) return out;
    Eigen::VectorXd fx = F(x);
    if (!fx.allFinite()) return out;
    double fn = fx.lpNorm<Eigen::Infinity>();

    for (int iter = 0; iter < cfg.max_newton_iters && fn > stop_tol; ++iter) {
        const Eigen::MatrixXd jac = J(x);
        if (!jac.allFinite()) break;
        const Eigen::VectorXd dx = jac.partialPivLu().solve(-fx);
        if (!dx.allFinite()) break;

        double lambda = cfg.damping;
        bool accepted = false;
        for (int h = 0; h < 40; ++h, lambda *= 0.5) {
            const Eigen::VectorXd xt = x + lambda * dx;
            if (!valid(xt)) continue;
            const Eigen::VectorXd ft = F(xt);
            if (!ft.allFinite()) continue;
            const double fnt = ft.lpNorm<Eigen::Infinity>();
            if (fnt < fn || fnt <= stop_tol) {
                x = xt;
                fx = ft;
                fn = fnt;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;  // stalled at the local noise floor
    }

    // Two full-step polish iterations to squeeze out the last digits.
    for (int polish = 0; polish < 2; ++polish) {
        const Eigen::MatrixXd jac = J(x);
        if (!jac.allFinite()) break;
        const Eigen::VectorXd dx = jac.partialPivLu().solve(-fx);
        if (!dx.allFinite()) break;
        const Eigen::VectorXd xt = x + dx;
        if (!valid(xt)) break;
        const Eigen::VectorXd ft = F(xt);
        if (!ft.allFinite()) break;
        const double fnt = ft.lpNorm<Eigen::Infinity>();
        if (fnt >= fn) break;
        x = xt;
        fx = ft;
        fn = fnt;
    }

    out.ok = true;
    out.x = std::move(x);
    out.fnorm = fn;
    return out;
}

// Deterministic multi-start pool: Chebyshev nodes over an interval sized by
// the coefficients, shuffled and cut into n-point starts, preceded by warm
// starts read off the matrix restriction when its roots are real.
std::vector<std::vector<double>> build_starts(const BasicEquation& eq, int n,
                                              const SolverConfig& cfg) {
    std::vector<std::vector<double>> starts;

    try {
        for (const OracleLevel& lvl : oracle_solutions(eq, n)) {
            if (lvl.roots.empty() && n > 0) continue;  // degenerate level
            std::vector<double> r;
            for (const std::complex<double>& z : lvl.roots) {
                if (std::abs(z.imag()) <= 1e-8 * (1.0 + std::abs(z.real())))
                    r.push_back(z.real());
            }
            if (static_cast<int>(r.size()) == n) {
                std::sort(r.begin(), r.end());
                starts.push_back(std::move(r));
            }
        }
    } catch (const std::exception&) {
        // Matrix route unavailable (e.g. defective restriction): fall back
        // to the random pool alone.
    }

    const double lo = std::min(0.0, eq.alpha) - 1.0;
    const double hi = std::max(0.0, eq.alpha) + static_cast<double>(n) +
                      (eq.b2 != 0.0 ? std::abs(eq.b1 / eq.b2) : 0.0) + 1.0;
    const int pool_size = std::max(cfg.num_starts * n, 64);
    std::vector<double> pool(pool_size);
    for (int m = 0; m < pool_size; ++m) {
        const double theta =
            M_PI * (2.0 * m + 1.0) / (2.0 * static_cast<double>(pool_size));
        pool[m] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos(theta);
    }
    Rng rng(cfg.seed);
    rng.shuffle(pool);
    for (int s = 0; s + 1 <= cfg.num_starts; ++s) {
        std::vector<double> r(pool.begin() + s * n, pool.begin() + (s + 1) * n);
        std::sort(r.begin(), r.end());
        starts.push_back(std::move(r));
    }
    return starts;
}

bool roots_valid(const BasicEquation& eq, const double* t, int n) {
    for (int i = 0; i < n; ++i)
        if (!std::isfinite(t[i]) || std::abs(t[i]) > 1e8) return false;
    return roots_admissible(eq, t, n);
}

std::vector<double> to_sorted_vec(const Eigen::VectorXd& x, int n) {
    std::vector<double> r(x.data(), x.data() + n);
    std::sort(r.begin(), r.end());
    return r;
}

bool same_roots(const std::vector<double>& a, const std::vector<double>& b,
                double extra_scale = 0.0) {
    if (a.size() != b.size()) return false;
    const double scale = 1.0 + std::max(max_abs(a), max_abs(b)) + extra_scale;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > 1e-7 * scale) return false;
    return true;
}

}  // namespace

std::vector<BetheSolution> solve_bae(const BasicEquation& eq, int n,
                                     const SolverConfig& cfg) {
    if (n < 0) throw std::invalid_argument("negative degree");
    if (n == 0) {
        if (std::abs(eq.c1) > 1e-9 * (1.0 + std::abs(eq.b2)))
            throw std::domain_error("not QES at this degree");
        return {BetheSolution{{}, 0.0, 0.0}};
    }
    const std::optional<int> deg = qes_degree(eq);
    if (!deg || *deg != n) throw std::domain_error("not QES at this degree");

    const double fscale =
        1.0 + std::abs(eq.b2) + std::abs(eq.b1) + std::abs(eq.b0);
    const double stop_tol = cfg.newton_tol * fscale;
    const double accept_tol = 1e-10;

    const auto valid = [&](const Eigen::VectorXd& x) {
        return roots_valid(eq, x.data(), n);
    };
    const auto F = [&](const Eigen::VectorXd& x) {
        const std::vector<double> r(x.data(), x.data() + n);
        const std::vector<double> f = bae_residual_vec(eq, r);
        return Eigen::Map<const Eigen::VectorXd>(f.data(), n).eval();
    };
    const auto J = [&](const Eigen::VectorXd& x) {
        const std::vector<double> r(x.data(), x.data() + n);
        return bae_jacobian(eq, r);
    };

    std::vector<BetheSolution> found;
    for (const std::vector<double>& start : build_starts(eq, n, cfg)) {
        Eigen::VectorXd x0 =
            Eigen::Map<const Eigen::VectorXd>(start.data(), n);
        const NewtonOutcome res = damped_newton(valid, F, J, x0, cfg, stop_tol);
        if (!res.ok || res.fnorm > accept_tol) continue;

        BetheSolution sol;
        sol.roots = to_sorted_vec(res.x, n);
        sol.c0 = c0_from_roots(eq, sol.roots);
        sol.residual_norm = res.fnorm;
        sol.distinct_ok = roots_admissible(eq, sol.roots.data(), n);
        if (!sol.distinct_ok) continue;

        bool merged = false;
        for (BetheSolution& prev : found) {
            if (same_roots(prev.roots, sol.roots)) {
                if (sol.residual_norm < prev.residual_norm) prev = sol;
                merged = true;
                break;
            }
        }
        if (!merged) found.push_back(std::move(sol));
    }

    std::sort(found.begin(), found.end(),
              [](const BetheSolution& a, const BetheSolution& b) {
                  if (a.c0 != b.c0) return a.c0 < b.c0;
                  return a.roots < b.roots;
              });
    return found;
}

std::vector<JointSolution> solve_joint(const EquationFamily& fam,
                                       const SolverConfig& cfg) {
    const int n = fam.n;
    if (n < 0) throw std::invalid_argument("negative degree");
    if (fam.p_starts.empty())
        throw std::invalid_argument("no parameter starts");

    // Every member of the family must sit at the same polynomial degree.
    for (double p : fam.p_starts) {
        const BasicEquation eq = fam.equation(p);
        const bool ok =
            n == 0 ? std::abs(eq.c1) <= 1e-9 * (1.0 + std::abs(eq.b2))
                   : (qes_degree(eq) && *qes_degree(eq) == n);
        if (!ok) throw std::domain_error("inconsistent QES family");
    }

    const BasicEquation eq0 = fam.equation(fam.p_starts.front());
    const double fscale = 1.0 + std::abs(eq0.b2) + std::abs(eq0.b1) +
                          std::abs(eq0.b0) + std::abs(eq0.c0);
    const double stop_tol = cfg.newton_tol * fscale;
    const double accept_tol = 1e-10;

    const auto p_ok = [&](double p) {
        if (!std::isfinite(p) || std::abs(p) > 1e8) return false;
        return fam.p_valid ? fam.p_valid(p) : true;
    };
    const auto valid = [&](const Eigen::VectorXd& x) {
        const double p = x(n);
        if (!p_ok(p)) return false;
        try {
            const BasicEquation eq = fam.equation(p);
            return roots_valid(eq, x.data(), n);
        } catch (const std::exception&) {
            return false;
        }
    };
    const auto F_at = [&](const std::vector<double>& roots, double p) {
        const BasicEquation eq = fam.equation(p);
        Eigen::VectorXd f(n + 1);
        const std::vector<double> bae = bae_residual_vec(eq, roots);
        for (int i = 0; i < n; ++i) f(i) = bae[i];
        f(n) = c0_from_roots(eq, roots) - eq.c0;
        return f;
    };
    const auto F = [&](const Eigen::VectorXd& x) {
        const std::vector<double> roots(x.data(), x.data() + n);
        return F_at(roots, x(n));
    };
    const auto J = [&](const Eigen::VectorXd& x) {
        const std::vector<double> roots(x.data(), x.data() + n);
        const double p = x(n);
        const BasicEquation eq = fam.equation(p);
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n + 1, n + 1);
        jac.topLeftCorner(n, n) = bae_jacobian(eq, roots);
        for (int i = 0; i < n; ++i) jac(n, i) = eq.b2;  // d c0 / d t_i
        const double h = 1e-6 * (1.0 + std::abs(p));
        try {
            const Eigen::VectorXd fp = F_at(roots, p + h);
            const Eigen::VectorXd fm = F_at(roots, p - h);
            jac.col(n) = (fp - fm) / (2.0 * h);
        } catch (const std::exception&) {
            // A perturbed family member fell outside the valid parameter
            // range or moved a singular point onto a root; poison the column
            // so this start is abandoned.
            jac.col(n).setConstant(std::numeric_limits<double>::quiet_NaN());
        }
        return jac;
    };

    // Start list: for each parameter guess, warm starts from the matrix
    // restriction plus a slice of the random pool.
    std::vector<Eigen::VectorXd> starts;
    const int per_p = std::max(
        1, cfg.num_starts / static_cast<int>(fam.p_starts.size()));
    for (double p0 : fam.p_starts) {
        if (!p_ok(p0)) continue;
        const BasicEquation eq = fam.equation(p0);
        if (n == 0) {
            Eigen::VectorXd x(1);
            x(0) = p0;
            starts.push_back(x);
            continue;
        }
        SolverConfig sub = cfg;
        sub.num_starts = per_p;
        for (const std::vector<double>& r : build_starts(eq, n, sub)) {
            Eigen::VectorXd x(n + 1);
            for (int i = 0; i < n; ++i) x(i) = r[i];
            x(n) = p0;
            starts.push_back(std::move(x));
        }
    }

    std::vector<JointSolution> found;
    for (const Eigen::VectorXd& x0 : starts) {
        const NewtonOutcome res = damped_newton(valid, F, J, x0, cfg, stop_tol);
        if (!res.ok || res.fnorm > accept_tol) continue;

        JointSolution sol;
        sol.p = res.x(n);
        sol.roots = to_sorted_vec(res.x, n);
        sol.c0 = fam.equation(sol.p).c0;
        sol.residual_norm = res.fnorm;

        bool merged = false;
        for (JointSolution& prev : found) {
            if (std::abs(prev.p - sol.p) <=
                    1e-7 * (1.0 + std::abs(prev.p) + std::abs(sol.p)) &&
                same_roots(prev.roots, sol.roots, std::abs(sol.p))) {
                if (sol.residual_norm < prev.residual_norm) prev = sol;
                merged = true;
                break;
            }
        }
        if (!merged) found.push_back(std::move(sol));
    }

    std::sort(found.begin(), found.end(),
              [](const JointSolution& a, const JointSolution& b) {
                  if (a.p != b.p) return a.p < b.p;
                  if (a.c0 != b.c0) return a.c0 < b.c0;
                  return a.roots < b.roots;
              });
    return found;
}

}  // namespace qes
