#include "qes/models.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "qes/oracle.hpp"

namespace qes {

namespace {

const std::vector<std::string> kAnhNames = {"omega", "e", "d"};
const std::vector<std::string> kIsoNames = {"omega", "g", "a"};
const std::vector<std::string> kSoftNames = {"G", "Z", "beta"};
const std::vector<std::string> kNonPolyNames = {"omega", "delta", "lambda"};

[[noreturn]] void bad(const std::string& msg) { throw std::invalid_argument(msg); }

double sq(double x) { return x * x; }

bool has_name(const std::vector<std::string>& names, const std::string& s) {
    return std::find(names.begin(), names.end(), s) != names.end();
}

}  // namespace

std::string kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::Anharmonic: return "anharmonic";
        case ModelKind::Isotonic: return "isotonic";
        case ModelKind::SoftCoreCoulomb: return "softcore";
        case ModelKind::NonPolynomial: return "nonpoly";
    }
    bad("unknown model kind");
}

ModelKind kind_from_name(const std::string& s) {
    if (s == "anharmonic") return ModelKind::Anharmonic;
    if (s == "isotonic") return ModelKind::Isotonic;
    if (s == "softcore" || s == "soft-core" || s == "softcorecoulomb")
        return ModelKind::SoftCoreCoulomb;
    if (s == "nonpoly" || s == "nonpolynomial" || s == "non-polynomial")
        return ModelKind::NonPolynomial;
    bad("unknown model '" + s + "' (expected anharmonic, isotonic, softcore or nonpoly)");
}

const std::vector<std::string>& param_names(ModelKind k) {
    switch (k) {
        case ModelKind::Anharmonic: return kAnhNames;
        case ModelKind::Isotonic: return kIsoNames;
        case ModelKind::SoftCoreCoulomb: return kSoftNames;
        case ModelKind::NonPolynomial: return kNonPolyNames;
    }
    bad("unknown model kind");
}

std::string default_free(ModelKind k) {
    switch (k) {
        case ModelKind::Anharmonic: return "omega";
        case ModelKind::Isotonic: return "g";
        case ModelKind::SoftCoreCoulomb: return "Z";
        case ModelKind::NonPolynomial: return "lambda";
    }
    bad("unknown model kind");
}

double ModelSpec::param(const std::string& name) const {
    auto it = params.find(name);
    if (it == params.end())
        bad("missing parameter '" + name + "' for model " + kind_name(kind));
    return it->second;
}

ModelSpec ModelSpec::with_param(const std::string& name, double value) const {
    if (!has_name(param_names(kind), name))
        bad("unknown parameter '" + name + "' for model " + kind_name(kind));
    ModelSpec out = *this;
    out.params[name] = value;
    return out;
}

void validate(const ModelSpec& m, const std::string& skip) {
    if (m.ell < -1) bad("ell must be >= -1, got " + std::to_string(m.ell));
    const auto& names = param_names(m.kind);
    for (const auto& kv : m.params) {
        if (!has_name(names, kv.first))
            bad("unknown parameter '" + kv.first + "' for model " + kind_name(m.kind));
        if (!std::isfinite(kv.second))
            bad("parameter '" + kv.first + "' must be finite");
    }
    // every declared parameter must be present, except the one about to be
    // released to the solver
    auto present = [&](const std::string& name) -> bool {
        if (m.params.count(name)) return true;
        if (name == skip) return false;
        bad("missing parameter '" + name + "' for model " + kind_name(m.kind));
    };
    for (const auto& name : names) present(name);
    auto check_positive = [&](const std::string& name) {
        if (name != skip && present(name) && m.param(name) <= 0.0)
            bad("parameter '" + name + "' must be > 0 for model " + kind_name(m.kind));
    };
    auto check_nonneg = [&](const std::string& name) {
        if (name != skip && present(name) && m.param(name) < 0.0)
            bad("parameter '" + name + "' must be >= 0 for model " + kind_name(m.kind));
    };
    switch (m.kind) {
        case ModelKind::Anharmonic:
            check_positive("omega");
            check_positive("e");
            check_positive("d");
            break;
        case ModelKind::Isotonic:
            check_positive("omega");
            check_nonneg("g");
            check_positive("a");
            break;
        case ModelKind::SoftCoreCoulomb:
            check_positive("beta");
            if (skip != "Z" && skip != "G" && m.param("Z") == m.param("G"))
                bad("softcore requires Z != G");
            break;
        case ModelKind::NonPolynomial:
            check_positive("omega");
            check_positive("delta");
            break;
    }
}

BasicEquation equation_at(const ModelSpec& m, int n) {
    if (n < 0) bad("degree n must be >= 0");
    validate(m);
    const double ell = m.ell;
    BasicEquation eq;
    switch (m.kind) {
        case ModelKind::Anharmonic: {
            // t = r^2; prefactor r^(3/2 + e/sqrt(2d)) exp(-w r^2/2 - sqrt(2d)/(2 r^2))
            const double omega = m.param("omega");
            const double sq2d = std::sqrt(2.0 * m.param("d"));
            const double u = m.param("e") / sq2d;
            eq.alpha = 0.0;
            eq.b2 = -omega;
            eq.b1 = 2.0 + u;
            eq.b0 = sq2d;
            eq.c0 = 0.25 * (2.0 * omega * sq2d + sq(ell + 0.5) - sq(u + 1.0));
            break;
        }
        case ModelKind::Isotonic: {
            // t = w r^2 + w a^2; prefactor r^(l+1) (r^2+a^2)^((1-s)/2) exp(-w r^2/2)
            const double omega = m.param("omega");
            const double A = omega * sq(m.param("a"));
            const double s = std::sqrt(4.0 * m.param("g") + 1.0);
            eq.alpha = A;
            eq.b2 = -1.0;
            eq.b1 = 2.5 - s + ell + A;
            eq.b0 = A * (s - 1.0);
            eq.c0 = -0.5 * m.param("g") + 0.5 * (s - 1.0) * (ell + A + 1.5);
            break;
        }
        case ModelKind::SoftCoreCoulomb: {
            // t = r; prefactor (r+beta) r^(l+1) exp(-c (r+beta)), c = (Z-G)/(n+l+2)
            const double G = m.param("G");
            const double beta = m.param("beta");
            const double c = (m.param("Z") - G) / (n + ell + 2.0);
            eq.alpha = -beta;
            eq.b2 = -2.0 * c;
            eq.b1 = 2.0 * (ell + 2.0 - beta * c);
            eq.b0 = 2.0 * (ell + 1.0) * beta;
            eq.c0 = 2.0 * (beta * (ell + 1.0) * c + beta * G - ell - 1.0);
            break;
        }
        case ModelKind::NonPolynomial: {
            // t = w r^2 + w/delta; prefactor (1+delta r^2) r^(l+1) exp(-w r^2/2)
            const double omega = m.param("omega");
            const double delta = m.param("delta");
            const double A = omega / delta;
            eq.alpha = A;
            eq.b2 = -1.0;
            eq.b1 = A + ell + 3.5;
            eq.b0 = -2.0 * A;
            eq.c0 = -(m.param("lambda") / (2.0 * sq(delta)) + A + ell + 1.5);
            break;
        }
    }
    eq.c1 = -static_cast<double>(n) * eq.b2;
    return eq;
}

double energy_of(const ModelSpec& m, int n) {
    if (n < 0) bad("degree n must be >= 0");
    validate(m);
    const double ell = m.ell;
    switch (m.kind) {
        case ModelKind::Anharmonic: {
            const double u = m.param("e") / std::sqrt(2.0 * m.param("d"));
            return m.param("omega") * (2.0 * n + 2.0 + u);
        }
        case ModelKind::Isotonic: {
            const double s = std::sqrt(4.0 * m.param("g") + 1.0);
            return m.param("omega") * (2.0 * n + ell + 2.5 - s);
        }
        case ModelKind::SoftCoreCoulomb: {
            const double c = (m.param("Z") - m.param("G")) / (n + ell + 2.0);
            return -0.5 * sq(c);
        }
        case ModelKind::NonPolynomial:
            return m.param("lambda") / m.param("delta") +
                   m.param("omega") * (2.0 * n + ell + 3.5);
    }
    bad("unknown model kind");
}

EquationFamily reduce(const ModelSpec& m, int n, const std::string& free) {
    if (n < 0) bad("degree n must be >= 0");
    if (!has_name(param_names(m.kind), free))
        bad("model " + kind_name(m.kind) + " has no parameter '" + free + "'");
    validate(m, free);

    EquationFamily fam;
    fam.n = n;
    fam.free_name = free;
    const ModelSpec base = m;
    fam.equation = [base, free, n](double p) {
        return equation_at(base.with_param(free, p), n);
    };

    if (free == "Z" || free == "G") {
        const double other = base.param(free == "Z" ? "G" : "Z");
        fam.p_valid = [other](double p) {
            return std::isfinite(p) &&
                   std::abs(p - other) > 1e-12 * (1.0 + std::abs(other));
        };
    } else if (free == "lambda") {
        fam.p_valid = [](double p) { return std::isfinite(p); };
    } else {
        // omega, e, d, g, a, beta, delta must stay strictly positive; this
        // also keeps the solver off the trivial g = 0 branch
        fam.p_valid = [](double p) { return std::isfinite(p) && p > 1e-9; };
    }

    std::vector<double> starts;
    const bool have_cur = base.params.count(free) > 0;
    const double cur =
        have_cur ? base.params.at(free) : std::numeric_limits<double>::quiet_NaN();
    if (m.kind == ModelKind::Anharmonic && free == "omega") {
        starts = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
    } else if (m.kind == ModelKind::Isotonic && free == "g") {
        starts = {0.5, 2.0, 8.0, 32.0, 128.0, 512.0};
    } else if (m.kind == ModelKind::SoftCoreCoulomb && (free == "Z" || free == "G")) {
        // seed through the decay rate c = (Z-G)/(n+l+2), both signs
        const double other = base.param(free == "Z" ? "G" : "Z");
        const double span = n + m.ell + 2.0;
        const double sgn = (free == "Z") ? 1.0 : -1.0;
        for (double c : {0.25, 0.5, 1.0, 2.0, -0.25, -0.5, -1.0, -2.0})
            starts.push_back(other + sgn * span * c);
    } else if (m.kind == ModelKind::NonPolynomial && free == "lambda") {
        const double delta = base.param("delta");
        const double lam0 =
            -2.0 * sq(delta) * (base.param("omega") / delta + m.ell + 1.5);
        starts = {4.0 * lam0, 2.0 * lam0, lam0, 0.5 * lam0, 0.0, -lam0};
    } else {
        const double v = (have_cur && fam.p_valid(cur)) ? cur : 1.0;
        starts = {0.25 * v, 0.5 * v, v, 2.0 * v, 4.0 * v};
    }
    if (have_cur && fam.p_valid(cur)) starts.insert(starts.begin(), cur);
    for (double p : starts) {
        if (!fam.p_valid(p)) continue;
        if (std::find(fam.p_starts.begin(), fam.p_starts.end(), p) ==
            fam.p_starts.end())
            fam.p_starts.push_back(p);
    }
    if (fam.p_starts.empty())
        bad("no admissible starting values for parameter '" + free + "'");
    return fam;
}

namespace {

// Smallest distance from c0 to a level of the matrix restriction.
double oracle_dev(const BasicEquation& eq, int n, double c0) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& lvl : oracle_solutions(eq, n))
        best = std::min(best, std::abs(std::complex<double>(c0, 0.0) - lvl.c0));
    return best;
}

bool level_order(const QesLevel& x, const QesLevel& y) {
    if (x.free_value != y.free_value) return x.free_value < y.free_value;
    return x.bethe.c0 < y.bethe.c0;
}

QesLevel finish_level(const ModelSpec& m, const std::string& free, double value,
                      int n, std::vector<double> roots) {
    ModelSpec filled = m.with_param(free, value);
    const BasicEquation eq = equation_at(filled, n);
    std::sort(roots.begin(), roots.end());
    QesLevel lvl;
    lvl.model = std::move(filled);
    lvl.n = n;
    lvl.energy = energy_of(lvl.model, n);
    lvl.bethe.c0 = c0_from_roots(eq, roots);
    double rn = 0.0;
    if (!roots.empty())
        for (double f : bae_residual_vec(eq, roots)) rn = std::max(rn, std::abs(f));
    lvl.bethe.roots = std::move(roots);
    lvl.bethe.residual_norm = rn;
    lvl.bethe.distinct_ok = true;
    lvl.free_name = free;
    lvl.free_value = value;
    lvl.oracle_c0_dev = oracle_dev(eq, n, lvl.bethe.c0);
    return lvl;
}

}  // namespace

std::vector<QesLevel> solve_level(const ModelSpec& m, int n, const std::string& free,
                                  const SolverConfig& cfg) {
    EquationFamily fam = reduce(m, n, free);
    std::vector<QesLevel> out;
    for (const auto& j : solve_joint(fam, cfg)) {
        ModelSpec filled = m.with_param(free, j.p);
        if (m.kind == ModelKind::SoftCoreCoulomb) {
            // only a decaying exponential is normalizable
            const double c =
                (filled.param("Z") - filled.param("G")) / (n + m.ell + 2.0);
            if (!(c > 0.0)) continue;
        }
        const double dev = oracle_dev(fam.equation(j.p), n, j.c0);
        if (!(dev <= 1e-8 * (1.0 + std::abs(j.c0)))) continue;
        QesLevel lvl;
        lvl.model = std::move(filled);
        lvl.n = n;
        lvl.energy = energy_of(lvl.model, n);
        lvl.bethe.roots = j.roots;
        lvl.bethe.c0 = j.c0;
        lvl.bethe.residual_norm = j.residual_norm;
        lvl.bethe.distinct_ok = true;
        lvl.free_name = free;
        lvl.free_value = j.p;
        lvl.oracle_c0_dev = dev;
        out.push_back(std::move(lvl));
    }
    std::sort(out.begin(), out.end(), level_order);
    return out;
}

std::vector<QesLevel> closed_form(const ModelSpec& m, int n, const SolverConfig&) {
    if (n < 0 || n > 1) bad("closed_form covers n = 0 and n = 1 only");
    const std::string free = default_free(m.kind);
    validate(m, free);
    const double ell = m.ell;
    std::vector<QesLevel> out;

    switch (m.kind) {
        case ModelKind::Anharmonic: {
            const double sq2d = std::sqrt(2.0 * m.param("d"));
            const double u = m.param("e") / sq2d;
            const double L = sq(ell + 0.5);
            if (n == 0) {
                // 2 w sqrt(2d) = (u+1)^2 - (l+1/2)^2
                const double omega = (sq(u + 1.0) - L) / (2.0 * sq2d);
                if (omega > 0.0) out.push_back(finish_level(m, free, omega, n, {}));
            } else {
                // with x = 2 w sqrt(2d) and P = u^2+4u+5-(l+1/2)^2:
                //   x^2 - (2P+8) x + P^2 - 4(2+u)^2 = 0,
                //   t1 = (P' - x)/(4w),  P' = (u+3)^2 - (l+1/2)^2
                const double P = u * u + 4.0 * u + 5.0 - L;
                const double Pp = sq(u + 3.0) - L;
                const double disc =
                    sq(2.0 * P + 8.0) - 4.0 * (P * P - 4.0 * sq(2.0 + u));
                if (disc >= 0.0) {
                    for (double sgn : {-1.0, 1.0}) {
                        const double x = 0.5 * (2.0 * P + 8.0 + sgn * std::sqrt(disc));
                        if (!(x > 0.0)) continue;
                        const double omega = x / (2.0 * sq2d);
                        const double t1 = (Pp - x) / (4.0 * omega);
                        out.push_back(finish_level(m, free, omega, n, {t1}));
                    }
                }
            }
            break;
        }
        case ModelKind::Isotonic: {
            const double A = m.param("omega") * sq(m.param("a"));
            if (n == 0) {
                const double g = 2.0 * (ell + 1.0 + A) * (2.0 * ell + 3.0 + 2.0 * A);
                if (g >= 0.0) out.push_back(finish_level(m, free, g, n, {}));
            } else {
                // the coupling solves, with s = sqrt(4g+1),
                //   g + 2(l+A+2) - (5/2+l+A) s = +-sqrt((5/2+l-s)^2 + A(2l+A+1+2s));
                // scan both branches and bisect each bracket
                auto cons = [&](double g, double sgn) {
                    const double s = std::sqrt(4.0 * g + 1.0);
                    const double rad =
                        sq(2.5 + ell - s) + A * (2.0 * ell + A + 1.0 + 2.0 * s);
                    return g + 2.0 * (ell + A + 2.0) - (2.5 + ell + A) * s -
                           sgn * std::sqrt(std::max(rad, 0.0));
                };
                const double g_lo = 1e-6;
                const double g_hi =
                    8.0 * (ell + 2.0 + A) * (2.0 * ell + 5.0 + 2.0 * A) + 50.0;
                const int npts = 8000;
                std::vector<double> g_roots;
                for (double sgn : {1.0, -1.0}) {
                    double gp = g_lo, fp = cons(gp, sgn);
                    for (int i = 1; i <= npts; ++i) {
                        const double gc = g_lo + (g_hi - g_lo) * i / npts;
                        const double fc = cons(gc, sgn);
                        if (fp == 0.0) {
                            g_roots.push_back(gp);
                        } else if (fp * fc < 0.0) {
                            double lo = gp, hi = gc, flo = fp;
                            for (int it = 0; it < 200; ++it) {
                                const double mid = 0.5 * (lo + hi);
                                const double fm = cons(mid, sgn);
                                if (fm == 0.0) {
                                    lo = hi = mid;
                                    break;
                                }
                                if (flo * fm < 0.0) {
                                    hi = mid;
                                } else {
                                    lo = mid;
                                    flo = fm;
                                }
                                if (hi - lo < 1e-15 * (1.0 + hi)) break;
                            }
                            g_roots.push_back(0.5 * (lo + hi));
                        }
                        gp = gc;
                        fp = fc;
                    }
                }
                std::sort(g_roots.begin(), g_roots.end());
                for (double g : g_roots) {
                    if (!out.empty() &&
                        std::abs(g - out.back().free_value) < 1e-7 * (1.0 + g))
                        continue;
                    const double s = std::sqrt(4.0 * g + 1.0);
                    const double t1 =
                        0.5 * (g + 6.5 + 3.0 * (ell + A) - (ell + A + 3.5) * s);
                    // reject crossings that fail the quadratic root relation
                    const double q =
                        t1 * t1 - (2.5 - s + ell + A) * t1 - A * (s - 1.0);
                    if (std::abs(q) > 1e-6 * (1.0 + t1 * t1)) continue;
                    out.push_back(finish_level(m, free, g, n, {t1}));
                }
            }
            break;
        }
        case ModelKind::SoftCoreCoulomb: {
            const double G = m.param("G");
            const double beta = m.param("beta");
            if (n == 0) {
                if (m.ell == -1) break;  // the closed form divides by l+1
                const double Z = (ell + 2.0) / beta - G / (ell + 1.0);
                if ((Z - G) / (ell + 2.0) > 0.0)
                    out.push_back(finish_level(m, free, Z, n, {}));
            } else {
                // quadratic in the decay rate c = (Z-G)/(l+3), K = 2l+3-beta G:
                //   beta^2 (l+1)(l+2) c^2 + beta [l^2+3l+3 - (2l+3)K] c + K(K-l-2) = 0,
                //   t1 = K/c - beta (l+2)
                const double K = 2.0 * ell + 3.0 - beta * G;
                const double qa = sq(beta) * (ell + 1.0) * (ell + 2.0);
                const double qb =
                    beta * (ell * ell + 3.0 * ell + 3.0 - (2.0 * ell + 3.0) * K);
                const double qc = K * (K - ell - 2.0);
                const double scale = std::abs(qa) + std::abs(qb) + std::abs(qc);
                std::vector<double> cs;
                if (scale == 0.0) {
                    // nothing to solve
                } else if (std::abs(qa) <= 1e-14 * scale) {
                    if (std::abs(qb) > 1e-14 * scale) cs.push_back(-qc / qb);
                } else {
                    const double disc = qb * qb - 4.0 * qa * qc;
                    if (disc >= 0.0) {
                        cs.push_back((-qb - std::sqrt(disc)) / (2.0 * qa));
                        cs.push_back((-qb + std::sqrt(disc)) / (2.0 * qa));
                    }
                }
                for (double c : cs) {
                    if (!(c > 0.0)) continue;  // decaying exponential only
                    const double Z = G + (ell + 3.0) * c;
                    const double t1 = K / c - beta * (ell + 2.0);
                    out.push_back(finish_level(m, free, Z, n, {t1}));
                }
            }
            break;
        }
        case ModelKind::NonPolynomial: {
            const double delta = m.param("delta");
            const double A = m.param("omega") / delta;
            if (n == 0) {
                const double lambda = -2.0 * sq(delta) * (A + ell + 1.5);
                out.push_back(finish_level(m, free, lambda, n, {}));
            } else {
                // t1^2 - (A+l+7/2) t1 + 2A = 0 (real for every A > 0), then
                // lambda/(2 delta^2) = t1 - 2(A+l+5/2)
                const double disc = sq(A + ell + 3.5) - 8.0 * A;
                if (disc >= 0.0) {
                    for (double sgn : {-1.0, 1.0}) {
                        const double t1 =
                            0.5 * (A + ell + 3.5 + sgn * std::sqrt(disc));
                        const double lambda =
                            2.0 * sq(delta) * (t1 - 2.0 * (A + ell + 2.5));
                        out.push_back(finish_level(m, free, lambda, n, {t1}));
                    }
                }
            }
            break;
        }
    }

    std::sort(out.begin(), out.end(), level_order);
    return out;
}

double RadialWavefunction::eval(double r) const {
    double val = std::pow(r, r_power);
    if (sq_exponent != 0.0) val *= std::pow(r * r + sq_shift, sq_exponent);
    if (lin_exponent != 0.0) val *= std::pow(r + lin_shift, lin_exponent);
    double arg = -gauss * r * r - linear_decay * r;
    if (inv_square != 0.0) arg -= inv_square / (r * r);
    val *= std::exp(arg);
    const double t = t_of_r(r);
    for (double root : roots_t) val *= (t - root);
    return val;
}

int RadialWavefunction::expected_nodes() const {
    int k = 0;
    for (double root : roots_t)
        if (root > t_shift) ++k;
    return k;
}

RadialWavefunction wavefunction(const QesLevel& level) {
    const ModelSpec& m = level.model;
    validate(m);
    RadialWavefunction w;
    w.kind = m.kind;
    w.ell = m.ell;
    w.ell_flagged = (m.ell == -1);
    w.roots_t = level.bethe.roots;
    switch (m.kind) {
        case ModelKind::Anharmonic: {
            const double sq2d = std::sqrt(2.0 * m.param("d"));
            w.r_power = 1.5 + m.param("e") / sq2d;
            w.gauss = 0.5 * m.param("omega");
            w.inv_square = 0.5 * sq2d;
            w.t_scale = 1.0;  // t = r^2
            w.t_shift = 0.0;
            break;
        }
        case ModelKind::Isotonic: {
            const double omega = m.param("omega");
            const double a2 = sq(m.param("a"));
            w.r_power = m.ell + 1.0;
            w.gauss = 0.5 * omega;
            w.sq_shift = a2;
            w.sq_exponent = 0.5 * (1.0 - std::sqrt(4.0 * m.param("g") + 1.0));
            w.t_scale = omega;  // t = w r^2 + w a^2
            w.t_shift = omega * a2;
            break;
        }
        case ModelKind::SoftCoreCoulomb: {
            w.r_power = m.ell + 1.0;
            w.linear_decay =
                (m.param("Z") - m.param("G")) / (level.n + m.ell + 2.0);
            w.lin_shift = m.param("beta");
            w.lin_exponent = 1.0;
            w.t_is_r = true;  // t = r
            w.t_scale = 1.0;
            w.t_shift = 0.0;
            break;
        }
        case ModelKind::NonPolynomial: {
            const double omega = m.param("omega");
            const double delta = m.param("delta");
            w.r_power = m.ell + 1.0;
            w.gauss = 0.5 * omega;
            w.sq_shift = 1.0 / delta;
            w.sq_exponent = 1.0;
            w.t_scale = omega;  // t = w r^2 + w/delta
            w.t_shift = omega / delta;
            break;
        }
    }
    return w;
}

}  // namespace qes
