#include "qes/driver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "qes/basic_equation.hpp"
#include "qes/models.hpp"
#include "qes/oracle.hpp"
#include "qes/records.hpp"

namespace qes {

namespace {

[[noreturn]] void config_fail(const std::string& msg) {
    throw std::invalid_argument(msg);
}

double to_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        config_fail("bad number '" + s + "'");
    return v;
}

long to_long(const std::string& s) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        config_fail("bad integer '" + s + "'");
    return v;
}

struct VerifyMode {
    bool bae = false;
    bool oracle = false;
    bool fd = false;
};

VerifyMode parse_verify(const std::string& s) {
    if (s == "bae") return {true, false, false};
    if (s == "oracle") return {false, true, false};
    if (s == "fd") return {false, false, true};
    if (s == "all") return {true, true, true};
    config_fail("unknown --verify mode '" + s + "' (expected bae, oracle, fd or all)");
}

double oracle_c0_gap(const BasicEquation& eq, int n, double c0) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& lvl : oracle_solutions(eq, n))
        best = std::min(best, std::abs(std::complex<double>(c0, 0.0) - lvl.c0));
    return best;
}

ModelSpec make_model(const JobConfig& cfg) {
    if (cfg.model.empty()) config_fail("--model is required");
    ModelSpec m;
    m.kind = kind_from_name(cfg.model);
    m.ell = cfg.ell;
    m.params = cfg.params;
    return m;
}

std::string render(const std::vector<ResultRecord>& recs, const std::string& format) {
    if (format == "json") return to_json(recs);
    if (format == "csv") return to_csv(recs);
    config_fail("unknown --format '" + format + "' (expected json or csv)");
}

void emit_text(const std::string& text, const JobConfig& cfg, std::ostream& out) {
    if (cfg.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output path '" + cfg.out + "'");
    f << text;
    f.flush();
    if (!f) throw std::runtime_error("failed writing '" + cfg.out + "'");
}

// Records carry the deviations of verifications that actually ran: the BAE
// residual and the matrix-level c0 gap are intrinsic to the solve; the FD
// column fills only under --verify fd/all.
ResultRecord record_of(const QesLevel& lvl, const VerifyMode& mode,
                       long long grid_index, const std::optional<RadialGrid>& grid) {
    ResultRecord r;
    r.grid_index = grid_index;
    r.status = "ok";
    r.model = kind_name(lvl.model.kind);
    r.ell = lvl.model.ell;
    r.n = lvl.n;
    r.free_name = lvl.free_name;
    r.free_value = lvl.free_value;
    r.params = lvl.model.params;
    r.params.erase(lvl.free_name);
    r.energy = lvl.energy;
    r.roots = lvl.bethe.roots;
    r.c0 = lvl.bethe.c0;
    r.bae_residual_norm = lvl.bethe.residual_norm;
    r.oracle_c0_dev = lvl.oracle_c0_dev;
    if (mode.fd && lvl.model.ell != -1) {
        try {
            const FdCheck chk =
                grid ? fd_check_level(lvl, *grid) : fd_check_level(lvl);
            r.fd_energy_dev = chk.deviation;
            r.node_count = chk.node_count;
        } catch (const std::exception&) {
            // FD oracle unavailable here; the fields stay explicitly null
        }
    }
    return r;
}

ResultRecord unsolved_record(const ModelSpec& m, int n, const std::string& free,
                             long long grid_index, const std::string& reason) {
    ResultRecord r;
    r.grid_index = grid_index;
    r.status = "unsolved";
    r.reason = reason;
    r.model = kind_name(m.kind);
    r.ell = m.ell;
    r.n = n;
    r.free_name = free;
    r.params = m.params;
    r.params.erase(free);
    return r;
}

double ms_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

int cmd_solve(const JobConfig& cfg, std::ostream& out) {
    const VerifyMode mode = parse_verify(cfg.verify);
    const ModelSpec m = make_model(cfg);
    const std::string free = cfg.free.empty() ? default_free(m.kind) : cfg.free;
    SolverConfig scfg = cfg.solver;
    scfg.seed = cfg.seed;
    const auto t0 = std::chrono::steady_clock::now();
    const auto levels = solve_level(m, cfg.n, free, scfg);
    std::vector<ResultRecord> recs;
    recs.reserve(levels.size());
    for (const auto& lvl : levels)
        recs.push_back(record_of(lvl, mode, 0, cfg.grid));
    if (cfg.timings) {
        const double ms = ms_since(t0);
        for (auto& r : recs) r.wall_time_ms = ms;
    }
    emit_text(render(recs, cfg.format), cfg, out);
    return 0;
}

std::vector<double> axis_values(const ScanAxis& ax) {
    if (ax.steps < 1)
        config_fail("scan axis '" + ax.key + "' needs steps >= 1");
    std::vector<double> v;
    v.reserve(ax.steps);
    if (ax.steps == 1) {
        v.push_back(ax.lo);
        return v;
    }
    for (int i = 0; i < ax.steps; ++i)
        v.push_back(ax.lo + (ax.hi - ax.lo) * i / (ax.steps - 1));
    return v;
}

int cmd_scan(const JobConfig& cfg, std::ostream& out) {
    const VerifyMode mode = parse_verify(cfg.verify);
    if (cfg.scan.empty()) config_fail("scan requires at least one --scan axis");
    const ModelSpec base = make_model(cfg);
    const std::string free =
        cfg.free.empty() ? default_free(base.kind) : cfg.free;

    const auto& names = param_names(base.kind);
    std::vector<std::vector<double>> values;
    std::vector<std::string> keys;
    long long total = 1;
    for (const auto& ax : cfg.scan) {
        const bool integer_axis = (ax.key == "ell" || ax.key == "n");
        if (!integer_axis &&
            std::find(names.begin(), names.end(), ax.key) == names.end())
            config_fail("scan key '" + ax.key + "' is not a parameter of model " +
                        kind_name(base.kind));
        if (ax.key == free)
            config_fail("scan key '" + ax.key + "' is the released parameter");
        if (std::find(keys.begin(), keys.end(), ax.key) != keys.end())
            config_fail("duplicate scan key '" + ax.key + "'");
        keys.push_back(ax.key);
        values.push_back(axis_values(ax));
        total *= static_cast<long long>(values.back().size());
        if (total > 1000000) config_fail("scan grid exceeds 1e6 cells");
    }

    SolverConfig scfg = cfg.solver;
    scfg.seed = cfg.seed;

    std::vector<ResultRecord> recs(total);
    auto run_cell = [&](long long idx) {
        ModelSpec m = base;
        int n_cell = cfg.n;
        long long rem = idx;
        for (int a = static_cast<int>(values.size()) - 1; a >= 0; --a) {
            const long long sz = static_cast<long long>(values[a].size());
            const double val = values[a][rem % sz];
            rem /= sz;
            if (keys[a] == "ell")
                m.ell = static_cast<int>(std::llround(val));
            else if (keys[a] == "n")
                n_cell = static_cast<int>(std::llround(val));
            else
                m.params[keys[a]] = val;
        }
        const auto t0 = std::chrono::steady_clock::now();
        ResultRecord rec;
        try {
            const auto levels = solve_level(m, n_cell, free, scfg);
            if (levels.empty())
                rec = unsolved_record(m, n_cell, free, idx,
                                      "no real level in the searched region");
            else
                rec = record_of(levels.front(), mode, idx, cfg.grid);
        } catch (const std::exception& ex) {
            rec = unsolved_record(m, n_cell, free, idx, ex.what());
        }
        if (cfg.timings) rec.wall_time_ms = ms_since(t0);
        recs[idx] = std::move(rec);
    };

    const int workers = std::clamp(cfg.workers, 1, 64);
    if (workers == 1 || total <= 1) {
        for (long long i = 0; i < total; ++i) run_cell(i);
    } else {
        std::atomic<long long> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const long long i = next.fetch_add(1);
                    if (i >= total) break;
                    run_cell(i);
                }
            });
        for (auto& th : pool) th.join();
    }

    emit_text(render(recs, cfg.format), cfg, out);
    return 0;
}

int cmd_verify(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
    const VerifyMode mode = parse_verify(cfg.verify);
    if (cfg.in.empty()) config_fail("verify requires --in with a records file");
    std::ifstream f(cfg.in, std::ios::binary);
    if (!f) config_fail("cannot read records file '" + cfg.in + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string text = ss.str();
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    const std::vector<ResultRecord> recs =
        (first != std::string::npos && text[first] == '[')
            ? records_from_json(text)
            : records_from_csv(text);

    long long checked = 0, mismatches = 0, skipped = 0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const ResultRecord& r = recs[i];
        if (r.status != "ok") {
            ++skipped;
            continue;
        }
        ++checked;
        auto fail = [&](const std::string& what) {
            err << "record " << i << ": " << what << "\n";
            ++mismatches;
        };
        ModelSpec m;
        try {
            m.kind = kind_from_name(r.model);
            m.ell = r.ell;
            m.params = r.params;
            if (!r.free_name.empty() && r.free_value)
                m.params[r.free_name] = *r.free_value;
            validate(m);
        } catch (const std::exception& ex) {
            fail(std::string("invalid model: ") + ex.what());
            continue;
        }
        try {
            const BasicEquation eq = equation_at(m, r.n);
            if (r.energy) {
                const double want = energy_of(m, r.n);
                if (std::abs(*r.energy - want) > 1e-9 * (1.0 + std::abs(want)))
                    fail("energy mismatch: stored " + format_double(*r.energy) +
                         ", recomputed " + format_double(want));
            }
            if (static_cast<int>(r.roots.size()) != r.n) {
                fail("root count " + std::to_string(r.roots.size()) +
                     " does not equal n = " + std::to_string(r.n));
            } else {
                if (mode.bae && r.n > 0) {
                    double rn = 0.0;
                    for (double v : bae_residual_vec(eq, r.roots))
                        rn = std::max(rn, std::abs(v));
                    if (rn > 1e-8)
                        fail("BAE residual norm " + format_double(rn));
                }
                if (mode.oracle) {
                    const double c0 = r.c0 ? *r.c0 : c0_from_roots(eq, r.roots);
                    const double gap = oracle_c0_gap(eq, r.n, c0);
                    if (gap > 1e-8)
                        fail("matrix-level c0 gap " + format_double(gap));
                }
                if (mode.fd && r.ell != -1 && r.energy) {
                    QesLevel lvl;
                    lvl.model = m;
                    lvl.n = r.n;
                    lvl.energy = *r.energy;
                    lvl.bethe.roots = r.roots;
                    lvl.bethe.c0 = r.c0 ? *r.c0 : c0_from_roots(eq, r.roots);
                    lvl.free_name = r.free_name;
                    lvl.free_value = r.free_value ? *r.free_value : 0.0;
                    const FdCheck chk =
                        cfg.grid ? fd_check_level(lvl, *cfg.grid) : fd_check_level(lvl);
                    const double tol = std::max(1e-4, 1e-4 * std::abs(*r.energy));
                    if (std::abs(chk.fd_energy - *r.energy) > tol)
                        fail("FD energy " + format_double(chk.fd_energy) +
                             " vs stored " + format_double(*r.energy));
                    if (r.node_count && chk.node_count != *r.node_count)
                        fail("node count " + std::to_string(chk.node_count) +
                             " vs stored " + std::to_string(*r.node_count));
                }
            }
        } catch (const std::exception& ex) {
            fail(std::string("verification error: ") + ex.what());
        }
    }
    out << "verified " << checked << " records, " << mismatches
        << " mismatches, " << skipped << " skipped\n";
    return mismatches > 0 ? 2 : 0;
}

std::string complex_str(const std::complex<double>& z) {
    char buf[64];
    if (std::abs(z.imag()) < 1e-12 * (1.0 + std::abs(z.real()))) {
        std::snprintf(buf, sizeof(buf), "%.12g", z.real());
    } else {
        std::snprintf(buf, sizeof(buf), "%.6g%+.6gi", z.real(), z.imag());
    }
    return buf;
}

int cmd_oracle_compare(const JobConfig& cfg, std::ostream& out) {
    const ModelSpec m = make_model(cfg);
    SolverConfig scfg = cfg.solver;
    scfg.seed = cfg.seed;
    const BasicEquation eq = equation_at(m, cfg.n);
    const auto levels = oracle_solutions(eq, cfg.n);
    const auto sols = solve_bae(eq, cfg.n, scfg);

    std::vector<bool> used(sols.size(), false);
    std::string table;
    char line[256];
    std::snprintf(line, sizeof(line), "%-6s %-24s %-8s %-24s %-12s %s\n", "level",
                  "c0_matrix", "kind", "c0_bae", "root_dev", "status");
    table += line;
    int bad = 0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const auto& lvl = levels[i];
        const char* kind =
            lvl.degenerate ? "degen" : (lvl.all_real ? "real" : "complex");
        std::string c0_bae = "-", root_dev = "-", status = "skipped";
        if (!lvl.degenerate && lvl.all_real) {
            int best = -1;
            double best_gap = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < sols.size(); ++j) {
                if (used[j]) continue;
                const double gap = std::abs(sols[j].c0 - lvl.c0.real());
                if (gap < best_gap) {
                    best_gap = gap;
                    best = static_cast<int>(j);
                }
            }
            bool ok = best >= 0 &&
                      best_gap <= 1e-8 * (1.0 + std::abs(lvl.c0.real()));
            double rd = 0.0;
            if (ok) {
                double scale = 1.0;
                for (const auto& z : lvl.roots)
                    scale = std::max(scale, 1.0 + std::abs(z));
                if (sols[best].roots.size() == lvl.roots.size()) {
                    for (std::size_t k = 0; k < lvl.roots.size(); ++k)
                        rd = std::max(rd, std::abs(sols[best].roots[k] -
                                                   lvl.roots[k].real()));
                    ok = rd <= 1e-7 * scale;
                } else {
                    ok = false;
                }
            }
            if (ok) {
                used[best] = true;
                c0_bae = format_double(sols[best].c0);
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.3g", rd);
                root_dev = buf;
                status = "ok";
            } else {
                status = "MISSED";
                ++bad;
            }
        }
        std::snprintf(line, sizeof(line), "%-6zu %-24s %-8s %-24s %-12s %s\n", i,
                      complex_str(lvl.c0).c_str(), kind, c0_bae.c_str(),
                      root_dev.c_str(), status.c_str());
        table += line;
    }
    for (std::size_t j = 0; j < sols.size(); ++j) {
        if (used[j]) continue;
        // a BAE solution must at least sit on a (possibly degenerate) level
        double gap = std::numeric_limits<double>::infinity();
        for (const auto& lvl : levels)
            gap = std::min(gap, std::abs(std::complex<double>(sols[j].c0, 0.0) -
                                         lvl.c0));
        if (gap <= 1e-8 * (1.0 + std::abs(sols[j].c0))) continue;
        std::snprintf(line, sizeof(line), "%-6s %-24s %-8s %-24s %-12s %s\n", "-",
                      "-", "-", format_double(sols[j].c0).c_str(), "-",
                      "EXTRA");
        table += line;
        ++bad;
    }
    std::snprintf(line, sizeof(line),
                  "matrix levels: %zu, bae solutions: %zu, mismatches: %d\n",
                  levels.size(), sols.size(), bad);
    table += line;
    emit_text(table, cfg, out);
    return bad > 0 ? 2 : 0;
}

}  // namespace

ScanAxis parse_scan_axis(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0)
        config_fail("bad scan spec '" + text + "' (want key=lo:hi:steps)");
    ScanAxis ax;
    ax.key = text.substr(0, eq);
    const std::string rest = text.substr(eq + 1);
    const auto c1 = rest.find(':');
    const auto c2 = c1 == std::string::npos ? c1 : rest.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos ||
        rest.find(':', c2 + 1) != std::string::npos)
        config_fail("bad scan spec '" + text + "' (want key=lo:hi:steps)");
    ax.lo = to_double(rest.substr(0, c1));
    ax.hi = to_double(rest.substr(c1 + 1, c2 - c1 - 1));
    const long steps = to_long(rest.substr(c2 + 1));
    if (steps < 1 || steps > 1000000)
        config_fail("scan spec '" + text + "' needs 1 <= steps <= 1e6");
    ax.steps = static_cast<int>(steps);
    return ax;
}

std::pair<std::string, double> parse_param(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0)
        config_fail("bad parameter '" + text + "' (want name=value)");
    return {text.substr(0, eq), to_double(text.substr(eq + 1))};
}

JobConfig config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& ex) {
        config_fail(std::string("bad config JSON: ") + ex.what());
    }
    if (!j.is_object()) config_fail("config must be a JSON object");
    JobConfig cfg;
    try {
        for (const auto& [key, val] : j.items()) {
            if (key == "command") cfg.command = val.get<std::string>();
            else if (key == "model") cfg.model = val.get<std::string>();
            else if (key == "ell") cfg.ell = val.get<int>();
            else if (key == "n") cfg.n = val.get<int>();
            else if (key == "free") cfg.free = val.get<std::string>();
            else if (key == "params") {
                if (!val.is_object()) config_fail("'params' must be an object");
                for (const auto& [k2, v2] : val.items())
                    cfg.params[k2] = v2.get<double>();
            } else if (key == "scan") {
                if (!val.is_array()) config_fail("'scan' must be an array");
                for (const auto& item : val)
                    cfg.scan.push_back(parse_scan_axis(item.get<std::string>()));
            } else if (key == "out") cfg.out = val.get<std::string>();
            else if (key == "format") cfg.format = val.get<std::string>();
            else if (key == "seed") cfg.seed = val.get<std::uint64_t>();
            else if (key == "verify") cfg.verify = val.get<std::string>();
            else if (key == "in") cfg.in = val.get<std::string>();
            else if (key == "workers") cfg.workers = val.get<int>();
            else if (key == "timings") cfg.timings = val.get<bool>();
            else if (key == "solver") {
                if (!val.is_object()) config_fail("'solver' must be an object");
                for (const auto& [k2, v2] : val.items()) {
                    if (k2 == "max_newton_iters")
                        cfg.solver.max_newton_iters = v2.get<int>();
                    else if (k2 == "newton_tol")
                        cfg.solver.newton_tol = v2.get<double>();
                    else if (k2 == "num_starts")
                        cfg.solver.num_starts = v2.get<int>();
                    else if (k2 == "damping")
                        cfg.solver.damping = v2.get<double>();
                    else
                        config_fail("unknown solver key '" + k2 + "'");
                }
            } else if (key == "grid") {
                if (!val.is_object()) config_fail("'grid' must be an object");
                RadialGrid g;
                for (const auto& [k2, v2] : val.items()) {
                    if (k2 == "r_min") g.r_min = v2.get<double>();
                    else if (k2 == "r_max") g.r_max = v2.get<double>();
                    else if (k2 == "num_points") g.num_points = v2.get<int>();
                    else config_fail("unknown grid key '" + k2 + "'");
                }
                cfg.grid = g;
            } else {
                config_fail("unknown config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& ex) {
        config_fail(std::string("bad config value: ") + ex.what());
    }
    return cfg;
}

int run(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.command == "solve") return cmd_solve(cfg, out);
        if (cfg.command == "scan") return cmd_scan(cfg, out);
        if (cfg.command == "verify") return cmd_verify(cfg, out, err);
        if (cfg.command == "oracle-compare") return cmd_oracle_compare(cfg, out);
        config_fail("unknown command '" + cfg.command +
                    "' (expected solve, verify, scan or oracle-compare)");
    } catch (const std::invalid_argument& ex) {
        err << "config error: " << ex.what() << "\n";
        return 1;
    } catch (const std::domain_error& ex) {
        err << "config error: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        err << "internal error: " << ex.what() << "\n";
        return 3;
    }
}

}  // namespace qes
