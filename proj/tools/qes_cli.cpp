#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qes/driver.hpp"

namespace {

void add_common(CLI::App* cmd, qes::JobConfig& cli, std::string& config_path,
                std::vector<std::string>& params, std::vector<std::string>& scans) {
    cmd->add_option("--config", config_path,
                    "JSON config file; explicit flags override its fields");
    cmd->add_option("--model", cli.model,
                    "model name: anharmonic, isotonic, softcore, nonpoly");
    cmd->add_option("--ell", cli.ell, "angular momentum quantum number (>= -1)");
    cmd->add_option("--n", cli.n, "polynomial degree of the solution family");
    cmd->add_option("--free", cli.free,
                    "name of the released parameter (default per model)");
    cmd->add_option("--param", params,
                    "model parameter assignment name=value (repeatable)");
    cmd->add_option("--scan", scans, "scan axis key=lo:hi:steps (repeatable)");
    cmd->add_option("--out", cli.out, "output path (default: stdout)");
    cmd->add_option("--format", cli.format, "output format: json or csv");
    cmd->add_option("--seed", cli.seed, "seed for the solver start points");
    cmd->add_option("--verify", cli.verify,
                    "checks to run: bae, oracle, fd or all");
    cmd->add_option("--in", cli.in, "records file to verify");
    cmd->add_option("--workers", cli.workers, "worker threads for scan");
    cmd->add_flag("--timings", cli.timings, "record wall-clock time per record");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasi-exactly-solvable radial model toolkit"};
    app.require_subcommand(1);

    qes::JobConfig cli;
    std::string config_path;
    std::vector<std::string> params, scans;

    CLI::App* solve = app.add_subcommand(
        "solve", "solve one configuration for every admissible level");
    CLI::App* verify =
        app.add_subcommand("verify", "re-check a stored records file");
    CLI::App* scan = app.add_subcommand(
        "scan", "solve a parameter grid, one record per grid cell");
    CLI::App* oc = app.add_subcommand(
        "oracle-compare",
        "compare root-based solutions against the matrix eigenproblem");
    for (CLI::App* cmd : {solve, verify, scan, oc})
        add_common(cmd, cli, config_path, params, scans);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    CLI::App* cmd = app.get_subcommands().front();
    qes::JobConfig cfg;
    if (cmd->count("--config") > 0) {
        std::ifstream f(config_path, std::ios::binary);
        if (!f) {
            std::cerr << "config error: cannot read config file '" << config_path
                      << "'\n";
            return 1;
        }
        std::stringstream ss;
        ss << f.rdbuf();
        try {
            cfg = qes::config_from_json(ss.str());
        } catch (const std::invalid_argument& ex) {
            std::cerr << "config error: " << ex.what() << "\n";
            return 1;
        }
    }
    cfg.command = cmd->get_name();
    try {
        if (cmd->count("--model")) cfg.model = cli.model;
        if (cmd->count("--ell")) cfg.ell = cli.ell;
        if (cmd->count("--n")) cfg.n = cli.n;
        if (cmd->count("--free")) cfg.free = cli.free;
        for (const auto& p : params) {
            const auto kv = qes::parse_param(p);
            cfg.params[kv.first] = kv.second;
        }
        if (cmd->count("--scan")) {
            cfg.scan.clear();
            for (const auto& s : scans) cfg.scan.push_back(qes::parse_scan_axis(s));
        }
        if (cmd->count("--out")) cfg.out = cli.out;
        if (cmd->count("--format")) cfg.format = cli.format;
        if (cmd->count("--seed")) cfg.seed = cli.seed;
        if (cmd->count("--verify")) cfg.verify = cli.verify;
        if (cmd->count("--in")) cfg.in = cli.in;
        if (cmd->count("--workers")) cfg.workers = cli.workers;
        if (cmd->count("--timings")) cfg.timings = cli.timings;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 1;
    }
    return qes::run(cfg, std::cout, std::cerr);
}
