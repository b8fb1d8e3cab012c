#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qes/bethe.hpp"
#include "qes/verifier.hpp"

namespace qes {

// One sweep axis: `key` is a model parameter name, "ell" or "n" (the latter
// two are rounded to integers); `steps` evenly spaced values from lo to hi
// inclusive (steps == 1 pins the value at lo).
struct ScanAxis {
    std::string key;
    double lo = 0.0;
    double hi = 0.0;
    int steps = 1;
};

// "k=lo:hi:steps" / "k=v"; throw std::invalid_argument on malformed text.
ScanAxis parse_scan_axis(const std::string& text);
std::pair<std::string, double> parse_param(const std::string& text);

struct JobConfig {
    std::string command;  // solve | verify | scan | oracle-compare
    std::string model;
    int ell = 0;
    int n = 0;
    std::string free;  // released parameter; empty = model default
    std::map<std::string, double> params;
    std::vector<ScanAxis> scan;  // in flag order; first axis slowest
    std::string out;             // output path; empty = stdout
    std::string format = "json";
    std::uint64_t seed = 0;
    std::string verify = "all";  // bae | oracle | fd | all
    std::string in;              // stored records for `verify`
    int workers = 1;             // scan concurrency
    bool timings = false;        // fill wall_time_ms
    SolverConfig solver;         // numeric overrides (seed comes from `seed`)
    std::optional<RadialGrid> grid;  // verifier grid override
};

// Single JSON document mirroring JobConfig (flat keys as above, "params" an
// object, "scan" an array of "k=lo:hi:steps" strings, "solver"/"grid"
// objects). Unknown keys are rejected.
JobConfig config_from_json(const std::string& text);

// Executes the configured command, writing result files/streams to `out`
// (unless cfg.out names a file) and diagnostics to `err`.
// Exit status: 0 success, 1 config error, 2 verification mismatch,
// 3 internal error.
int run(const JobConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace qes
