#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qes {

// One solved (or attempted) level. Optional fields are serialized as JSON
// null / empty CSV cells when the corresponding verification did not run.
struct ResultRecord {
    long long grid_index = 0;
    std::string status = "ok";  // "ok" | "unsolved"
    std::string reason;         // failure diagnostic when status != "ok"
    std::string model;          // kind token
    int ell = 0;
    int n = 0;
    std::string free_name;
    std::optional<double> free_value;
    std::map<std::string, double> params;  // fixed parameters, sorted by name
    std::optional<double> energy;
    std::vector<double> roots;  // ascending
    std::optional<double> c0;
    std::optional<double> bae_residual_norm;
    std::optional<double> oracle_c0_dev;
    std::optional<double> fd_energy_dev;
    std::optional<int> node_count;
    std::optional<double> wall_time_ms;

    bool operator==(const ResultRecord&) const = default;
};

// Shortest 17-significant-digit decimal form ("%.17g").
std::string format_double(double x);

// Canonical serialization: array with one record object per line, keys in
// the declaration order above, floats via format_double. Byte-stable for
// equal inputs.
std::string to_json(const std::vector<ResultRecord>& records);
std::vector<ResultRecord> records_from_json(const std::string& text);

// Same column order as the JSON keys; params and roots cells are
// semicolon-joined ("a=1;g=20"), missing values are empty cells.
std::string to_csv(const std::vector<ResultRecord>& records);
std::vector<ResultRecord> records_from_csv(const std::string& text);

}  // namespace qes
