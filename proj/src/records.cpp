#include "qes/records.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "json.hpp"

namespace qes {

namespace {

const char* const kColumns[] = {
    "grid_index", "status", "reason", "model", "ell", "n", "free_name",
    "free_value", "params", "energy", "roots", "c0", "bae_residual_norm",
    "oracle_c0_dev", "fd_energy_dev", "node_count", "wall_time_ms",
};
constexpr int kNumColumns = sizeof(kColumns) / sizeof(kColumns[0]);

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    return out;
}

void append_opt(std::string& out, const std::optional<double>& v) {
    out += v ? format_double(*v) : "null";
}

std::string params_cell(const std::map<std::string, double>& params) {
    std::string out;
    bool first = true;
    for (const auto& kv : params) {
        if (!first) out += ';';
        first = false;
        out += kv.first;
        out += '=';
        out += format_double(kv.second);
    }
    return out;
}

std::string roots_cell(const std::vector<double>& roots) {
    std::string out;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (i) out += ';';
        out += format_double(roots[i]);
    }
    return out;
}

std::string csv_quote(const std::string& cell) {
    bool need = false;
    for (char ch : cell)
        if (ch == ',' || ch == '"' || ch == '\n' || ch == '\r') need = true;
    if (!need) return cell;
    std::string out = "\"";
    for (char ch : cell) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw std::invalid_argument("bad numeric field '" + s + "'");
    return v;
}

long long parse_int(const std::string& s) {
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw std::invalid_argument("bad integer field '" + s + "'");
    return v;
}

std::map<std::string, double> parse_params_cell(const std::string& cell) {
    std::map<std::string, double> out;
    std::size_t pos = 0;
    while (pos < cell.size()) {
        std::size_t next = cell.find(';', pos);
        if (next == std::string::npos) next = cell.size();
        const std::string item = cell.substr(pos, next - pos);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("bad params cell '" + cell + "'");
        out[item.substr(0, eq)] = parse_double(item.substr(eq + 1));
        pos = next + 1;
    }
    return out;
}

std::vector<double> parse_roots_cell(const std::string& cell) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < cell.size()) {
        std::size_t next = cell.find(';', pos);
        if (next == std::string::npos) next = cell.size();
        out.push_back(parse_double(cell.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

}  // namespace

std::string format_double(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string to_json(const std::vector<ResultRecord>& records) {
    if (records.empty()) return "[]\n";
    std::string out = "[\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const ResultRecord& r = records[i];
        out += "{\"grid_index\":" + std::to_string(r.grid_index);
        out += ",\"status\":\"" + json_escape(r.status) + "\"";
        out += ",\"reason\":\"" + json_escape(r.reason) + "\"";
        out += ",\"model\":\"" + json_escape(r.model) + "\"";
        out += ",\"ell\":" + std::to_string(r.ell);
        out += ",\"n\":" + std::to_string(r.n);
        out += ",\"free_name\":\"" + json_escape(r.free_name) + "\"";
        out += ",\"free_value\":";
        append_opt(out, r.free_value);
        out += ",\"params\":{";
        bool first = true;
        for (const auto& kv : r.params) {
            if (!first) out += ',';
            first = false;
            out += "\"" + json_escape(kv.first) + "\":" + format_double(kv.second);
        }
        out += "},\"energy\":";
        append_opt(out, r.energy);
        out += ",\"roots\":[";
        for (std::size_t k = 0; k < r.roots.size(); ++k) {
            if (k) out += ',';
            out += format_double(r.roots[k]);
        }
        out += "],\"c0\":";
        append_opt(out, r.c0);
        out += ",\"bae_residual_norm\":";
        append_opt(out, r.bae_residual_norm);
        out += ",\"oracle_c0_dev\":";
        append_opt(out, r.oracle_c0_dev);
        out += ",\"fd_energy_dev\":";
        append_opt(out, r.fd_energy_dev);
        out += ",\"node_count\":";
        out += r.node_count ? std::to_string(*r.node_count) : "null";
        out += ",\"wall_time_ms\":";
        append_opt(out, r.wall_time_ms);
        out += "}";
        out += (i + 1 < records.size()) ? ",\n" : "\n";
    }
    out += "]\n";
    return out;
}

std::vector<ResultRecord> records_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& ex) {
        throw std::invalid_argument(std::string("bad JSON: ") + ex.what());
    }
    if (!j.is_array()) throw std::invalid_argument("expected a JSON array of records");
    std::vector<ResultRecord> out;
    out.reserve(j.size());
    for (const auto& item : j) {
        if (!item.is_object())
            throw std::invalid_argument("expected record objects in the array");
        ResultRecord r;
        auto opt_double = [&](const char* key) -> std::optional<double> {
            if (!item.contains(key) || item.at(key).is_null()) return std::nullopt;
            return item.at(key).get<double>();
        };
        r.grid_index = item.value("grid_index", 0LL);
        r.status = item.value("status", std::string("ok"));
        r.reason = item.value("reason", std::string());
        r.model = item.value("model", std::string());
        r.ell = item.value("ell", 0);
        r.n = item.value("n", 0);
        r.free_name = item.value("free_name", std::string());
        r.free_value = opt_double("free_value");
        if (item.contains("params"))
            for (const auto& [k, v] : item.at("params").items())
                r.params[k] = v.get<double>();
        if (item.contains("roots"))
            for (const auto& v : item.at("roots")) r.roots.push_back(v.get<double>());
        r.energy = opt_double("energy");
        r.c0 = opt_double("c0");
        r.bae_residual_norm = opt_double("bae_residual_norm");
        r.oracle_c0_dev = opt_double("oracle_c0_dev");
        r.fd_energy_dev = opt_double("fd_energy_dev");
        if (item.contains("node_count") && !item.at("node_count").is_null())
            r.node_count = item.at("node_count").get<int>();
        r.wall_time_ms = opt_double("wall_time_ms");
        out.push_back(std::move(r));
    }
    return out;
}

std::string to_csv(const std::vector<ResultRecord>& records) {
    std::string out;
    for (int i = 0; i < kNumColumns; ++i) {
        if (i) out += ',';
        out += kColumns[i];
    }
    out += '\n';
    for (const ResultRecord& r : records) {
        std::vector<std::string> cells(kNumColumns);
        cells[0] = std::to_string(r.grid_index);
        cells[1] = r.status;
        cells[2] = r.reason;
        cells[3] = r.model;
        cells[4] = std::to_string(r.ell);
        cells[5] = std::to_string(r.n);
        cells[6] = r.free_name;
        cells[7] = r.free_value ? format_double(*r.free_value) : "";
        cells[8] = params_cell(r.params);
        cells[9] = r.energy ? format_double(*r.energy) : "";
        cells[10] = roots_cell(r.roots);
        cells[11] = r.c0 ? format_double(*r.c0) : "";
        cells[12] = r.bae_residual_norm ? format_double(*r.bae_residual_norm) : "";
        cells[13] = r.oracle_c0_dev ? format_double(*r.oracle_c0_dev) : "";
        cells[14] = r.fd_energy_dev ? format_double(*r.fd_energy_dev) : "";
        cells[15] = r.node_count ? std::to_string(*r.node_count) : "";
        cells[16] = r.wall_time_ms ? format_double(*r.wall_time_ms) : "";
        for (int i = 0; i < kNumColumns; ++i) {
            if (i) out += ',';
            out += csv_quote(cells[i]);
        }
        out += '\n';
    }
    return out;
}

std::vector<ResultRecord> records_from_csv(const std::string& text) {
    // split into rows of cells, honoring quoted cells
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false;
    bool cell_started = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += ch;
            }
            continue;
        }
        if (ch == '"' && !cell_started) {
            quoted = true;
            cell_started = true;
        } else if (ch == ',') {
            row.push_back(std::move(cell));
            cell.clear();
            cell_started = false;
        } else if (ch == '\n') {
            row.push_back(std::move(cell));
            cell.clear();
            cell_started = false;
            rows.push_back(std::move(row));
            row.clear();
        } else if (ch == '\r') {
            // tolerated before '\n'
        } else {
            cell += ch;
            cell_started = true;
        }
    }
    if (cell_started || !row.empty()) {
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
    }
    if (quoted) throw std::invalid_argument("unterminated quoted CSV cell");
    if (rows.empty()) throw std::invalid_argument("missing CSV header");

    const std::vector<std::string>& header = rows.front();
    if (header.size() != kNumColumns)
        throw std::invalid_argument("unexpected CSV column count");
    for (int i = 0; i < kNumColumns; ++i)
        if (header[i] != kColumns[i])
            throw std::invalid_argument("unexpected CSV header '" + header[i] + "'");

    std::vector<ResultRecord> out;
    for (std::size_t ri = 1; ri < rows.size(); ++ri) {
        const auto& cells = rows[ri];
        if (cells.size() == 1 && cells[0].empty()) continue;  // trailing blank line
        if (cells.size() != kNumColumns)
            throw std::invalid_argument("CSV row " + std::to_string(ri) +
                                        " has wrong cell count");
        ResultRecord r;
        r.grid_index = parse_int(cells[0]);
        r.status = cells[1];
        r.reason = cells[2];
        r.model = cells[3];
        r.ell = static_cast<int>(parse_int(cells[4]));
        r.n = static_cast<int>(parse_int(cells[5]));
        r.free_name = cells[6];
        if (!cells[7].empty()) r.free_value = parse_double(cells[7]);
        r.params = parse_params_cell(cells[8]);
        if (!cells[9].empty()) r.energy = parse_double(cells[9]);
        r.roots = parse_roots_cell(cells[10]);
        if (!cells[11].empty()) r.c0 = parse_double(cells[11]);
        if (!cells[12].empty()) r.bae_residual_norm = parse_double(cells[12]);
        if (!cells[13].empty()) r.oracle_c0_dev = parse_double(cells[13]);
        if (!cells[14].empty()) r.fd_energy_dev = parse_double(cells[14]);
        if (!cells[15].empty()) r.node_count = static_cast<int>(parse_int(cells[15]));
        if (!cells[16].empty()) r.wall_time_ms = parse_double(cells[16]);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace qes
