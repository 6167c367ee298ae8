#include "revspec/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "revspec/errors.hpp"

namespace revspec::report {

std::string format_double(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    std::string s(buf);
    // keep a numeric token recognizable as floating point
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

namespace {

void dump_rec(const nlohmann::json& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * depth), ' ');
    const std::string pad_in(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            std::size_t i = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++i) {
                out += pad_in;
                out += nlohmann::json(it.key()).dump();
                out += ": ";
                dump_rec(it.value(), out, indent, depth + 1);
                if (i + 1 < j.size()) out += ",";
                out += "\n";
            }
            out += pad + "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                out += pad_in;
                dump_rec(j[i], out, indent, depth + 1);
                if (i + 1 < j.size()) out += ",";
                out += "\n";
            }
            out += pad + "]";
            return;
        }
        case nlohmann::json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

} // namespace

std::string dump_json(const nlohmann::json& j, int indent) {
    std::string out;
    dump_rec(j, out, indent, 0);
    out += "\n";
    return out;
}

std::string dump_csv(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) os << ",";
        os << header[i];
    }
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ",";
            os << format_double(row[i]);
        }
        os << "\n";
    }
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file: " + path);
    f << content;
}

} // namespace revspec::report
