#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace revspec::report {

// Serializes with map keys in sorted order (nlohmann's default object is a
// std::map) and every number printed with 17 significant digits, so repeated
// runs with identical inputs produce byte-identical files.
std::string dump_json(const nlohmann::json& j, int indent = 2);

std::string format_double(double v);

// CSV with a header row; every cell formatted like the JSON numbers.
std::string dump_csv(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

void write_file(const std::string& path, const std::string& content);

} // namespace revspec::report
