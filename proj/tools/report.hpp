#pragma once

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace romanov::cli {

using Json = nlohmann::ordered_json;

// Integers above 2^53 do not survive a round trip through a JSON double, so
// they are written as decimal strings.
Json big(std::uint64_t v);
Json big(std::int64_t v);
Json big(unsigned __int128 v);
Json big(__int128 v);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

struct Report {
    Json doc = Json::object();
    Table table;                       // CSV projection
    std::vector<std::string> summary;  // plain lines for the terminal
};

std::string render_json(const Report& r);
std::string render_csv(const Report& r);

// Writes through a sibling temporary file and a rename, so a reader never
// sees a partial file at `path`.
void write_atomic(const std::filesystem::path& path, const std::string& bytes);

std::string fmt_double(double v);

} // namespace romanov::cli
