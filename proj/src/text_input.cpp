#include "romanov/text_input.hpp"

#include "romanov/errors.hpp"

#include <charconv>
#include <istream>
#include <string>

namespace romanov {

std::vector<TextRecord> read_records(std::istream& in, std::size_t min_fields, std::size_t max_fields,
                                     const char* what) {
    std::vector<TextRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;

        TextRecord rec{lineno, {}};
        const char* p = line.data() + first;
        const char* end = line.data() + line.size();
        while (p < end) {
            std::uint64_t v = 0;
            auto [next, ec] = std::from_chars(p, end, v);
            if (ec == std::errc::result_out_of_range)
                throw FormatError(lineno, std::string(what) + ": integer out of 64-bit range");
            if (ec != std::errc{} || (next < end && *next != ' ' && *next != '\t'))
                throw FormatError(lineno, std::string(what) + ": malformed line '" + line + "'");
            rec.fields.push_back(v);
            p = next;
            while (p < end && (*p == ' ' || *p == '\t')) ++p;
        }
        if (rec.fields.size() < min_fields || rec.fields.size() > max_fields)
            throw FormatError(lineno, std::string(what) + ": expected " + std::to_string(min_fields) +
                                          (min_fields == max_fields ? "" : "-" + std::to_string(max_fields)) +
                                          " integers, got " + std::to_string(rec.fields.size()));
        out.push_back(std::move(rec));
    }
    return out;
}

} // namespace romanov
