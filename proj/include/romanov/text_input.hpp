#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace romanov {

// One data line of a whitespace-separated integer file.
struct TextRecord {
    std::size_t line = 0;
    std::vector<std::uint64_t> fields;
};

// Reads UTF-8 text with one record per line; blank lines and lines whose
// first non-blank character is '#' are skipped. Each record must carry
// between min_fields and max_fields base-10 non-negative integers, otherwise
// a FormatError naming the line is thrown.
std::vector<TextRecord> read_records(std::istream& in, std::size_t min_fields, std::size_t max_fields,
                                     const char* what);

} // namespace romanov
