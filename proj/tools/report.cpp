#include "report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace romanov::cli {

namespace {
constexpr std::uint64_t kJsonSafe = 1ull << 53;

std::string u128_string(unsigned __int128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v) {
        s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    return s;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}
} // namespace

Json big(std::uint64_t v) { return v <= kJsonSafe ? Json(v) : Json(std::to_string(v)); }

Json big(std::int64_t v) {
    const std::uint64_t mag = v < 0 ? 0 - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
    return mag <= kJsonSafe ? Json(v) : Json(std::to_string(v));
}

Json big(unsigned __int128 v) {
    return v <= kJsonSafe ? Json(static_cast<std::uint64_t>(v)) : Json(u128_string(v));
}

Json big(__int128 v) {
    const unsigned __int128 mag = v < 0 ? 0 - static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    if (mag <= kJsonSafe) return Json(static_cast<std::int64_t>(v));
    return Json((v < 0 ? "-" : "") + u128_string(mag));
}

std::string render_json(const Report& r) { return r.doc.dump(2) + "\n"; }

std::string render_csv(const Report& r) {
    std::ostringstream out;
    for (std::size_t i = 0; i < r.table.columns.size(); ++i)
        out << (i ? "," : "") << csv_field(r.table.columns[i]);
    out << "\n";
    for (const auto& row : r.table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
        out << "\n";
    }
    return out.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
    namespace fs = std::filesystem;
    const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        f.flush();
        if (!f) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw std::runtime_error("cannot move report into place at '" + path.string() + "'");
    }
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace romanov::cli
