#include "tacit/csv.hpp"

#include <charconv>
#include <cstdio>

#include "tacit/types.hpp"

namespace tacit::csv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::string where(const Row& row) { return "line " + std::to_string(row.line); }

}  // namespace

std::vector<Row> read(const std::filesystem::path& path, bool skip_header) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<Row> rows;
    std::string line;
    std::size_t lineno = 0;
    bool header_pending = skip_header;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = trim(line);
        if (body.empty()) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        Row row{lineno, {}};
        std::size_t start = 0;
        while (true) {
            const auto comma = body.find(',', start);
            row.fields.emplace_back(trim(body.substr(start, comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

bool is_numeric_row(const Row& row) {
    for (const auto& f : row.fields) {
        double v;
        auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (ec != std::errc() || p != f.data() + f.size()) return false;
    }
    return !row.fields.empty();
}

long long to_int(const Row& row, std::size_t col) {
    if (col >= row.fields.size()) throw Error("malformed row at " + where(row) + ": missing column " + std::to_string(col + 1));
    const auto& f = row.fields[col];
    long long v = 0;
    auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc() || p != f.data() + f.size())
        throw Error("malformed row at " + where(row) + ": '" + f + "' is not an integer");
    return v;
}

double to_double(const Row& row, std::size_t col) {
    if (col >= row.fields.size()) throw Error("malformed row at " + where(row) + ": missing column " + std::to_string(col + 1));
    const auto& f = row.fields[col];
    double v = 0;
    auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc() || p != f.data() + f.size())
        throw Error("malformed row at " + where(row) + ": '" + f + "' is not a number");
    return v;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

}  // namespace tacit::csv
