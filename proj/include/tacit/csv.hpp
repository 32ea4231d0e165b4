#ifndef TACIT_CSV_HPP
#define TACIT_CSV_HPP

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace tacit::csv {

struct Row {
    std::size_t line = 0;  // 1-based line number in the source file
    std::vector<std::string> fields;
};

/// Plain comma-separated reader (no quoting). Blank lines are skipped; when
/// `skip_header` is set the first non-blank line is dropped.
std::vector<Row> read(const std::filesystem::path& path, bool skip_header);

/// True when every field of the row parses as a number.
bool is_numeric_row(const Row& row);

long long to_int(const Row& row, std::size_t col);
double to_double(const Row& row, std::size_t col);

/// Round-trippable text for a double.
std::string fmt(double v);

std::ofstream open_out(const std::filesystem::path& path);

}  // namespace tacit::csv

#endif  // TACIT_CSV_HPP
