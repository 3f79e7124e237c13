#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gigg/model.hpp"

namespace gigg {

// Shortest decimal text that parses back to the same double, independent of
// the locale.
std::string format_double(double x);

// RFC 4180 records: quoted fields may hold commas, newlines and doubled
// quotes. Throws InputError naming the line and column of a syntax error.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);
std::string csv_escape(const std::string& field);

struct NumericTable {
  std::vector<std::string> names;
  Matrix values;  // rows x names.size()
};

// Header row of names followed by numeric rows. Empty or non-numeric cells
// and ragged rows are InputErrors with line and column.
NumericTable read_numeric_csv(const std::string& path);

// (column name, group label) pairs, with an optional header "column,group".
std::vector<std::pair<std::string, std::string>> read_group_map(const std::string& path);

std::string read_file(const std::string& path);
// Writes through a temporary file in the same directory and renames it into
// place.
void write_file_atomic(const std::string& path, const std::string& content);

struct CsvWriter {
  std::string text;
  void row(const std::vector<std::string>& fields);
};

// 64-byte header: magic "GIGGDRW1", u32 version, u32 reserved, u64 rows,
// u64 cols, zero padding; then rows x cols little-endian doubles, row-major.
inline constexpr char kDrawsMagic[8] = {'G', 'I', 'G', 'G', 'D', 'R', 'W', '1'};
std::string encode_draws_binary(const Matrix& values);
Matrix decode_draws_binary(const std::string& bytes);

// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& data);

}  // namespace gigg
