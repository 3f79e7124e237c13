#include "gigg/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "gigg/errors.hpp"

namespace gigg {
namespace {

std::string where(long line, long column) {
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

template <typename T>
void put_le(std::string& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

template <typename T>
T get_le(const std::string& in, std::size_t at) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<T>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  }
  return v;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "Inf" : "-Inf";
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  (void)ec;
  return std::string(buf.data(), ptr);
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  long line = 1, column = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();
  bool field_started = false;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
    ++column;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
    ++line;
    column = 1;
  };
  while (i < n) {
    const char c = text[i];
    if (c == '"' && !field_started) {
      field_started = true;
      const long open_line = line;
      ++i;
      while (true) {
        if (i >= n) throw InputError("CSV " + where(open_line, column) + ": unterminated quoted field");
        if (text[i] == '"') {
          if (i + 1 < n && text[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        if (text[i] == '\n') ++line;
        field.push_back(text[i++]);
      }
      if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
        throw InputError("CSV " + where(line, column) + ": unexpected character after closing quote");
      }
      continue;
    }
    if (c == ',') {
      end_field();
      ++i;
    } else if (c == '\r' || c == '\n') {
      i += (c == '\r' && i + 1 < n && text[i + 1] == '\n') ? 2 : 1;
      if (record.empty() && !field_started) {
        // Blank line.
        ++line;
        continue;
      }
      end_record();
    } else {
      if (c == '"') throw InputError("CSV " + where(line, column) + ": quote inside an unquoted field");
      field_started = true;
      field.push_back(c);
      ++i;
    }
  }
  if (field_started || !record.empty()) end_record();
  return records;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InputError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw InputError("cannot move " + tmp.string() + " to " + path + ": " + ec.message());
}

NumericTable read_numeric_csv(const std::string& path) {
  const auto records = parse_csv(read_file(path));
  if (records.empty()) throw InputError(path + ": empty file, a header row is required");
  NumericTable t;
  t.names = records[0];
  for (std::size_t j = 0; j < t.names.size(); ++j) {
    if (t.names[j].empty()) throw InputError(path + ": " + where(1, j + 1) + ": empty column name");
  }
  const auto cols = static_cast<Eigen::Index>(t.names.size());
  t.values.resize(static_cast<Eigen::Index>(records.size()) - 1, cols);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const long line = static_cast<long>(r) + 1;
    if (static_cast<Eigen::Index>(rec.size()) != cols) {
      throw InputError(path + ": " + where(line, static_cast<long>(std::min(rec.size(), t.names.size())) + 1) +
                       ": expected " + std::to_string(cols) + " fields, found " +
                       std::to_string(rec.size()));
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      const std::string& s = rec[j];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty()) throw InputError(path + ": " + where(line, j + 1) + ": missing value");
      if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw InputError(path + ": " + where(line, j + 1) + ": not a finite number: '" + s + "'");
      }
      t.values(static_cast<Eigen::Index>(r) - 1, j) = v;
    }
  }
  return t;
}

std::vector<std::pair<std::string, std::string>> read_group_map(const std::string& path) {
  const auto records = parse_csv(read_file(path));
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (r == 0 && rec.size() == 2 && rec[0] == "column" && rec[1] == "group") continue;
    if (rec.size() != 2) {
      throw InputError(path + ": " + where(static_cast<long>(r) + 1, 1) + ": expected column,group");
    }
    if (rec[0].empty() || rec[1].empty()) {
      throw InputError(path + ": " + where(static_cast<long>(r) + 1, rec[0].empty() ? 1 : 2) +
                       ": empty entry");
    }
    out.emplace_back(rec[0], rec[1]);
  }
  if (out.empty()) throw InputError(path + ": no group assignments");
  return out;
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) text.push_back(',');
    text += csv_escape(fields[i]);
  }
  text.push_back('\n');
}

std::string encode_draws_binary(const Matrix& values) {
  std::string out(kDrawsMagic, sizeof(kDrawsMagic));
  put_le<std::uint32_t>(out, 1);
  put_le<std::uint32_t>(out, 0);
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(values.rows()));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(values.cols()));
  out.resize(64, '\0');
  out.reserve(64 + 8 * values.size());
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(values(i, j)));
    }
  }
  return out;
}

Matrix decode_draws_binary(const std::string& bytes) {
  if (bytes.size() < 64 || std::memcmp(bytes.data(), kDrawsMagic, 8) != 0) {
    throw InputError("draws file: bad header");
  }
  if (get_le<std::uint32_t>(bytes, 8) != 1) throw InputError("draws file: unsupported version");
  const auto rows = get_le<std::uint64_t>(bytes, 16);
  const auto cols = get_le<std::uint64_t>(bytes, 24);
  if (bytes.size() != 64 + 8 * rows * cols) throw InputError("draws file: size does not match header");
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::size_t at = 64;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j, at += 8) {
      m(i, j) = std::bit_cast<double>(get_le<std::uint64_t>(bytes, at));
    }
  }
  return m;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace gigg
