#include "wavekin/table.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wavekin {

void ResultTable::add_manifest(const std::string& key, const std::string& value) {
  manifest.emplace_back(key, value);
}

void ResultTable::start_row() { rows.emplace_back(); }

void ResultTable::cell(const std::string& s) {
  if (rows.empty()) throw std::logic_error("ResultTable: cell before start_row");
  rows.back().push_back(s);
}

void ResultTable::cell(double x) { cell(format_double(x)); }
void ResultTable::cell(long x) { cell(std::to_string(x)); }

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_csv(const ResultTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write CSV file: " + path);
  for (const auto& [k, v] : table.manifest) out << "# " << k << " = " << v << "\n";
  for (size_t i = 0; i < table.columns.size(); ++i)
    out << table.columns[i] << (i + 1 < table.columns.size() ? "," : "");
  out << "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw std::logic_error("ResultTable: row width != column count");
    for (size_t i = 0; i < row.size(); ++i) out << row[i] << (i + 1 < row.size() ? "," : "");
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace

ResultTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read CSV file: " + path);
  ResultTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      size_t eq = line.find('=');
      if (eq != std::string::npos) {
        std::string k = line.substr(1, eq - 1);
        std::string v = line.substr(eq + 1);
        auto trim = [](std::string s) {
          size_t b = s.find_first_not_of(' ');
          size_t e = s.find_last_not_of(' ');
          return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        table.add_manifest(trim(k), trim(v));
      }
      continue;
    }
    if (!have_header) {
      table.columns = split_csv_line(line);
      have_header = true;
    } else {
      table.rows.push_back(split_csv_line(line));
    }
  }
  if (!have_header) throw std::runtime_error("CSV file has no header row: " + path);
  return table;
}

void write_raw(const std::string& path, const double* data, long count,
               const std::vector<long>& shape, const std::string& description) {
  long expected = 1;
  for (long s : shape) expected *= s;
  if (expected != count) throw std::invalid_argument("write_raw: shape does not match count");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write raw file: " + path);
  // Emit explicitly as little-endian regardless of host order.
  for (long i = 0; i < count; ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, &data[i], 8);
    unsigned char b[8];
    for (int j = 0; j < 8; ++j) b[j] = static_cast<unsigned char>((bits >> (8 * j)) & 0xff);
    out.write(reinterpret_cast<const char*>(b), 8);
  }
  if (!out) throw std::runtime_error("write failed: " + path);
  std::ofstream side(path + ".txt");
  if (!side) throw std::runtime_error("cannot write sidecar: " + path + ".txt");
  side << "format = raw float64 little-endian row-major\n";
  side << "shape =";
  for (long s : shape) side << " " << s;
  side << "\ncount = " << count << "\n" << description << "\n";
}

}  // namespace wavekin
