#pragma once

#include <string>
#include <vector>

namespace wavekin {

// Append-only result table. Cells are stored as the exact strings written to
// disk (doubles formatted with %.17g at append time), so CSV output is
// bitwise reproducible and round-trips exactly. Manifest entries (config
// hash, seeds, code version) are emitted as leading '#' comment lines.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, std::string>> manifest;

  void add_manifest(const std::string& key, const std::string& value);
  // Begins a new row; fill it with cell() calls, one per column.
  void start_row();
  void cell(const std::string& s);
  void cell(double x);
  void cell(long x);
};

std::string format_double(double x);  // %.17g

void write_csv(const ResultTable& table, const std::string& path);
ResultTable read_csv(const std::string& path);

// Row-major little-endian 64-bit floats at `path`, plus a text sidecar at
// `path + ".txt"` describing shape, axes and units.
void write_raw(const std::string& path, const double* data, long count,
               const std::vector<long>& shape, const std::string& description);

}  // namespace wavekin
