#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavekin {

// Configuration problems map to CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat `key = value` configuration with dotted keys and '#' comments.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key) const;
  long get_int(const std::string& key, long fallback) const;
  std::vector<double> get_list(const std::string& key) const;  // comma-separated

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }

  // FNV-1a over the sorted canonical `key=value` lines; identifies outputs.
  std::uint64_t hash() const;
  std::string hash_hex() const;

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace wavekin
