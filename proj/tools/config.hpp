#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace hullsing::cli {

using json = nlohmann::json;

/// Invalid configuration: exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Axis {
  std::string name;
  double lo = 0.0, hi = 0.0;
  int n = 1;

  double node(int i) const { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }
};

/// "x=-1:1:101,t=-1:1:101" → axes in the order given. Names must come from `allowed`.
std::vector<Axis> parse_grid(const std::string& spec, const std::string& allowed);
/// "lo:hi:n"
Axis parse_range(const std::string& name, const std::string& spec);
/// "a,b,c"
std::vector<double> parse_list(const std::string& text);

json load_config_file(const std::string& path);

/// FNV-1a 64 of the canonical dump, excluding the output directory.
std::string config_hash(const json& config);

double get_number(const json& config, const std::string& key);
int get_int(const json& config, const std::string& key);
std::string get_string(const json& config, const std::string& key);
bool get_bool(const json& config, const std::string& key);
std::uint64_t get_seed(const json& config);
/// Throws UsageError unless value > 0.
double positive(const json& config, const std::string& key);

}  // namespace hullsing::cli
