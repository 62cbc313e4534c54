#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hullsing::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("bad number '" + s + "' in " + what);
  }
}

}  // namespace

Axis parse_range(const std::string& name, const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw UsageError("range for " + name + " must be lo:hi:n, got " + spec);
  Axis a;
  a.name = name;
  a.lo = to_double(parts[0], name);
  a.hi = to_double(parts[1], name);
  const double n = to_double(parts[2], name);
  if (n < 1 || n != std::floor(n) || n > 1e6) {
    throw UsageError("grid must be non-empty: " + name + " has n = " + parts[2]);
  }
  a.n = static_cast<int>(n);
  if (a.n > 1 && !(a.hi > a.lo)) throw UsageError("range for " + name + " needs lo < hi");
  return a;
}

std::vector<Axis> parse_grid(const std::string& spec, const std::string& allowed) {
  std::vector<Axis> out;
  if (spec.empty()) return out;
  for (const auto& item : split(spec, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("grid entry '" + item + "' lacks '='");
    const std::string name = item.substr(0, eq);
    if (name.size() != 1 || allowed.find(name) == std::string::npos) {
      throw UsageError("grid axis '" + name + "' not one of " + allowed);
    }
    for (const auto& a : out) {
      if (a.name == name) throw UsageError("grid axis '" + name + "' given twice");
    }
    out.push_back(parse_range(name, item.substr(eq + 1)));
  }
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& s : split(text, ',')) out.push_back(to_double(s, "list '" + text + "'"));
  return out;
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  try {
    json j = json::parse(in);
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
}

std::string config_hash(const json& config) {
  json c = config;
  c.erase("out");
  const std::string text = c.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double get_number(const json& config, const std::string& key) {
  const auto it = config.find(key);
  if (it == config.end() || !it->is_number()) throw UsageError("'" + key + "' must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw UsageError("'" + key + "' must be finite");
  return v;
}

int get_int(const json& config, const std::string& key) {
  const auto it = config.find(key);
  if (it == config.end() || !it->is_number_integer()) {
    throw UsageError("'" + key + "' must be an integer");
  }
  return it->get<int>();
}

std::string get_string(const json& config, const std::string& key) {
  const auto it = config.find(key);
  if (it == config.end() || !it->is_string()) throw UsageError("'" + key + "' must be a string");
  return it->get<std::string>();
}

bool get_bool(const json& config, const std::string& key) {
  const auto it = config.find(key);
  if (it == config.end() || !it->is_boolean()) throw UsageError("'" + key + "' must be a boolean");
  return it->get<bool>();
}

std::uint64_t get_seed(const json& config) {
  const auto it = config.find("seed");
  if (it == config.end() || !it->is_number_integer() || it->get<std::int64_t>() < 0) {
    throw UsageError("'seed' must be a non-negative integer");
  }
  return it->get<std::uint64_t>();
}

double positive(const json& config, const std::string& key) {
  const double v = get_number(config, key);
  if (!(v > 0.0)) throw UsageError("'" + key + "' must be > 0");
  return v;
}

}  // namespace hullsing::cli
