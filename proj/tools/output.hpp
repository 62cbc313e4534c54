#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace hullsing::cli {

/// Provenance stamped into every file.
struct Stamp {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
};

/// Numbers as %.16e; `#` comment header with the stamp.
class CsvWriter {
 public:
  CsvWriter(const Stamp& stamp, std::vector<std::string> columns);
  void row(const std::vector<double>& values);
  /// Mixed row: numbers formatted as above, strings verbatim.
  void row(const std::vector<std::string>& cells);
  void save(const std::string& path) const;

  static std::string number(double v);

 private:
  std::string text_;
  std::size_t columns_;
};

void write_json(const std::string& path, const Stamp& stamp, json body);

/// Filled cells of z over the (x,y) grid with the zero level set drawn on top.
/// z is indexed [i·ny + j] for x index i and y index j.
void write_section_svg(const std::string& path, const Stamp& stamp, const std::string& title,
                       const Axis& x, const Axis& y, const std::vector<double>& z);

struct Polyline {
  std::vector<double> x, y;
  std::string colour = "#1f3b73";
};
void write_curves_svg(const std::string& path, const Stamp& stamp, const std::string& title,
                      const std::string& xlabel, const std::string& ylabel,
                      const std::vector<Polyline>& lines);

}  // namespace hullsing::cli
