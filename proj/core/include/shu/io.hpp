#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "shu/bignum.hpp"

namespace shu::io {

/// Formats a double with the shortest representation that round-trips, so
/// emitted files are bit-stable across runs of the same build.
std::string format_double(double value);

/// Renders a duration counted in half-steps as a reduced fraction
/// (numerator, denominator) with denominator 1 or 2.
std::pair<std::string, std::string> halves_to_fraction(u128 halves);

/// Minimal CSV emitter with RFC-4180 quoting: fields containing commas,
/// quotes, or line breaks are quoted and embedded quotes doubled. Rows are
/// newline-terminated.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void row(const std::vector<std::string>& cells);

  static std::string escape(const std::string& cell);

 private:
  std::ostream& out_;
};

}  // namespace shu::io
