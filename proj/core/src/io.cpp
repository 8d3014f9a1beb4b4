#include "shu/io.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

namespace shu::io {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

std::pair<std::string, std::string> halves_to_fraction(u128 halves) {
  if (halves % 2 == 0) return {to_string(halves / 2), "1"};
  return {to_string(halves), "2"};
}

std::string CsvWriter::escape(const std::string& cell) {
  bool needs_quotes = false;
  for (char c : cell) {
    if (c == ',' || c == '"' || c == '\n' || c == '\r') {
      needs_quotes = true;
      break;
    }
  }
  if (!needs_quotes) return cell;
  std::string quoted = "\"";
  for (char c : cell) {
    if (c == '"') quoted += "\"\"";
    else quoted += c;
  }
  quoted += '"';
  return quoted;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  bool first = true;
  for (const auto& cell : cells) {
    if (!first) out_ << ',';
    out_ << escape(cell);
    first = false;
  }
  out_ << '\n';
}

}  // namespace shu::io
