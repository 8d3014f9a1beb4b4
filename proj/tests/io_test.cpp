#include "shu/io.hpp"

#include <sstream>
#include <string>

#include <doctest.h>

using namespace shu;
using namespace shu::io;

TEST_CASE("csv quoting follows RFC 4180") {
  CHECK(CsvWriter::escape("plain") == "plain");
  CHECK(CsvWriter::escape("has,comma") == "\"has,comma\"");
  CHECK(CsvWriter::escape("has\"quote") == "\"has\"\"quote\"");
  CHECK(CsvWriter::escape("line\nbreak") == "\"line\nbreak\"");
  CHECK(CsvWriter::escape("") == "");

  std::ostringstream out;
  CsvWriter writer(out);
  writer.row({"a", "b,c", "d"});
  writer.row({"1", "2", "3"});
  CHECK(out.str() == "a,\"b,c\",d\n1,2,3\n");
}

TEST_CASE("doubles render with round-trip precision") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.0) == "0");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(std::stod(format_double(2.0888430050271560)) == 2.0888430050271560);
}

TEST_CASE("half-step counts reduce to lowest terms") {
  CHECK(halves_to_fraction(0) == std::pair<std::string, std::string>{"0", "1"});
  CHECK(halves_to_fraction(4) == std::pair<std::string, std::string>{"2", "1"});
  CHECK(halves_to_fraction(7) == std::pair<std::string, std::string>{"7", "2"});
  const u128 big = (static_cast<u128>(1) << 100) + 1;  // odd, wider than 64 bits
  const auto frac = halves_to_fraction(big);
  CHECK(frac.first == "1267650600228229401496703205377");
  CHECK(frac.second == "2");
}
