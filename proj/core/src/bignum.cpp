#include "shu/bignum.hpp"

#include <mutex>
#include <stdexcept>
#include <vector>

namespace shu {

namespace {
std::mutex g_fact_mutex;
std::vector<BigInt>& factorial_table() {
  static std::vector<BigInt> table{BigInt(1)};  // 0! = 1
  return table;
}
}  // namespace

const BigInt& factorial(unsigned n) {
  std::lock_guard<std::mutex> lock(g_fact_mutex);
  auto& table = factorial_table();
  while (table.size() <= n) {
    table.push_back(table.back() * BigInt(table.size()));
  }
  return table[n];
}

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return BigInt(0);
  // factorial() copies are cheap relative to the division below
  BigInt num = factorial(n);
  return num / (factorial(k) * factorial(n - k));
}

BigInt powi(const BigInt& base, unsigned e) {
  BigInt result(1), b = base;
  while (e > 0) {
    if (e & 1u) result *= b;
    e >>= 1u;
    if (e > 0) b *= b;
  }
  return result;
}

BigRational powq(const BigInt& base, long e) {
  if (e >= 0) return BigRational(powi(base, static_cast<unsigned>(e)));
  if (base == 0) throw std::domain_error("powq: 0 to a negative power");
  return BigRational(1) / BigRational(powi(base, static_cast<unsigned>(-e)));
}

std::string to_string(const BigInt& v) { return v.str(); }
std::string to_string(const BigRational& v) { return v.str(); }

namespace {

// GMP's string constructor auto-detects the base, so a leading zero would
// silently switch to octal; strip leading zeros and force decimal meaning.
BigInt parse_decimal_int(std::string text) {
  std::string sign;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    if (text[0] == '-') sign = "-";
    text.erase(0, 1);
  }
  const auto first = text.find_first_not_of('0');
  text = first == std::string::npos ? "0" : text.substr(first);
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument("parse_rational: malformed integer");
  }
  return BigInt(sign + text);
}

}  // namespace

BigRational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse_rational: empty input");
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const BigInt num = parse_decimal_int(text.substr(0, slash));
    const BigInt den = parse_decimal_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
    return BigRational(num, den);  // mpq_rational canonicalizes
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) return BigRational(parse_decimal_int(text));
  const BigInt num = parse_decimal_int(text.substr(0, dot) + text.substr(dot + 1));
  const BigInt den = powi(BigInt(10), static_cast<unsigned>(text.size() - dot - 1));
  return BigRational(num, den);
}

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
    v /= 10;
  }
  return std::string(out.rbegin(), out.rend());
}

}  // namespace shu
