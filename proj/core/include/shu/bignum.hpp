#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>

namespace shu {

/// Arbitrary-size integer (GMP-backed).
using BigInt = boost::multiprecision::mpz_int;

/// Exact rational with reduced form and positive denominator (GMP-backed).
using BigRational = boost::multiprecision::mpq_rational;

/// n!, memoized process-wide. Thread-safe.
const BigInt& factorial(unsigned n);

/// Binomial coefficient C(n, k); 0 when k > n.
BigInt binomial(unsigned n, unsigned k);

/// base^e for e >= 0.
BigInt powi(const BigInt& base, unsigned e);

/// base^e for any integer e; negative e yields an exact rational. base != 0 when e < 0.
BigRational powq(const BigInt& base, long e);

std::string to_string(const BigInt& v);
std::string to_string(const BigRational& v);

/// Parses "7", "-3/4", or a finite decimal like "0.25" into an exact rational.
BigRational parse_rational(const std::string& text);

/// 128-bit accumulator for half-integer area bookkeeping.
using u128 = unsigned __int128;

std::string to_string(u128 v);

}  // namespace shu
