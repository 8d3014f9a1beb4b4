#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <functional>

#include "shu/bignum.hpp"

namespace shu {

/// Variable-precision real (MPFR-backed). Precision is taken from the
/// process-wide default at construction; use PrecisionGuard to scope it.
using Real = boost::multiprecision::mpfr_float;

/// Working-precision policy for escalating evaluations.
/// bits is the starting precision; evaluation is repeated at doubled
/// precision until two successive results agree within target_tol.
struct PrecisionConfig {
  unsigned bits = 128;
  double target_tol = 1e-30;
  unsigned max_bits = 1u << 20;
};

unsigned bits_to_digits10(unsigned bits);

/// Scoped override of the MPFR default precision (argument in bits).
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned bits);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_digits_;
};

/// Exact conversion of a rational at the current default precision.
Real to_real(const BigRational& q);
Real to_real(const BigInt& v);

/// Evaluates fn at cfg.bits, 2*cfg.bits, ... until two successive values
/// agree within cfg.target_tol (absolute); returns the last value.
/// Throws std::runtime_error when cfg.max_bits is exceeded.
Real escalate(const PrecisionConfig& cfg, const std::function<Real(unsigned)>& fn);

}  // namespace shu
