#include "shu/precision.hpp"

#include <cmath>
#include <stdexcept>

namespace shu {

unsigned bits_to_digits10(unsigned bits) {
  // 1 decimal digit ~ log2(10) bits; round up and pad to be safe
  return static_cast<unsigned>(std::ceil(bits / 3.3219280948873623)) + 2;
}

PrecisionGuard::PrecisionGuard(unsigned bits) : saved_digits_(Real::default_precision()) {
  Real::default_precision(bits_to_digits10(bits));
}

PrecisionGuard::~PrecisionGuard() { Real::default_precision(saved_digits_); }

Real to_real(const BigRational& q) {
  return Real(numerator(q)) / Real(denominator(q));
}

Real to_real(const BigInt& v) { return Real(v); }

Real escalate(const PrecisionConfig& cfg, const std::function<Real(unsigned)>& fn) {
  unsigned bits = cfg.bits < 64 ? 64 : cfg.bits;
  Real prev;
  {
    PrecisionGuard guard(bits);
    prev = fn(bits);
  }
  while (true) {
    unsigned next = bits * 2;
    if (next > cfg.max_bits) {
      throw std::runtime_error("escalate: precision cap exceeded before agreement");
    }
    Real value;
    {
      PrecisionGuard guard(next);
      value = fn(next);
      Real diff = abs(value - Real(prev));
      if (diff <= Real(cfg.target_tol)) return value;
    }
    prev = value;
    bits = next;
  }
}

}  // namespace shu
