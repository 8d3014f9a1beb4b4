#include "shu/exact.hpp"

#include <mutex>
#include <stdexcept>

namespace shu::exact {

namespace {

std::mutex g_euler_mutex;

// rows[i] holds A(i+1, k) for k = 1..i+1
std::vector<std::vector<BigInt>>& euler_rows() {
  static std::vector<std::vector<BigInt>> rows{{BigInt(1)}};
  return rows;
}

}  // namespace

BigInt eulerian(unsigned n, unsigned k) {
  if (n < 1 || k < 1 || k > n) throw std::domain_error("eulerian: need 1 <= k <= n");
  std::lock_guard<std::mutex> lock(g_euler_mutex);
  auto& rows = euler_rows();
  while (rows.size() < n) {
    const auto& prev = rows.back();
    const unsigned pn = static_cast<unsigned>(rows.size());  // building row pn+1
    std::vector<BigInt> row(pn + 1);
    for (unsigned kk = 1; kk <= pn + 1; ++kk) {
      const BigInt left = (kk >= 2 && kk - 2 < prev.size()) ? prev[kk - 2] : BigInt(0);
      const BigInt right = (kk - 1 < prev.size()) ? prev[kk - 1] : BigInt(0);
      row[kk - 1] = BigInt(pn + 1 - kk + 1) * left + BigInt(kk) * right;
    }
    rows.push_back(std::move(row));
  }
  return rows[n - 1][k - 1];
}

BigRational p_exact(unsigned n, unsigned m) {
  if (n < 1 || m < 1) throw std::domain_error("p_exact: need n,m >= 1");
  const BigRational direct(BigInt(m) * eulerian(n + m - 1, n), factorial(n + m));

  // Independent evaluation through inclusion-exclusion.
  BigRational alt(0);
  for (unsigned r = 0; r <= m; ++r) {
    const BigRational term(powi(BigInt(m - r), n + m - 1),
                           factorial(r) * factorial(n + m - r));
    alt += (r % 2 == 0) ? term : -term;
  }
  alt *= m;
  if (alt != direct) throw std::logic_error("p_exact: the two forms disagree");
  return direct;
}

BigRational survival_exact(unsigned n, unsigned m) {
  if (n < 1) throw std::domain_error("survival_exact: need n >= 1");
  BigInt sum(0);
  for (unsigned i = 0; i <= n; ++i) {
    const BigInt term = binomial(m + n, i) * powi(BigInt(n) - i, n + m);
    sum += (i % 2 == 0) ? term : -term;
  }
  return BigRational(sum, factorial(m + n));
}

Real row_tail_bound(unsigned n, unsigned m_max) {
  if (m_max < n) return Real(1);
  const Real d(m_max - n);
  return 2 * exp(-3 * d * d / (4 * Real(n) + 2 * d));
}

TransitionRow transition_row(unsigned n, double tail_tol) {
  if (tail_tol <= 0) throw std::domain_error("transition_row: tail_tol must be positive");
  PrecisionGuard guard(256);
  unsigned m_max = n;
  while (row_tail_bound(n, m_max) > tail_tol) {
    ++m_max;
    if (m_max > 2000000) throw std::runtime_error("transition_row: tail tolerance unreachable");
  }
  TransitionRow row;
  row.n = n;
  row.m_max = m_max;
  row.tail_bound = row_tail_bound(n, m_max);
  row.probs.reserve(m_max);
  for (unsigned m = 1; m <= m_max; ++m) row.probs.push_back(p_exact(n, m));
  return row;
}

namespace {

// sum_{j >= k} j^d * row_tail_bound(n, j-1); terms decay geometrically, so
// cutting at 1e-60 of running value certifies the remainder.
Real weighted_tail(unsigned n, unsigned k, unsigned d) {
  Real total(0);
  const Real floor_eps("1e-60");
  for (unsigned j = k;; ++j) {
    Real term = row_tail_bound(n, j - 1);
    for (unsigned i = 0; i < d; ++i) term *= j;
    total += term;
    if (j > n + 4 && term < floor_eps * (1 + total)) break;
    if (j > k + 1000000) throw std::runtime_error("weighted_tail: no convergence");
  }
  return total;
}

// least truncation height whose certified weighted tail is below tol/2
unsigned pick_truncation(unsigned n, unsigned d, double tol) {
  for (unsigned k = n + 2; k < n + 200000; k += 2) {
    if (weighted_tail(n, k, d) < Real(tol) / 2) return k;
  }
  throw std::runtime_error("pick_truncation: tolerance unreachable");
}

}  // namespace

Real mean_exact(unsigned n, double tol) {
  if (n < 1) throw std::domain_error("mean_exact: need n >= 1");
  PrecisionGuard guard(320);
  const unsigned k = pick_truncation(n, 1, tol);
  BigRational partial(0);
  for (unsigned m = 1; m < k; ++m) partial += BigRational(m) * p_exact(n, m);
  return to_real(partial);
}

Real second_moment_exact(unsigned n, double tol) {
  if (n < 1) throw std::domain_error("second_moment_exact: need n >= 1");
  PrecisionGuard guard(320);
  const unsigned k = pick_truncation(n, 2, tol);
  BigRational partial(0);
  for (unsigned m = 1; m < k; ++m) partial += BigRational(m) * m * p_exact(n, m);
  return to_real(partial);
}

namespace {

// E_n[1/Z] by truncated exact sum (tail certified below tol/2)
BigRational recip_partial(unsigned n, double tol) {
  const unsigned k = pick_truncation(n, 0, tol);
  BigRational partial(0);
  for (unsigned m = 1; m < k; ++m) partial += p_exact(n, m) / m;
  return partial;
}

BigRational recip_cube_partial(unsigned n, double tol) {
  const unsigned k = pick_truncation(n, 0, tol);
  BigRational partial(0);
  for (unsigned m = 1; m < k; ++m) {
    partial += p_exact(n, m) / (BigRational(m) * m * (BigRational(m) + 1));
  }
  return partial;
}

}  // namespace

RecipReport recip_identities(unsigned n, double tol) {
  if (n < 2) throw std::domain_error("recip_identities: need n >= 2");
  PrecisionGuard guard(320);
  const Real recip = to_real(recip_partial(n, tol));
  const Real recip_prev = to_real(recip_partial(n - 1, tol));
  const Real cube = to_real(recip_cube_partial(n, tol));
  const Real mean_n = mean_exact(n, tol);
  const Real mean_prev = mean_exact(n - 1, tol);

  RecipReport report;
  report.recip = recip;
  report.recip_cube = cube;
  report.mean_identity_residual = recip - (mean_n - mean_prev) / n;
  report.recip_identity_residual = cube - (recip_prev - recip) / n;
  const BigRational h_n = BigRational(1, n) - BigRational(1, BigInt(n) * n * (n + 1));
  report.h_margin = to_real(h_n) - (recip - cube);
  return report;
}

}  // namespace shu::exact
