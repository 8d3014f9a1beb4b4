#pragma once

#include <cstdint>
#include <vector>

#include "shu/bignum.hpp"
#include "shu/precision.hpp"

namespace shu::exact {

/// Eulerian number A(n,k) for 1 <= k <= n, by the recurrence
/// A(n,k) = (n-k+1) A(n-1,k-1) + k A(n-1,k) with A(1,1) = 1.
/// Rows are memoized process-wide; thread-safe.
BigInt eulerian(unsigned n, unsigned k);

/// Exact one-traversal hitting law p(n,m) = m A(n+m-1, n) / (n+m)!.
/// Also evaluated through the alternating sum
/// m sum_r (-1)^r (m-r)^{n+m-1} / (r! (n+m-r)!) and asserted equal;
/// the two derivations share nothing but the answer.
BigRational p_exact(unsigned n, unsigned m);

/// P(height > m after one traversal from n), m >= 0:
/// (1/(m+n)!) sum_{i=0}^n (-1)^i C(m+n,i) (n-i)^{n+m}.
BigRational survival_exact(unsigned n, unsigned m);

/// Certified bound on the upper tail sum_{m>M} p(n,m) for M >= n:
/// 2 exp(-3(M-n)^2 / (4n + 2(M-n))). Returns 1 when M < n (no certificate).
Real row_tail_bound(unsigned n, unsigned m_max);

struct TransitionRow {
  unsigned n = 0;
  unsigned m_max = 0;
  std::vector<BigRational> probs;  // probs[i] is p(n, i+1), 1 <= m <= m_max
  Real tail_bound;                 // certified bound on the mass above m_max
};

/// Row of the hitting law truncated at the least height whose certified
/// tail bound drops below tail_tol.
TransitionRow transition_row(unsigned n, double tail_tol);

/// E[height after one traversal from n], truncated exact sum whose discarded
/// tail is certified below tol. The returned value underestimates by at most
/// tol. Throws when no truncation point satisfies the certificate.
Real mean_exact(unsigned n, double tol);

/// Same contract for the second moment.
Real second_moment_exact(unsigned n, double tol);

struct RecipReport {
  Real recip;               // E_n[1/Z]
  Real recip_cube;          // E_n[1/(Z^2 (Z+1))]
  Real mean_identity_residual;   // E_n[1/Z] - (E_n[Z] - E_{n-1}[Z]) / n
  Real recip_identity_residual;  // E_n[1/(Z^2(Z+1))] - (E_{n-1}[1/Z] - E_n[1/Z]) / n
  Real h_margin;            // h(n) - E_n[h(Z)], h(x) = 1/x - 1/(x^2(x+1))
};

/// Reciprocal-moment identities at sheet n >= 2, each side evaluated by its
/// own truncated sum. A positive h_margin is the one-step supermartingale
/// inequality used by the transience argument.
RecipReport recip_identities(unsigned n, double tol);

}  // namespace shu::exact
