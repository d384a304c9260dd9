#ifndef SUMVERIFY_EXACT_HPP
#define SUMVERIFY_EXACT_HPP

#include <cstddef>

#include "sumverify/bigfloat.hpp"
#include "sumverify/rational.hpp"

namespace sumverify {

/// C(m, k), exact. Returns 0 outside the support 0 <= k <= m. Computed by
/// the multiplicative running product; full rows are memoized up to the
/// configurable cache limit (the cache never changes returned values).
mpz_class binomial(unsigned long m, long k);

std::size_t binomial_cache_row_limit();
void set_binomial_cache_row_limit(std::size_t rows);

/// Sum of reciprocals of the first j odd integers: 1 + 1/3 + ... + 1/(2j-1).
/// Throws std::domain_error for j = 0.
Rational odd_harmonic(unsigned long j);

/// Exact sum over k = 0..2n-1 of C(2n-1,k) / (k + j - n + 1/2). Every
/// denominator is a half-odd-integer, so no term is singular.
Rational inner_sum_t(unsigned long n, unsigned long j);

/// Exact sum over k = 0..2n-1 of C(2n-1,k) / (k - j - n + 1/2).
/// Equals -inner_sum_t(n, j) via the index reflection k -> 2n-1-k.
Rational inner_sum_s(unsigned long n, unsigned long j);

/// One term of the outer series, held exactly and as a rounded float.
struct SeriesTerm {
  unsigned long n = 0;
  unsigned long j = 0;
  Rational exact;
  BigFloat approx;
};

/// inner_sum_t(n, j) / (2^(2n-1) * (2n-1)); approx is the correctly rounded
/// conversion of exact at the given precision.
SeriesTerm series_term_t(unsigned long n, unsigned long j, mpfr_prec_t precision_bits);

/// (2/j) * odd_harmonic(j). Throws std::domain_error for j = 0.
Rational closed_form_t(unsigned long j);

/// -(2/j) * odd_harmonic(j): the exact ground truth every route is judged
/// against. Throws std::domain_error for j = 0.
Rational closed_form_s(unsigned long j);

/// Exact 4 * sum over k = 1..K of 1/((2k-1)(2k+2j-1)); 0 for K = 0.
/// Summed term by term.
Rational partial_fraction_partial_sum(unsigned long j, unsigned long K);

/// Same value as partial_fraction_partial_sum(j, K), obtained from the
/// telescoped window form (2/j) * (odd_harmonic(j) - sum_{k=K+1}^{K+j} 1/(2k-1))
/// when K >= j; falls back to direct summation for K < j, where the two
/// odd-harmonic blocks overlap. Costs O(j) rational operations for K >= j.
Rational telescoped_partial_sum(unsigned long j, unsigned long K);

}  // namespace sumverify

#endif  // SUMVERIFY_EXACT_HPP
