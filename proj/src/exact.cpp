#include "sumverify/exact.hpp"

#include <atomic>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <vector>

namespace sumverify {

namespace {

std::atomic<std::size_t> g_cache_row_limit{512};

struct RowCache {
  std::shared_mutex mu;
  std::map<unsigned long, std::vector<mpz_class>> rows;
};

RowCache& row_cache() {
  static RowCache cache;
  return cache;
}

std::vector<mpz_class> compute_row(unsigned long m) {
  std::vector<mpz_class> row(m + 1);
  row[0] = 1;
  for (unsigned long k = 0; k < m; ++k) {
    // C(m, k+1) = C(m, k) * (m - k) / (k + 1), exact at every step
    row[k + 1] = row[k] * (m - k) / (k + 1);
  }
  return row;
}

mpz_class binomial_direct(unsigned long m, unsigned long k) {
  if (k > m - k) k = m - k;
  mpz_class c = 1;
  for (unsigned long i = 0; i < k; ++i) c = c * (m - i) / (i + 1);
  return c;
}

}  // namespace

std::size_t binomial_cache_row_limit() { return g_cache_row_limit.load(); }

void set_binomial_cache_row_limit(std::size_t rows) { g_cache_row_limit.store(rows); }

mpz_class binomial(unsigned long m, long k) {
  if (k < 0 || static_cast<unsigned long>(k) > m) return 0;
  const auto uk = static_cast<unsigned long>(k);
  if (m >= binomial_cache_row_limit()) return binomial_direct(m, uk);

  RowCache& cache = row_cache();
  {
    std::shared_lock lock(cache.mu);
    auto it = cache.rows.find(m);
    if (it != cache.rows.end()) return it->second[uk];
  }
  std::vector<mpz_class> row = compute_row(m);
  mpz_class result = row[uk];
  {
    std::unique_lock lock(cache.mu);
    cache.rows.emplace(m, std::move(row));
  }
  return result;
}

Rational odd_harmonic(unsigned long j) {
  if (j == 0) throw std::domain_error("odd_harmonic: j must be positive");
  mpq_class s(0);
  for (unsigned long k = 1; k <= j; ++k) s += mpq_class(1UL, 2 * k - 1);
  return Rational(s);
}

namespace {

// Shared body of the two inner sums: sum_k C(2n-1,k) * 2/(2k + shift) where
// shift is the odd integer 2j - 2n + 1 (T) or -2j - 2n + 1 (S).
Rational inner_sum_with_shift(unsigned long n, long shift) {
  const unsigned long m = 2 * n - 1;
  mpz_class c = 1;  // running C(m, k)
  mpq_class s(0);
  for (unsigned long k = 0; k <= m; ++k) {
    mpq_class term(mpz_class(2 * c), mpz_class(2 * static_cast<long>(k) + shift));
    term.canonicalize();
    s += term;
    if (k < m) c = c * (m - k) / (k + 1);
  }
  return Rational(s);
}

}  // namespace

Rational inner_sum_t(unsigned long n, unsigned long j) {
  if (n == 0 || j == 0) throw std::domain_error("inner_sum_t: n, j must be positive");
  return inner_sum_with_shift(n, 2 * static_cast<long>(j) - 2 * static_cast<long>(n) + 1);
}

Rational inner_sum_s(unsigned long n, unsigned long j) {
  if (n == 0 || j == 0) throw std::domain_error("inner_sum_s: n, j must be positive");
  return inner_sum_with_shift(n, -2 * static_cast<long>(j) - 2 * static_cast<long>(n) + 1);
}

SeriesTerm series_term_t(unsigned long n, unsigned long j, mpfr_prec_t precision_bits) {
  Rational inner = inner_sum_t(n, j);
  mpz_class denom = mpz_class(2 * n - 1) << (2 * n - 1);  // 2^(2n-1) * (2n-1)
  Rational exact = inner / Rational(denom);
  BigFloat approx = BigFloat::of(exact, precision_bits);
  return SeriesTerm{n, j, std::move(exact), std::move(approx)};
}

Rational closed_form_t(unsigned long j) {
  if (j == 0) throw std::domain_error("closed_form_t: j must be positive");
  return Rational(2, static_cast<long>(j)) * odd_harmonic(j);
}

Rational closed_form_s(unsigned long j) {
  return -closed_form_t(j);
}

Rational partial_fraction_partial_sum(unsigned long j, unsigned long K) {
  if (j == 0) throw std::domain_error("partial_fraction_partial_sum: j must be positive");
  mpq_class s(0);
  for (unsigned long k = 1; k <= K; ++k) {
    mpz_class d = mpz_class(2 * k - 1) * mpz_class(2 * k + 2 * j - 1);
    mpq_class term(mpz_class(4), d);
    term.canonicalize();
    s += term;
  }
  return Rational(s);
}

Rational telescoped_partial_sum(unsigned long j, unsigned long K) {
  if (j == 0) throw std::domain_error("telescoped_partial_sum: j must be positive");
  if (K < j) return partial_fraction_partial_sum(j, K);
  mpq_class tail(0);
  for (unsigned long k = K + 1; k <= K + j; ++k) tail += mpq_class(1UL, 2 * k - 1);
  mpq_class window = odd_harmonic(j).raw() - tail;
  return Rational(mpq_class(2UL, j)) * Rational(window);
}

}  // namespace sumverify
