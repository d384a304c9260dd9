#ifndef SUMVERIFY_SERIES_HPP
#define SUMVERIFY_SERIES_HPP

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sumverify/exact.hpp"

namespace sumverify {

enum class Route { ClosedForm, DirectSeries, AcceleratedSeries, PartialFractionSeries, IntegralTForm, IntegralWForm };
enum class Target { S, T };
enum class Acceleration { None, WynnEpsilon, WynnRho };

const char* route_token(Route r);    // "closed", "direct", "accel", "pfrac", "int-t", "int-w"
const char* target_token(Target t);  // "s", "t"

struct SeriesConfig {
  double target_tolerance = 1e-10;  // absolute
  unsigned long max_terms = 20000;
  mpfr_prec_t precision_bits = 128;
  Acceleration acceleration = Acceleration::WynnRho;
  double safety_factor = 10.0;           // multiplies the empirical tail estimate
  unsigned long exact_prefix_terms = 64; // partial sums stay in Rational this far

  void validate() const;  // throws std::invalid_argument
};

/// The value of S(j) or T(j) computed by one route. Never thrown away on
/// non-convergence: converged=false with an honest error_estimate instead.
struct RouteResult {
  Route route = Route::ClosedForm;
  Target target = Target::T;
  BigFloat value;
  std::optional<Rational> exact_value;  // present when the route is exact
  double error_estimate = 0.0;
  unsigned long work = 0;  // terms summed or integrand evaluations
  bool converged = false;
  bool breakdown = false;         // acceleration lozenge hit a vanishing denominator
  double fitted_decay_exponent = 0.0;  // direct route only: empirical p in a_n ~ c/n^p
};

/// Streams the outer-series terms a_n(j) in ascending n. The first
/// exact_prefix terms are carried in exact rational arithmetic; beyond that
/// the stream advances a two-step algebraic recurrence for the inner sum in
/// BigFloat at the working precision:
///
///   x_n = j - n + 1/2
///   F(2n, x_n)   = (2n * F(2n-1, x_n) + 4^n) / (2n + x_n)
///   F(2n+1, x_n - 1) = (2^(2n+1) - (2n+1) * F(2n, x_n)) / (x_n - 1)
///
/// where F(m, x) = sum_k C(m,k)/(k+x), so each term costs O(1) instead of
/// O(n). Both steps follow from x*F(m,x) = 2^m - m*F(m-1, x+1) and
/// F(m, x+1) = F(m+1, x) - F(m, x), which hold for every non-pole x; the
/// divisors n+j+1/2 and j-n-1/2 never vanish. Within the exact prefix the
/// same recurrence runs in Rational, so prefix terms are exact.
class TermStream {
 public:
  TermStream(unsigned long j, mpfr_prec_t working_prec, unsigned long exact_prefix_terms);

  unsigned long n() const { return n_; }
  const BigFloat& term() const { return term_; }
  /// Non-null while within the exact prefix.
  const Rational* exact_term() const { return exact_phase_ ? &exact_term_ : nullptr; }
  void advance();

 private:
  void refresh_term();
  void step_exact();

  unsigned long j_;
  mpfr_prec_t wp_;
  unsigned long prefix_;
  unsigned long n_ = 1;
  bool exact_phase_;
  Rational inner_exact_;   // F(2n-1, x_n) while exact
  BigFloat inner_float_;   // the same beyond the prefix
  Rational exact_term_;
  BigFloat term_;
};

/// Wynn's epsilon lozenge over a stream of partial sums (moving counter-
/// diagonal form). A vanishing denominator is skipped without perturbation
/// and flagged.
class WynnEpsilonTable {
 public:
  explicit WynnEpsilonTable(mpfr_prec_t prec) : estimate_(prec) {}
  const BigFloat& next(const BigFloat& partial_sum);
  const BigFloat& estimate() const { return estimate_; }
  bool breakdown() const { return breakdown_; }
  std::size_t size() const { return diag_.size(); }

 private:
  std::vector<BigFloat> diag_;
  BigFloat estimate_;
  bool breakdown_ = false;
};

/// Wynn's rho lozenge with interpolation points x_n = n. Exact on sequences
/// whose tail is a rational function of n, which is what the outer-series
/// partial sums empirically are.
class WynnRhoTable {
 public:
  explicit WynnRhoTable(mpfr_prec_t prec) : estimate_(prec) {}
  const BigFloat& next(const BigFloat& partial_sum);
  const BigFloat& estimate() const { return estimate_; }
  bool breakdown() const { return breakdown_; }
  std::size_t size() const { return diag_.size(); }

 private:
  std::vector<BigFloat> diag_;
  BigFloat estimate_;
  bool breakdown_ = false;
};

struct AccelerationOutcome {
  BigFloat value;
  double error_estimate = 0.0;
  unsigned long terms_used = 0;
  bool converged = false;
  bool breakdown = false;
};

/// Drives a lozenge over successive partial sums pulled from `next_sum`
/// until the diagonal stabilizes within `tolerance` or the supply ends.
/// The estimate difference of the last two diagonal entries, plus a
/// working-precision rounding floor, is the reported error estimate.
AccelerationOutcome accelerate_partial_sums(
    const std::function<std::optional<BigFloat>()>& next_sum,
    double tolerance, mpfr_prec_t precision_bits, Acceleration method);

/// Convenience overload for a precomputed sequence.
AccelerationOutcome accelerate_partial_sums(std::span<const BigFloat> partial_sums,
                                            double tolerance, mpfr_prec_t precision_bits,
                                            Acceleration method);

/// Plain truncation of T(j) = sum_n a_n(j) with an empirical tail estimate:
/// the last few term ratios select a geometric or c/n^p tail model, scaled
/// by cfg.safety_factor. Stops when the estimate drops below tolerance;
/// reports converged=false (never throws) when the budget runs out first.
RouteResult sum_direct(unsigned long j, const SeriesConfig& cfg);

/// Sequence acceleration of the same partial sums (route AcceleratedSeries).
RouteResult accelerate(unsigned long j, const SeriesConfig& cfg);

/// Sums 4 * sum_k 1/((2k-1)(2k+2j-1)) with the exact telescoped tail bound
/// 2/(2K+1) as the error estimate, stopping at the smallest conforming K.
/// The partial sum itself is exact for any K via the telescoped window.
RouteResult sum_partial_fractions(unsigned long j, const SeriesConfig& cfg);

/// Terms a_1..a_N with exact and approx fields, by the defining inner-sum
/// formula (cost O(n) rational operations per term).
std::vector<SeriesTerm> term_table(unsigned long j, unsigned long N, mpfr_prec_t precision_bits);

}  // namespace sumverify

#endif  // SUMVERIFY_SERIES_HPP
