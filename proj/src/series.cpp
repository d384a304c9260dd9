#include "sumverify/series.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace sumverify {

namespace {

constexpr mpfr_prec_t kGuardBits = 64;

}  // namespace

const char* route_token(Route r) {
  switch (r) {
    case Route::ClosedForm: return "closed";
    case Route::DirectSeries: return "direct";
    case Route::AcceleratedSeries: return "accel";
    case Route::PartialFractionSeries: return "pfrac";
    case Route::IntegralTForm: return "int-t";
    case Route::IntegralWForm: return "int-w";
  }
  return "?";
}

const char* target_token(Target t) { return t == Target::S ? "s" : "t"; }

void SeriesConfig::validate() const {
  if (!(target_tolerance > 0)) throw std::invalid_argument("SeriesConfig: tolerance must be > 0");
  if (max_terms < 4) throw std::invalid_argument("SeriesConfig: max_terms must be >= 4");
  if (precision_bits < kMinPrecisionBits)
    throw std::invalid_argument("SeriesConfig: precision_bits must be >= 64");
  if (!(safety_factor > 0)) throw std::invalid_argument("SeriesConfig: safety_factor must be > 0");
}

// ---------------------------------------------------------------------------
// TermStream
// ---------------------------------------------------------------------------

TermStream::TermStream(unsigned long j, mpfr_prec_t working_prec, unsigned long exact_prefix_terms)
    : j_(j), wp_(working_prec), prefix_(exact_prefix_terms),
      inner_float_(working_prec), term_(working_prec) {
  if (j == 0) throw std::domain_error("TermStream: j must be positive");
  exact_phase_ = prefix_ >= 1;
  // F(1, x_1) = 1/x_1 + 1/(x_1 + 1), x_1 = j - 1/2
  const Rational x1(2 * static_cast<long>(j) - 1, 2);
  const Rational one(1);
  Rational inner = one / x1 + one / (x1 + one);
  if (exact_phase_) {
    inner_exact_ = inner;
  } else {
    inner_float_ = BigFloat::of(inner, wp_);
  }
  refresh_term();
}

void TermStream::refresh_term() {
  // a_n = F(2n-1, x_n) / (2^(2n-1) * (2n-1))
  const unsigned long tn = 2 * n_ - 1;
  if (exact_phase_) {
    exact_term_ = inner_exact_ / Rational(mpz_class(tn) << tn);
    term_ = BigFloat::of(exact_term_, wp_);
  } else {
    term_ = inner_float_.mul_2exp(-static_cast<long>(tn)) / tn;
  }
}

void TermStream::advance() {
  const unsigned long n = n_;
  const long num_x = 2 * (static_cast<long>(j_) - static_cast<long>(n)) + 1;  // 2*x_n
  if (exact_phase_) {
    // v = (2n*u + 4^n) / (2n + x_n); u' = (2^(2n+1) - (2n+1)*v) / (x_n - 1)
    const Rational xn(num_x, 2);
    const Rational four_n(mpz_class(1) << (2 * n));
    Rational v = (Rational(static_cast<long>(2 * n)) * inner_exact_ + four_n) /
                 (Rational(static_cast<long>(2 * n)) + xn);
    Rational u = (Rational(mpz_class(1) << (2 * n + 1)) - Rational(static_cast<long>(2 * n + 1)) * v) /
                 (xn - Rational(1));
    if (n + 1 > prefix_) {
      exact_phase_ = false;
      inner_float_ = BigFloat::of(u, wp_);
    } else {
      inner_exact_ = std::move(u);
    }
  } else {
    // same two steps in BigFloat; all divisors are exact dyadic values
    const BigFloat xn = BigFloat::of(num_x, wp_).mul_2exp(-1);
    const BigFloat den_v = BigFloat::of(2 * static_cast<long>(n + j_) + 1, wp_).mul_2exp(-1);
    const BigFloat den_u = BigFloat::of(num_x - 2, wp_).mul_2exp(-1);
    BigFloat v = (inner_float_ * (2 * n) + BigFloat::pow2(static_cast<long>(2 * n), wp_)) / den_v;
    inner_float_ = (BigFloat::pow2(static_cast<long>(2 * n + 1), wp_) - v * (2 * n + 1)) / den_u;
  }
  ++n_;
  refresh_term();
}

// ---------------------------------------------------------------------------
// Lozenge transforms
// ---------------------------------------------------------------------------

const BigFloat& WynnEpsilonTable::next(const BigFloat& partial_sum) {
  diag_.push_back(partial_sum);
  const std::size_t m = diag_.size();
  if (m == 1) {
    estimate_ = partial_sum;
    return estimate_;
  }
  BigFloat aux2 = BigFloat::of(0L, partial_sum.precision());
  for (std::size_t i = m - 1; i > 0; --i) {
    BigFloat aux1 = aux2;
    aux2 = diag_[i - 1];
    BigFloat diff = diag_[i] - aux2;
    if (diff.is_zero()) {
      // singular lozenge entry: skip the column without perturbation
      breakdown_ = true;
      diag_[i - 1] = aux1;
    } else {
      diag_[i - 1] = aux1 + BigFloat::of(1L, diff.precision()) / diff;
    }
  }
  estimate_ = (m % 2 == 1) ? diag_[0] : diag_[1];
  return estimate_;
}

const BigFloat& WynnRhoTable::next(const BigFloat& partial_sum) {
  diag_.push_back(partial_sum);
  const std::size_t m = diag_.size();
  if (m == 1) {
    estimate_ = partial_sum;
    return estimate_;
  }
  BigFloat aux2 = BigFloat::of(0L, partial_sum.precision());
  for (std::size_t i = m - 1; i > 0; --i) {
    BigFloat aux1 = aux2;
    aux2 = diag_[i - 1];
    BigFloat diff = diag_[i] - aux2;
    if (diff.is_zero()) {
      breakdown_ = true;
      diag_[i - 1] = aux1;
    } else {
      // x_N - x_{i-1} with x_n = n: the lozenge spans m - i points
      diag_[i - 1] = aux1 + BigFloat::of(static_cast<unsigned long>(m - i), diff.precision()) / diff;
    }
  }
  estimate_ = (m % 2 == 1) ? diag_[0] : diag_[1];
  return estimate_;
}

// ---------------------------------------------------------------------------
// Acceleration driver
// ---------------------------------------------------------------------------

AccelerationOutcome accelerate_partial_sums(
    const std::function<std::optional<BigFloat>()>& next_sum,
    double tolerance, mpfr_prec_t precision_bits, Acceleration method) {
  if (method == Acceleration::None)
    throw std::invalid_argument("accelerate_partial_sums: acceleration method is None");
  const mpfr_prec_t wp = precision_bits + kGuardBits;

  WynnEpsilonTable eps(wp);
  WynnRhoTable rho(wp);
  const bool use_eps = method == Acceleration::WynnEpsilon;

  AccelerationOutcome out;
  out.value = BigFloat(precision_bits);

  BigFloat prev_est(wp);
  BigFloat first(wp);
  bool all_equal = true;
  double err = std::numeric_limits<double>::infinity();
  unsigned long m = 0;

  while (auto s = next_sum()) {
    ++m;
    if (m == 1)
      first = *s;
    else if (all_equal && !(*s == first))
      all_equal = false;

    const BigFloat& est = use_eps ? eps.next(*s) : rho.next(*s);
    const bool broke = use_eps ? eps.breakdown() : rho.breakdown();
    if (m >= 2) {
      // diagonal difference plus the working-precision rounding floor
      BigFloat diff = abs(est - prev_est);
      BigFloat floor = abs(est).mul_2exp(-(wp - 8));
      err = (diff + floor).to_double_up();
      if ((m >= 4 && err <= tolerance) || broke) {
        out.value = est.round_to(precision_bits);
        out.error_estimate = err;
        out.terms_used = m;
        out.converged = err <= tolerance;
        out.breakdown = broke;
        if (all_equal) {  // constant input: the transform is an exact fixed point
          out.value = first.round_to(precision_bits);
          out.error_estimate = 0.0;
          out.converged = true;
        }
        return out;
      }
    }
    prev_est = est;
  }

  out.value = prev_est.round_to(precision_bits);
  out.error_estimate = std::isfinite(err) ? err : std::numeric_limits<double>::max();
  out.terms_used = m;
  out.converged = false;
  out.breakdown = use_eps ? eps.breakdown() : rho.breakdown();
  if (all_equal && m >= 1) {
    out.value = first.round_to(precision_bits);
    out.error_estimate = 0.0;
    out.converged = true;
  }
  return out;
}

AccelerationOutcome accelerate_partial_sums(std::span<const BigFloat> partial_sums,
                                            double tolerance, mpfr_prec_t precision_bits,
                                            Acceleration method) {
  std::size_t i = 0;
  return accelerate_partial_sums(
      [&]() -> std::optional<BigFloat> {
        if (i >= partial_sums.size()) return std::nullopt;
        return partial_sums[i++];
      },
      tolerance, precision_bits, method);
}

// ---------------------------------------------------------------------------
// Tail model for plain truncation
// ---------------------------------------------------------------------------

namespace {

class TailFit {
 public:
  explicit TailFit(double safety) : safety_(safety) {}

  void push(unsigned long n, double abs_term) {
    hist_.push_back({n, abs_term});
    if (hist_.size() > 5) hist_.pop_front();
  }

  // Estimated remainder after the last pushed term, scaled by the safety
  // factor. Crude |a_N|*N bound until five terms are available.
  double estimate() const {
    if (hist_.empty()) return std::numeric_limits<double>::infinity();
    const auto [N, aN] = hist_.back();
    if (aN == 0.0) return 0.0;
    if (hist_.size() < 5) return safety_ * aN * static_cast<double>(N);
    const auto [n0, a0] = hist_.front();
    const double ratio = std::pow(aN / a0, 0.25);
    double tail;
    if (ratio < 0.9) {
      tail = aN * ratio / (1.0 - ratio);
    } else {
      tail = aN * static_cast<double>(N) / (fitted_p() - 1.0);
    }
    return safety_ * tail;
  }

  // Log-log slope over the retained window, clamped away from p = 1.
  double fitted_p() const {
    if (hist_.size() < 5) return 0.0;
    const auto [n0, a0] = hist_.front();
    const auto [N, aN] = hist_.back();
    const double p = std::log(a0 / aN) / std::log(static_cast<double>(N) / static_cast<double>(n0));
    return std::max(p, 1.05);
  }

 private:
  double safety_;
  std::deque<std::pair<unsigned long, double>> hist_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Routes
// ---------------------------------------------------------------------------

RouteResult sum_direct(unsigned long j, const SeriesConfig& cfg) {
  cfg.validate();
  if (j == 0) throw std::domain_error("sum_direct: j must be positive");
  const mpfr_prec_t wp = cfg.precision_bits + kGuardBits;

  TermStream stream(j, wp, cfg.exact_prefix_terms);
  Rational sum_exact;
  BigFloat sum(wp);
  bool exact_so_far = true;
  TailFit fit(cfg.safety_factor);

  RouteResult r;
  r.route = Route::DirectSeries;
  r.target = Target::T;

  double est = std::numeric_limits<double>::infinity();
  unsigned long n = 0;
  for (;;) {
    n = stream.n();
    if (const Rational* ex = stream.exact_term()) {
      sum_exact += *ex;
      sum = BigFloat::of(sum_exact, wp);
    } else {
      if (exact_so_far) exact_so_far = false;
      sum += stream.term();
    }
    fit.push(n, abs(stream.term()).to_double());
    est = fit.estimate();
    if (est <= cfg.target_tolerance || n >= cfg.max_terms) break;
    stream.advance();
  }

  r.value = sum.round_to(cfg.precision_bits);
  if (exact_so_far) r.exact_value = sum_exact;
  r.error_estimate = std::isfinite(est) ? est : std::numeric_limits<double>::max();
  r.work = n;
  r.converged = est <= cfg.target_tolerance;
  r.fitted_decay_exponent = fit.fitted_p();
  return r;
}

RouteResult accelerate(unsigned long j, const SeriesConfig& cfg) {
  cfg.validate();
  if (j == 0) throw std::domain_error("accelerate: j must be positive");
  if (cfg.acceleration == Acceleration::None)
    throw std::invalid_argument("accelerate: cfg.acceleration must name a method");
  const mpfr_prec_t wp = cfg.precision_bits + kGuardBits;

  TermStream stream(j, wp, cfg.exact_prefix_terms);
  Rational sum_exact;
  BigFloat sum(wp);
  unsigned long produced = 0;

  auto next_sum = [&]() -> std::optional<BigFloat> {
    if (produced >= cfg.max_terms) return std::nullopt;
    if (produced > 0) stream.advance();
    ++produced;
    if (const Rational* ex = stream.exact_term()) {
      sum_exact += *ex;
      sum = BigFloat::of(sum_exact, wp);
    } else {
      sum += stream.term();
    }
    return sum;
  };

  AccelerationOutcome out =
      accelerate_partial_sums(next_sum, cfg.target_tolerance, cfg.precision_bits, cfg.acceleration);

  RouteResult r;
  r.route = Route::AcceleratedSeries;
  r.target = Target::T;
  r.value = out.value;
  r.error_estimate = out.error_estimate;
  r.work = out.terms_used;
  r.converged = out.converged;
  r.breakdown = out.breakdown;
  return r;
}

RouteResult sum_partial_fractions(unsigned long j, const SeriesConfig& cfg) {
  cfg.validate();
  if (j == 0) throw std::domain_error("sum_partial_fractions: j must be positive");

  // smallest K with 2/(2K+1) <= tolerance, settled exactly after a float guess
  const mpq_class tol_q(cfg.target_tolerance);
  auto bound_ok = [&](unsigned long K) {
    return mpq_class(2UL, 2 * K + 1) <= tol_q;
  };
  unsigned long required;
  const double guess = 1.0 / cfg.target_tolerance - 0.5;
  if (guess >= 9.0e18) {
    required = std::numeric_limits<unsigned long>::max();
  } else {
    required = static_cast<unsigned long>(std::ceil(std::max(guess, 0.0)));
    while (!bound_ok(required)) ++required;
    while (required > 0 && bound_ok(required - 1)) --required;
  }

  const bool converged = required <= cfg.max_terms;
  const unsigned long K = std::min(required, cfg.max_terms);

  Rational exact = telescoped_partial_sum(j, K);

  RouteResult r;
  r.route = Route::PartialFractionSeries;
  r.target = Target::T;
  r.value = BigFloat::of(exact, cfg.precision_bits);
  r.exact_value = std::move(exact);
  // reported bound rounded away from zero so it can never undercut the truth
  r.error_estimate = BigFloat::of(Rational(mpz_class(2), mpz_class(K) * 2 + 1), 64).to_double_up();
  r.work = K;
  r.converged = converged;
  return r;
}

std::vector<SeriesTerm> term_table(unsigned long j, unsigned long N, mpfr_prec_t precision_bits) {
  if (j == 0 || N == 0) throw std::domain_error("term_table: j, N must be positive");
  std::vector<SeriesTerm> out;
  out.reserve(N);
  for (unsigned long n = 1; n <= N; ++n) out.push_back(series_term_t(n, j, precision_bits));
  return out;
}

}  // namespace sumverify
