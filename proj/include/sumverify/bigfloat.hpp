#ifndef SUMVERIFY_BIGFLOAT_HPP
#define SUMVERIFY_BIGFLOAT_HPP

#include <compare>
#include <stdexcept>
#include <string>
#include <utility>

#include <mpfr.h>

#include "sumverify/rational.hpp"

namespace sumverify {

/// Raised when an arithmetic result is NaN or infinite. Finite-in, finite-out
/// is an invariant of every BigFloat operation.
struct NonFiniteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr mpfr_prec_t kMinPrecisionBits = 64;

/// Arbitrary-precision binary float with explicit precision in bits.
/// Binary operations round to the larger of the two operand precisions.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = 128) { init(prec); mpfr_set_zero(v_, 1); }
  BigFloat(const BigFloat& o) { init(mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  BigFloat(BigFloat&& o) noexcept {
    init(mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(const BigFloat& o);
  BigFloat& operator=(BigFloat&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
  ~BigFloat() { mpfr_clear(v_); }

  static BigFloat of(double x, mpfr_prec_t prec);
  static BigFloat of(long x, mpfr_prec_t prec);
  static BigFloat of(unsigned long x, mpfr_prec_t prec);
  /// Correctly rounded conversion of an exact rational.
  static BigFloat of(const Rational& q, mpfr_prec_t prec);
  /// Exact 2^e.
  static BigFloat pow2(long e, mpfr_prec_t prec);
  static BigFloat pi(mpfr_prec_t prec);
  /// Parses a base-10 string at the given precision.
  static BigFloat from_string(const std::string& s, mpfr_prec_t prec);

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  /// Correctly rounded copy at a new precision.
  BigFloat round_to(mpfr_prec_t prec) const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// Rounded away from zero; safe for error bounds reported as doubles.
  double to_double_up() const { return mpfr_get_d(v_, MPFR_RNDA); }

  /// Scientific notation with the given number of significant digits
  /// (0 = enough digits to make the conversion value-preserving).
  std::string str(size_t digits = 0) const;

  BigFloat operator-() const;

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b);

  friend BigFloat operator*(const BigFloat& a, unsigned long b);
  friend BigFloat operator/(const BigFloat& a, unsigned long b);
  friend BigFloat operator+(const BigFloat& a, unsigned long b);
  friend BigFloat operator-(unsigned long a, const BigFloat& b);

  BigFloat& operator+=(const BigFloat& b);
  BigFloat& operator-=(const BigFloat& b);

  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::strong_ordering operator<=>(const BigFloat& a, const BigFloat& b) {
    const int c = mpfr_cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
         : c > 0 ? std::strong_ordering::greater
                 : std::strong_ordering::equal;
  }
  friend bool operator<(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
  friend bool operator<=(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) <= 0; }
  friend bool operator>(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }
  friend bool operator>=(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) >= 0; }

  /// Exact scaling by powers of two.
  BigFloat mul_2exp(long e) const;

  friend BigFloat abs(const BigFloat& a);
  friend BigFloat sqrt(const BigFloat& a);
  friend BigFloat log(const BigFloat& a);
  friend BigFloat log1p(const BigFloat& a);
  friend BigFloat exp(const BigFloat& a);
  friend BigFloat cosh(const BigFloat& a);
  friend BigFloat sinh(const BigFloat& a);
  friend BigFloat asinh(const BigFloat& a);
  friend BigFloat pow_ui(const BigFloat& a, unsigned long e);
  friend BigFloat pow(const BigFloat& a, const BigFloat& e);

  mpfr_srcptr raw() const { return v_; }

 private:
  void init(mpfr_prec_t prec) {
    if (prec < kMinPrecisionBits)
      throw std::invalid_argument("BigFloat: precision below 64 bits");
    mpfr_init2(v_, prec);
  }
  void check_finite() const {
    if (!mpfr_number_p(v_)) throw NonFiniteError("BigFloat: non-finite result");
  }

  mpfr_t v_;
};

/// Significant decimal digits that guarantee a value-preserving round trip
/// for the given binary precision.
size_t decimal_digits_for(mpfr_prec_t prec);

}  // namespace sumverify

#endif  // SUMVERIFY_BIGFLOAT_HPP
