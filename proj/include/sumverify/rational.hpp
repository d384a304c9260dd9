#ifndef SUMVERIFY_RATIONAL_HPP
#define SUMVERIFY_RATIONAL_HPP

#include <compare>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace sumverify {

/// Exact arbitrary-precision fraction, always stored normalized:
/// denominator > 0 and gcd(|numerator|, denominator) = 1.
class Rational {
 public:
  Rational() : q_(0) {}
  Rational(long n) : q_(n) {}                     // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  Rational(const mpz_class& num, const mpz_class& den);
  explicit Rational(const mpz_class& n) : q_(n) {}
  explicit Rational(const mpq_class& q);

  /// Parses "p/q" or "p" (base 10). Throws std::invalid_argument on bad input.
  static Rational from_string(const std::string& s);

  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }
  const mpq_class& raw() const { return q_; }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }

  /// Canonical base-10 form: "p/q", or just "p" when the denominator is 1.
  std::string str() const { return q_.get_str(); }

  double to_double() const { return q_.get_d(); }

  Rational operator-() const { return Rational(mpq_class(-q_)); }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
         : c > 0 ? std::strong_ordering::greater
                 : std::strong_ordering::equal;
  }

 private:
  mpq_class q_;  // kept canonical
};

Rational abs(const Rational& r);

}  // namespace sumverify

#endif  // SUMVERIFY_RATIONAL_HPP
