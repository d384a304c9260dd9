#include "sumverify/bigfloat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace sumverify {

namespace {

mpfr_prec_t max_prec(const BigFloat& a, const BigFloat& b) {
  return std::max(a.precision(), b.precision());
}

}  // namespace

BigFloat& BigFloat::operator=(const BigFloat& o) {
  if (this != &o) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

BigFloat BigFloat::of(double x, mpfr_prec_t prec) {
  if (!std::isfinite(x)) throw NonFiniteError("BigFloat: non-finite double input");
  BigFloat r(prec);
  mpfr_set_d(r.v_, x, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::of(long x, mpfr_prec_t prec) {
  BigFloat r(prec);
  mpfr_set_si(r.v_, x, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::of(unsigned long x, mpfr_prec_t prec) {
  BigFloat r(prec);
  mpfr_set_ui(r.v_, x, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::of(const Rational& q, mpfr_prec_t prec) {
  BigFloat r(prec);
  mpfr_set_q(r.v_, q.raw().get_mpq_t(), MPFR_RNDN);
  r.check_finite();
  return r;
}

BigFloat BigFloat::pow2(long e, mpfr_prec_t prec) {
  BigFloat r(prec);
  mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::pi(mpfr_prec_t prec) {
  BigFloat r(prec);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::from_string(const std::string& s, mpfr_prec_t prec) {
  BigFloat r(prec);
  if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
    throw std::invalid_argument("BigFloat: cannot parse '" + s + "'");
  r.check_finite();
  return r;
}

BigFloat BigFloat::round_to(mpfr_prec_t prec) const {
  BigFloat r(prec);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

std::string BigFloat::str(size_t digits) const {
  if (digits == 0) digits = decimal_digits_for(precision());
  // %R*e prints one digit before the point; precision counts the rest.
  std::vector<char> buf(digits + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Re", static_cast<int>(digits - 1), v_);
  return std::string(buf.data());
}

BigFloat BigFloat::operator-() const {
  BigFloat r(precision());
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

BigFloat operator+(const BigFloat& a, const BigFloat& b) {
  BigFloat r(max_prec(a, b));
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  r.check_finite();
  return r;
}

BigFloat operator-(const BigFloat& a, const BigFloat& b) {
  BigFloat r(max_prec(a, b));
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  r.check_finite();
  return r;
}

BigFloat operator*(const BigFloat& a, const BigFloat& b) {
  BigFloat r(max_prec(a, b));
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  r.check_finite();
  return r;
}

BigFloat operator/(const BigFloat& a, const BigFloat& b) {
  if (b.is_zero()) throw NonFiniteError("BigFloat: division by zero");
  BigFloat r(max_prec(a, b));
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  r.check_finite();
  return r;
}

BigFloat operator*(const BigFloat& a, unsigned long b) {
  BigFloat r(a.precision());
  mpfr_mul_ui(r.v_, a.v_, b, MPFR_RNDN);
  r.check_finite();
  return r;
}

BigFloat operator/(const BigFloat& a, unsigned long b) {
  if (b == 0) throw NonFiniteError("BigFloat: division by zero");
  BigFloat r(a.precision());
  mpfr_div_ui(r.v_, a.v_, b, MPFR_RNDN);
  r.check_finite();
  return r;
}

BigFloat operator+(const BigFloat& a, unsigned long b) {
  BigFloat r(a.precision());
  mpfr_add_ui(r.v_, a.v_, b, MPFR_RNDN);
  r.check_finite();
  return r;
}

BigFloat operator-(unsigned long a, const BigFloat& b) {
  BigFloat r(b.precision());
  mpfr_ui_sub(r.v_, a, b.v_, MPFR_RNDN);
  r.check_finite();
  return r;
}

BigFloat& BigFloat::operator+=(const BigFloat& b) {
  mpfr_add(v_, v_, b.v_, MPFR_RNDN);
  check_finite();
  return *this;
}

BigFloat& BigFloat::operator-=(const BigFloat& b) {
  mpfr_sub(v_, v_, b.v_, MPFR_RNDN);
  check_finite();
  return *this;
}

BigFloat BigFloat::mul_2exp(long e) const {
  BigFloat r(precision());
  if (e >= 0)
    mpfr_mul_2ui(r.v_, v_, static_cast<unsigned long>(e), MPFR_RNDN);
  else
    mpfr_div_2ui(r.v_, v_, static_cast<unsigned long>(-e), MPFR_RNDN);
  r.check_finite();
  return r;
}

#define SUMVERIFY_UNARY(name, mpfr_fn)             \
  BigFloat name(const BigFloat& a) {               \
    BigFloat r(a.precision());                     \
    mpfr_fn(r.v_, a.v_, MPFR_RNDN);                \
    r.check_finite();                              \
    return r;                                      \
  }

SUMVERIFY_UNARY(abs, mpfr_abs)
SUMVERIFY_UNARY(sqrt, mpfr_sqrt)
SUMVERIFY_UNARY(log, mpfr_log)
SUMVERIFY_UNARY(log1p, mpfr_log1p)
SUMVERIFY_UNARY(exp, mpfr_exp)
SUMVERIFY_UNARY(cosh, mpfr_cosh)
SUMVERIFY_UNARY(sinh, mpfr_sinh)
SUMVERIFY_UNARY(asinh, mpfr_asinh)

#undef SUMVERIFY_UNARY

BigFloat pow_ui(const BigFloat& a, unsigned long e) {
  BigFloat r(a.precision());
  mpfr_pow_ui(r.v_, a.v_, e, MPFR_RNDN);
  r.check_finite();
  return r;
}

BigFloat pow(const BigFloat& a, const BigFloat& e) {
  BigFloat r(max_prec(a, e));
  mpfr_pow(r.v_, a.v_, e.v_, MPFR_RNDN);
  r.check_finite();
  return r;
}

size_t decimal_digits_for(mpfr_prec_t prec) {
  // floor(prec * log10(2)) + 2 digits always round-trip prec bits.
  return static_cast<size_t>(static_cast<double>(prec) * 0.30102999566398119) + 2;
}

}  // namespace sumverify
