#ifndef SUMVERIFY_QUADRATURE_HPP
#define SUMVERIFY_QUADRATURE_HPP

#include <vector>

#include "sumverify/series.hpp"

namespace sumverify {

struct EvaluationAtSingularity : std::domain_error {
  using std::domain_error::domain_error;
};

enum class IntegralKind { TForm, WForm };
enum class SingularityType { Logarithmic, AlgebraicIntegrable };

struct EndpointSingularity {
  double endpoint;  // 0 or 1
  SingularityType type;
};

/// One of the two integral representations of T(j) on [0, 1]:
///   TForm: integral of t^(j-1/2) (1+t)^(-1) ((1+t)/sqrt t) log((1+sqrt t)/(1-sqrt t)) dt
///   WForm: integral of 2 w^(2j-1) log((1+w)/(1-w)) dw
/// The substitution w = sqrt(t) maps one onto the other.
struct IntegralRepresentation {
  IntegralKind kind = IntegralKind::WForm;
  unsigned long j = 1;

  static constexpr double interval_lo = 0.0;
  static constexpr double interval_hi = 1.0;

  /// Derived from kind: WForm has a logarithmic endpoint singularity at 1;
  /// TForm has the same at 1 plus the integrable algebraic factor
  /// t^(j-1/2) * t^(-1/2) at 0.
  std::vector<EndpointSingularity> singularities() const;
};

enum class QuadScheme { TanhSinh, AdaptiveGaussKronrod };

struct QuadratureConfig {
  QuadScheme scheme = QuadScheme::TanhSinh;
  mpfr_prec_t precision_bits = 128;
  double target_tolerance = 1e-12;
  unsigned max_levels = 12;          // tanh-sinh refinements
  unsigned max_subdivisions = 4000;  // adaptive panels
  mpfr_prec_t guard_bits = 32;

  mpfr_prec_t working_precision() const { return precision_bits + guard_bits; }
  void validate() const;
};

/// Evaluates the integrand at an interior point, with the complement of the
/// point supplied separately so 1-x enters at full relative precision. The
/// logarithm is always formed as log1p(u) - log(1-u), never as the log of a
/// quotient of nearly cancelling values.
BigFloat integrand_with_complement(const IntegralRepresentation& rep, const BigFloat& x,
                                   const BigFloat& one_minus_x);

/// Convenience form for strictly interior points; throws
/// EvaluationAtSingularity when the point is 0 or 1.
BigFloat integrand(const IntegralRepresentation& rep, const BigFloat& point);

struct TanhSinhDiagnostics {
  BigFloat value;
  std::vector<double> level_differences;
  unsigned long evaluations = 0;
  bool converged = false;
};

/// Tanh-sinh rule on (0,1) for an integrand given as f(x, 1-x). Abscissas and
/// their complements both come directly from the double-exponential
/// transformation, so nodes hug the endpoints at full precision.
TanhSinhDiagnostics tanh_sinh_integrate(
    const std::function<BigFloat(const BigFloat&, const BigFloat&)>& f,
    double tolerance, unsigned max_levels, mpfr_prec_t working_prec);

/// 7-point Gauss / 15-point Kronrod pair at arbitrary precision. The
/// Stieltjes polynomial is solved for exactly in rational arithmetic, nodes
/// are polished by Newton iteration, and weights come from the
/// interpolatory conditions on the Legendre basis.
struct GaussKronrodRule {
  std::vector<BigFloat> nodes;        // 15, ascending, on [-1, 1]
  std::vector<BigFloat> kronrod_weights;  // 15
  std::vector<BigFloat> gauss_weights;    // 7, for nodes at odd positions
};

const GaussKronrodRule& gauss_kronrod_rule(mpfr_prec_t working_prec);

struct AdaptiveDiagnostics {
  BigFloat value;
  double total_error = 0.0;
  unsigned long evaluations = 0;
  unsigned long panels = 0;
  bool converged = false;
};

AdaptiveDiagnostics adaptive_gauss_kronrod_integrate(
    const std::function<BigFloat(const BigFloat&, const BigFloat&)>& f,
    double tolerance, unsigned max_subdivisions, mpfr_prec_t working_prec);

/// Integrates one representation of T(j) with the configured scheme.
RouteResult integrate(const IntegralRepresentation& rep, const QuadratureConfig& cfg);

/// |quadrature of t^(x-1) (1+t)^(2n-1) dt  -  exact sum_k C(2n-1,k)/(k+x)|,
/// the numerical check of the finite binomial-integral identity. Valid for
/// x > 0 only; throws std::domain_error otherwise.
BigFloat binomial_integral_identity_residual(const Rational& x, unsigned long n,
                                             const QuadratureConfig& cfg);

/// |log((1+w)/(1-w)) - 2 sum_{k=1}^{K} w^(2k-1)/(2k-1)| for w in (0,1).
/// Analytically bounded by 2 w^(2K+1) / ((2K+1)(1-w^2)).
BigFloat log_series_truncation_residual(const BigFloat& w, unsigned long K);

}  // namespace sumverify

#endif  // SUMVERIFY_QUADRATURE_HPP
