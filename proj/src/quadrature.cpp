#include "sumverify/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <queue>

namespace sumverify {

std::vector<EndpointSingularity> IntegralRepresentation::singularities() const {
  if (kind == IntegralKind::WForm)
    return {{1.0, SingularityType::Logarithmic}};
  return {{0.0, SingularityType::AlgebraicIntegrable}, {1.0, SingularityType::Logarithmic}};
}

void QuadratureConfig::validate() const {
  if (!(target_tolerance > 0))
    throw std::invalid_argument("QuadratureConfig: tolerance must be > 0");
  if (precision_bits < kMinPrecisionBits)
    throw std::invalid_argument("QuadratureConfig: precision_bits must be >= 64");
  if (max_levels < 2 || max_subdivisions < 1)
    throw std::invalid_argument("QuadratureConfig: refinement budget too small");
  // a tolerance below the working precision is allowed: the scheme then runs
  // out of levels and reports converged=false instead of aborting
}

// ---------------------------------------------------------------------------
// Integrands
// ---------------------------------------------------------------------------

BigFloat integrand_with_complement(const IntegralRepresentation& rep, const BigFloat& x,
                                   const BigFloat& one_minus_x) {
  const mpfr_prec_t wp = x.precision();
  if (rep.j == 0) throw std::domain_error("integrand: j must be positive");
  if (rep.kind == IntegralKind::WForm) {
    // 2 w^(2j-1) (log(1+w) - log(1-w))
    const BigFloat lg = log1p(x) - log(one_minus_x);
    return pow_ui(x, 2 * rep.j - 1) * lg * 2ul;
  }
  // TForm, written exactly as the unsimplified product:
  // t^(j-1/2) * (1+t)^(-1) * ((1+t)/sqrt t) * log((1+sqrt t)/(1-sqrt t))
  const BigFloat st = sqrt(x);
  const BigFloat one_minus_st = one_minus_x / (BigFloat::of(1L, wp) + st);
  const BigFloat lg = log1p(st) - log(one_minus_st);
  const BigFloat one_plus_t = BigFloat::of(1L, wp) + x;
  const BigFloat half = BigFloat::of(1L, wp).mul_2exp(-1);
  const BigFloat tpow = pow(x, BigFloat::of(static_cast<long>(rep.j), wp) - half);
  return tpow * (BigFloat::of(1L, wp) / one_plus_t) * (one_plus_t / st) * lg;
}

BigFloat integrand(const IntegralRepresentation& rep, const BigFloat& point) {
  if (point.is_zero() || point == BigFloat::of(1L, point.precision()))
    throw EvaluationAtSingularity("integrand: point must lie strictly inside (0,1)");
  if (point.sign() < 0 || point > 1.0)
    throw std::domain_error("integrand: point outside [0,1]");
  return integrand_with_complement(rep, point, 1ul - point);
}

// ---------------------------------------------------------------------------
// Tanh-sinh
// ---------------------------------------------------------------------------

TanhSinhDiagnostics tanh_sinh_integrate(
    const std::function<BigFloat(const BigFloat&, const BigFloat&)>& f,
    double tolerance, unsigned max_levels, mpfr_prec_t wp) {
  const BigFloat pi = BigFloat::pi(wp);
  const BigFloat ln2 = log(BigFloat::of(2L, wp));
  // complements decay like exp(-pi sinh t); stop once they fall below 2^-(wp+10)
  const double t_max =
      asinh(BigFloat::of(static_cast<unsigned long>(wp + 10), wp) * ln2 / pi).to_double() + 0.1;

  TanhSinhDiagnostics diag;
  diag.value = BigFloat(wp);

  // contribution of the node pair at +-t (one node at t = 0)
  auto node_pair = [&](const BigFloat& t) {
    const BigFloat u = pi.mul_2exp(-1) * sinh(t);
    const BigFloat e = exp(-(u.mul_2exp(1)));            // exp(-2u)
    const BigFloat denom = BigFloat::of(1L, wp) + e;
    const BigFloat w = BigFloat::of(1L, wp) / denom;     // node
    const BigFloat c = e / denom;                        // its complement 1 - w
    const BigFloat weight = pi * cosh(t) * w * c;
    diag.evaluations += t.is_zero() ? 1 : 2;
    if (t.is_zero()) return f(w, c) * weight;
    return (f(w, c) + f(c, w)) * weight;                 // the -t node mirrors to (c, w)
  };

  BigFloat h = BigFloat::of(1L, wp);
  // level 0: all integer multiples of h
  BigFloat sum = node_pair(BigFloat::of(0L, wp));
  for (unsigned long k = 1; static_cast<double>(k) <= t_max; ++k)
    sum += node_pair(BigFloat::of(k, wp) * h);
  BigFloat integral = h * sum;

  double last_diff = std::numeric_limits<double>::infinity();
  for (unsigned level = 1; level <= max_levels; ++level) {
    h = h.mul_2exp(-1);
    BigFloat newsum(wp);
    // odd multiples of the refined step
    for (unsigned long k = 1; static_cast<double>(k) * mpfr_get_d(h.raw(), MPFR_RNDN) <= t_max;
         k += 2)
      newsum += node_pair(BigFloat::of(k, wp) * h);
    BigFloat refined = integral.mul_2exp(-1) + h * newsum;
    last_diff = abs(refined - integral).to_double_up();
    integral = refined;
    diag.level_differences.push_back(last_diff);
    if (diag.level_differences.size() >= 2 && last_diff <= tolerance) {
      diag.converged = true;
      break;
    }
  }
  diag.value = integral;
  return diag;
}

// ---------------------------------------------------------------------------
// Gauss-Kronrod rule construction
// ---------------------------------------------------------------------------

namespace {

using Poly = std::vector<Rational>;  // ascending coefficients

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, Rational(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < b.size(); ++k) out[i + k] += a[i] * b[k];
  return out;
}

Rational poly_integral_sym(const Poly& p) {  // over [-1, 1]
  Rational s(0);
  for (size_t k = 0; k < p.size(); k += 2)
    s += Rational(2) * p[k] / Rational(static_cast<long>(k) + 1);
  return s;
}

std::vector<Poly> legendre_polys(unsigned n_max) {
  std::vector<Poly> P{{Rational(1)}, {Rational(0), Rational(1)}};
  for (unsigned k = 1; k < n_max; ++k) {
    // (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
    Poly next(k + 2, Rational(0));
    for (size_t i = 0; i < P[k].size(); ++i) next[i + 1] = Rational(2 * (long)k + 1) * P[k][i];
    for (size_t i = 0; i < P[k - 1].size(); ++i) next[i] -= Rational((long)k) * P[k - 1][i];
    for (auto& c : next) c /= Rational((long)k + 1);
    P.push_back(std::move(next));
  }
  return P;
}

// Stieltjes polynomial E8 for P7 in the Legendre basis: the even combination
// a0 P0 + a1 P2 + a2 P4 + a3 P6 + P8 orthogonal to x^k P7 for k = 1,3,5,7.
// Exact rational solve; independent of precision.
Poly stieltjes_e8(const std::vector<Poly>& P) {
  constexpr int kUnknowns = 4;
  Rational A[kUnknowns][kUnknowns];
  Rational rhs[kUnknowns];
  const int odd_k[kUnknowns] = {1, 3, 5, 7};
  for (int row = 0; row < kUnknowns; ++row) {
    Poly xk(static_cast<size_t>(odd_k[row]) + 1, Rational(0));
    xk.back() = Rational(1);
    const Poly x_p7 = poly_mul(xk, P[7]);
    for (int col = 0; col < kUnknowns; ++col)
      A[row][col] = poly_integral_sym(poly_mul(P[2 * col], x_p7));
    rhs[row] = -poly_integral_sym(poly_mul(P[8], x_p7));
  }
  // Gaussian elimination, exact
  int perm[kUnknowns] = {0, 1, 2, 3};
  for (int col = 0; col < kUnknowns; ++col) {
    int piv = col;
    while (piv < kUnknowns && A[piv][col].is_zero()) ++piv;
    std::swap(perm[col], perm[piv]);
    for (int c = 0; c < kUnknowns; ++c) std::swap(A[col][c], A[piv][c]);
    std::swap(rhs[col], rhs[piv]);
    for (int r = 0; r < kUnknowns; ++r) {
      if (r == col || A[r][col].is_zero()) continue;
      Rational f = A[r][col] / A[col][col];
      for (int c = 0; c < kUnknowns; ++c) A[r][c] -= f * A[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  Rational a[kUnknowns + 1];
  for (int i = 0; i < kUnknowns; ++i) a[i] = rhs[i] / A[i][i];
  a[kUnknowns] = Rational(1);

  Poly e8(9, Rational(0));
  for (int i = 0; i <= kUnknowns; ++i)
    for (size_t k = 0; k < P[2 * i].size(); ++k) e8[k] += a[i] * P[2 * i][k];
  return e8;
}

BigFloat poly_eval(const Poly& p, const BigFloat& x) {
  BigFloat acc = BigFloat::of(p.back(), x.precision());
  for (size_t i = p.size() - 1; i-- > 0;) acc = acc * x + BigFloat::of(p[i], x.precision());
  return acc;
}

double poly_eval_d(const Poly& p, double x) {
  double acc = p.back().to_double();
  for (size_t i = p.size() - 1; i-- > 0;) acc = acc * x + p[i].to_double();
  return acc;
}

Poly poly_derivative(const Poly& p) {
  Poly d(p.size() - 1, Rational(0));
  for (size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * Rational(static_cast<long>(i));
  return d;
}

// positive roots located by a double-precision scan, polished by Newton
std::vector<BigFloat> positive_roots(const Poly& p, size_t count, mpfr_prec_t wp) {
  const Poly dp = poly_derivative(p);
  std::vector<double> seeds;
  constexpr int kGrid = 4096;
  double prev = poly_eval_d(p, 1.0 / (2.0 * kGrid));
  for (int i = 1; i <= kGrid; ++i) {
    const double x = (i + 0.5) / kGrid;
    const double cur = poly_eval_d(p, std::min(x, 1.0 - 1e-9));
    if ((prev < 0) != (cur < 0)) seeds.push_back(x - 0.5 / kGrid);
    prev = cur;
  }
  if (seeds.size() != count)
    throw std::runtime_error("gauss_kronrod_rule: root bracketing failed");
  std::vector<BigFloat> roots;
  for (double s : seeds) {
    BigFloat x = BigFloat::of(s, wp);
    for (int it = 0; it < 64; ++it) {
      BigFloat step = poly_eval(p, x) / poly_eval(dp, x);
      x -= step;
      if (abs(step) <= abs(x).mul_2exp(-(wp - 4))) break;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

// Solve sum_i w_i P_k(x_i) = 2 delta_{k0}, k = 0..14, by Gaussian elimination.
std::vector<BigFloat> interpolatory_weights(const std::vector<BigFloat>& nodes,
                                            const std::vector<Poly>& P, mpfr_prec_t wp) {
  const size_t n = nodes.size();
  std::vector<std::vector<BigFloat>> M(n, std::vector<BigFloat>(n + 1, BigFloat(wp)));
  for (size_t k = 0; k < n; ++k) {
    for (size_t i = 0; i < n; ++i) M[k][i] = poly_eval(P[k], nodes[i]);
    M[k][n] = BigFloat::of(k == 0 ? 2L : 0L, wp);
  }
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < n; ++r)
      if (abs(M[r][col]) > abs(M[piv][col])) piv = r;
    std::swap(M[col], M[piv]);
    for (size_t r = 0; r < n; ++r) {
      if (r == col || M[r][col].is_zero()) continue;
      BigFloat f = M[r][col] / M[col][col];
      for (size_t c = col; c <= n; ++c) M[r][c] -= f * M[col][c];
    }
  }
  std::vector<BigFloat> w;
  w.reserve(n);
  for (size_t i = 0; i < n; ++i) w.push_back(M[i][n] / M[i][i]);
  return w;
}

GaussKronrodRule build_rule(mpfr_prec_t wp) {
  const std::vector<Poly> P = legendre_polys(15);
  const Poly e8 = stieltjes_e8(P);

  std::vector<BigFloat> gauss_pos = positive_roots(P[7], 3, wp);
  std::vector<BigFloat> kron_pos = positive_roots(e8, 4, wp);

  GaussKronrodRule rule;
  std::vector<BigFloat> pos;
  pos.insert(pos.end(), gauss_pos.begin(), gauss_pos.end());
  pos.insert(pos.end(), kron_pos.begin(), kron_pos.end());
  std::sort(pos.begin(), pos.end());
  for (size_t i = pos.size(); i-- > 0;) rule.nodes.push_back(-pos[i]);
  rule.nodes.push_back(BigFloat::of(0L, wp));
  for (const auto& x : pos) rule.nodes.push_back(x);

  rule.kronrod_weights = interpolatory_weights(rule.nodes, P, wp);

  // Gauss weights 2 / ((1 - x^2) P7'(x)^2) at the odd node positions
  const Poly dp7 = poly_derivative(P[7]);
  for (size_t i = 1; i < rule.nodes.size(); i += 2) {
    const BigFloat& x = rule.nodes[i];
    BigFloat d = poly_eval(dp7, x);
    rule.gauss_weights.push_back(BigFloat::of(2L, wp) /
                                 ((BigFloat::of(1L, wp) - x * x) * d * d));
  }
  return rule;
}

}  // namespace

const GaussKronrodRule& gauss_kronrod_rule(mpfr_prec_t wp) {
  static std::mutex mu;
  static std::map<mpfr_prec_t, GaussKronrodRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(wp);
  if (it == cache.end()) it = cache.emplace(wp, build_rule(wp)).first;
  return it->second;
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod
// ---------------------------------------------------------------------------

namespace {

struct Panel {
  BigFloat a, b;
  BigFloat k15;
  double err;
  unsigned long seq;  // tie-break for deterministic ordering
};

struct PanelWorse {
  bool operator()(const Panel& p, const Panel& q) const {
    if (p.err != q.err) return p.err < q.err;
    return p.seq > q.seq;
  }
};

}  // namespace

AdaptiveDiagnostics adaptive_gauss_kronrod_integrate(
    const std::function<BigFloat(const BigFloat&, const BigFloat&)>& f,
    double tolerance, unsigned max_subdivisions, mpfr_prec_t wp) {
  const GaussKronrodRule& rule = gauss_kronrod_rule(wp);
  AdaptiveDiagnostics diag;
  diag.value = BigFloat(wp);

  unsigned long seq = 0;
  auto evaluate = [&](const BigFloat& a, const BigFloat& b) {
    const BigFloat mid = (a + b).mul_2exp(-1);
    const BigFloat hl = (b - a).mul_2exp(-1);
    BigFloat k15(wp), g7(wp);
    for (size_t i = 0; i < 15; ++i) {
      const BigFloat x = mid + hl * rule.nodes[i];
      const BigFloat fx = f(x, 1ul - x);
      k15 += rule.kronrod_weights[i] * fx;
      if (i % 2 == 1) g7 += rule.gauss_weights[i / 2] * fx;
    }
    k15 = k15 * hl;
    g7 = g7 * hl;
    diag.evaluations += 15;
    return Panel{a, b, k15, abs(k15 - g7).to_double_up(), seq++};
  };

  std::priority_queue<Panel, std::vector<Panel>, PanelWorse> queue;
  queue.push(evaluate(BigFloat::of(0L, wp), BigFloat::of(1L, wp)));
  double total_err = queue.top().err;
  unsigned long panels = 1;

  while (total_err > tolerance && panels < max_subdivisions) {
    Panel worst = queue.top();
    queue.pop();
    total_err -= worst.err;
    const BigFloat mid = (worst.a + worst.b).mul_2exp(-1);
    Panel left = evaluate(worst.a, mid);
    Panel right = evaluate(mid, worst.b);
    total_err += left.err + right.err;
    queue.push(std::move(left));
    queue.push(std::move(right));
    ++panels;
  }

  // fixed ascending-interval summation order
  std::vector<Panel> all;
  all.reserve(panels);
  while (!queue.empty()) {
    all.push_back(queue.top());
    queue.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& p, const Panel& q) { return p.a < q.a; });
  BigFloat total(wp);
  double err_sum = 0.0;
  for (const Panel& p : all) {
    total += p.k15;
    err_sum += p.err;
  }

  diag.value = total;
  diag.total_error = err_sum;
  diag.panels = panels;
  diag.converged = err_sum <= tolerance;
  return diag;
}

// ---------------------------------------------------------------------------
// Route-facing entry points
// ---------------------------------------------------------------------------

RouteResult integrate(const IntegralRepresentation& rep, const QuadratureConfig& cfg) {
  cfg.validate();
  if (rep.j == 0) throw std::domain_error("integrate: j must be positive");
  const mpfr_prec_t wp = cfg.working_precision();
  auto f = [&](const BigFloat& x, const BigFloat& c) {
    return integrand_with_complement(rep, x, c);
  };

  RouteResult r;
  r.route = rep.kind == IntegralKind::TForm ? Route::IntegralTForm : Route::IntegralWForm;
  r.target = Target::T;
  if (cfg.scheme == QuadScheme::TanhSinh) {
    TanhSinhDiagnostics d = tanh_sinh_integrate(f, cfg.target_tolerance, cfg.max_levels, wp);
    r.value = d.value.round_to(cfg.precision_bits);
    r.error_estimate = d.level_differences.empty()
                           ? std::numeric_limits<double>::max()
                           : d.level_differences.back();
    r.work = d.evaluations;
    r.converged = d.converged;
  } else {
    AdaptiveDiagnostics d =
        adaptive_gauss_kronrod_integrate(f, cfg.target_tolerance, cfg.max_subdivisions, wp);
    r.value = d.value.round_to(cfg.precision_bits);
    r.error_estimate = d.total_error;
    r.work = d.evaluations;
    r.converged = d.converged;
  }
  return r;
}

BigFloat binomial_integral_identity_residual(const Rational& x, unsigned long n,
                                             const QuadratureConfig& cfg) {
  cfg.validate();
  if (x.sign() <= 0)
    throw std::domain_error("binomial_integral_identity_residual: x must be > 0");
  if (n == 0) throw std::domain_error("binomial_integral_identity_residual: n must be positive");
  const mpfr_prec_t wp = cfg.working_precision();

  const BigFloat xm1 = BigFloat::of(x - Rational(1), wp);
  const unsigned long m = 2 * n - 1;
  auto f = [&](const BigFloat& t, const BigFloat&) {
    const BigFloat tp = xm1.is_zero() ? BigFloat::of(1L, wp) : pow(t, xm1);
    return tp * pow_ui(BigFloat::of(1L, wp) + t, m);
  };
  TanhSinhDiagnostics d = tanh_sinh_integrate(f, cfg.target_tolerance, cfg.max_levels, wp);

  mpz_class c = 1;
  Rational exact(0);
  for (unsigned long k = 0; k <= m; ++k) {
    exact += Rational(c) / (Rational(static_cast<long>(k)) + x);
    if (k < m) c = c * (m - k) / (k + 1);
  }
  return abs(d.value - BigFloat::of(exact, wp));
}

BigFloat log_series_truncation_residual(const BigFloat& w, unsigned long K) {
  if (w.sign() <= 0 || w >= 1.0)
    throw std::domain_error("log_series_truncation_residual: w must lie in (0,1)");
  if (K == 0) throw std::domain_error("log_series_truncation_residual: K must be positive");
  const mpfr_prec_t wp = w.precision() + 32;

  const BigFloat wf = w.round_to(wp);
  const BigFloat lhs = log1p(wf) - log(1ul - wf);
  const BigFloat w2 = wf * wf;
  BigFloat power = wf;  // w^(2k-1)
  BigFloat sum = wf;
  for (unsigned long k = 2; k <= K; ++k) {
    power = power * w2;
    sum += power / (2 * k - 1);
  }
  return abs(lhs - sum.mul_2exp(1));
}

}  // namespace sumverify
