#include "sumverify/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sumverify {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double discrepancy(const BigFloat& value, const Rational& truth) {
  const mpfr_prec_t wp = value.precision() + 32;
  return abs(value.round_to(wp) - BigFloat::of(truth, wp)).to_double_up();
}

Route route_from_token(const std::string& s) {
  if (s == "closed") return Route::ClosedForm;
  if (s == "direct") return Route::DirectSeries;
  if (s == "accel") return Route::AcceleratedSeries;
  if (s == "pfrac") return Route::PartialFractionSeries;
  if (s == "int-t") return Route::IntegralTForm;
  if (s == "int-w") return Route::IntegralWForm;
  throw std::invalid_argument("unknown route token '" + s + "'");
}

}  // namespace

VerificationReport run_all_routes(unsigned long j, double tolerance,
                                  const SeriesConfig& series_cfg,
                                  const QuadratureConfig& quad_cfg, Target target) {
  if (j == 0) throw std::invalid_argument("run_all_routes: j must be positive");
  if (!(tolerance > 0)) throw std::invalid_argument("run_all_routes: tolerance must be > 0");
  series_cfg.validate();
  quad_cfg.validate();

  const Rational truth_t = closed_form_t(j);

  VerificationReport rep;
  rep.j = j;
  rep.target = target;
  rep.tolerance = tolerance;
  rep.ground_truth = target == Target::S ? -truth_t : truth_t;

  // all internal routes compute T; the closed-form route is exact
  RouteResult closed;
  closed.route = Route::ClosedForm;
  closed.target = Target::T;
  closed.value = BigFloat::of(truth_t, series_cfg.precision_bits);
  closed.exact_value = truth_t;
  closed.error_estimate = 0.0;
  closed.work = j;
  closed.converged = true;

  rep.routes.push_back(std::move(closed));
  rep.routes.push_back(sum_direct(j, series_cfg));
  rep.routes.push_back(accelerate(j, series_cfg));
  rep.routes.push_back(sum_partial_fractions(j, series_cfg));
  {
    QuadratureConfig qc = quad_cfg;
    IntegralRepresentation t_form{IntegralKind::TForm, j};
    IntegralRepresentation w_form{IntegralKind::WForm, j};
    rep.routes.push_back(integrate(t_form, qc));
    rep.routes.push_back(integrate(w_form, qc));
  }

  if (target == Target::S) {
    for (RouteResult& r : rep.routes) {
      r.target = Target::S;
      r.value = -r.value;
      if (r.exact_value) r.exact_value = -*r.exact_value;
    }
  }

  bool pass = true;
  double max_disc = 0.0;
  unsigned long total_work = 0;
  for (const RouteResult& r : rep.routes) {
    const double disc = discrepancy(r.value, rep.ground_truth);
    max_disc = std::max(max_disc, disc);
    total_work += r.work;
    if (r.converged && disc > tolerance) pass = false;
    if (disc > r.error_estimate + tolerance) pass = false;
  }
  rep.max_discrepancy = max_disc;
  rep.pass = pass;

  rep.metadata.precision_bits = series_cfg.precision_bits;
  rep.metadata.series_max_terms = series_cfg.max_terms;
  rep.metadata.series_tolerance = series_cfg.target_tolerance;
  rep.metadata.quad_tolerance = quad_cfg.target_tolerance;
  rep.metadata.timestamp = utc_timestamp();
  rep.metadata.total_work = total_work;
  rep.metadata.direct_decay_exponent = rep.routes[1].fitted_decay_exponent;
  return rep;
}

std::vector<VerificationReport> sweep(unsigned long j_min, unsigned long j_max, double tolerance,
                                      const SeriesConfig& series_cfg,
                                      const QuadratureConfig& quad_cfg, Target target) {
  if (j_min == 0 || j_min > j_max)
    throw std::invalid_argument("sweep: need 1 <= j_min <= j_max");
  std::vector<VerificationReport> out;
  out.reserve(j_max - j_min + 1);
  for (unsigned long j = j_min; j <= j_max; ++j)
    out.push_back(run_all_routes(j, tolerance, series_cfg, quad_cfg, target));
  return out;
}

std::string report_to_json(const VerificationReport& rep) {
  ordered_json root;
  root["schema_version"] = kReportSchemaVersion;
  root["j"] = rep.j;
  root["target"] = target_token(rep.target);
  root["tolerance"] = rep.tolerance;
  root["ground_truth"] = rep.ground_truth.str();
  ordered_json routes = ordered_json::array();
  for (const RouteResult& r : rep.routes) {
    ordered_json jr;
    jr["route"] = route_token(r.route);
    jr["value"] = r.value.str();
    jr["exact_value"] = r.exact_value ? ordered_json(r.exact_value->str()) : ordered_json(nullptr);
    jr["error_estimate"] = r.error_estimate;
    jr["work"] = r.work;
    jr["converged"] = r.converged;
    routes.push_back(std::move(jr));
  }
  root["routes"] = std::move(routes);
  root["max_discrepancy"] = rep.max_discrepancy;
  root["verdict"] = rep.pass ? "pass" : "fail";
  return root.dump(2);
}

VerificationReport report_from_json(const std::string& json_text, mpfr_prec_t precision_bits) {
  const ordered_json root = ordered_json::parse(json_text);
  if (root.at("schema_version").get<int>() != kReportSchemaVersion)
    throw std::invalid_argument("report_from_json: unsupported schema version");

  VerificationReport rep;
  rep.j = root.at("j").get<unsigned long>();
  const std::string tgt = root.at("target").get<std::string>();
  if (tgt != "s" && tgt != "t") throw std::invalid_argument("report_from_json: bad target");
  rep.target = tgt == "s" ? Target::S : Target::T;
  rep.tolerance = root.at("tolerance").get<double>();
  rep.ground_truth = Rational::from_string(root.at("ground_truth").get<std::string>());
  for (const auto& jr : root.at("routes")) {
    RouteResult r;
    r.route = route_from_token(jr.at("route").get<std::string>());
    r.target = rep.target;
    r.value = BigFloat::from_string(jr.at("value").get<std::string>(), precision_bits);
    if (!jr.at("exact_value").is_null())
      r.exact_value = Rational::from_string(jr.at("exact_value").get<std::string>());
    r.error_estimate = jr.at("error_estimate").get<double>();
    r.work = jr.at("work").get<unsigned long>();
    r.converged = jr.at("converged").get<bool>();
    rep.routes.push_back(std::move(r));
  }
  rep.max_discrepancy = root.at("max_discrepancy").get<double>();
  rep.pass = root.at("verdict").get<std::string>() == "pass";
  return rep;
}

std::string report_to_text(const VerificationReport& rep) {
  std::ostringstream os;
  os << "identity check  j=" << rep.j << "  target=" << target_token(rep.target)
     << "  tolerance=" << rep.tolerance << "\n";
  os << "ground truth (closed form): " << rep.ground_truth.str() << "\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%-8s %-42s %-12s %-10s %s\n", "route", "value",
                "est.error", "work", "converged");
  os << line;
  for (const RouteResult& r : rep.routes) {
    std::snprintf(line, sizeof(line), "%-8s %-42s %-12.3e %-10lu %s%s\n", route_token(r.route),
                  r.value.str(34).c_str(), r.error_estimate, r.work,
                  r.converged ? "yes" : "no", r.breakdown ? " (lozenge breakdown)" : "");
    os << line;
  }
  os << "max discrepancy vs closed form: ";
  std::snprintf(line, sizeof(line), "%.3e\n", rep.max_discrepancy);
  os << line;
  os << "series decay exponent (fitted): ";
  std::snprintf(line, sizeof(line), "%.4f\n", rep.metadata.direct_decay_exponent);
  os << line;
  os << "precision: " << rep.metadata.precision_bits
     << " bits   total work: " << rep.metadata.total_work << "   at " << rep.metadata.timestamp
     << "\n";
  os << "verdict: " << (rep.pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string convergence_table(unsigned long j, unsigned long N, TableFormat format) {
  if (j == 0 || N == 0) throw std::invalid_argument("convergence_table: j, N must be positive");
  constexpr mpfr_prec_t kPrec = 128;
  constexpr size_t kDigits = 20;

  const Rational truth = closed_form_t(j);
  const std::vector<SeriesTerm> terms = term_table(j, N, kPrec);

  struct Row {
    unsigned long n;
    std::string exact, term, partial, abs_err;
  };
  std::vector<Row> rows;
  rows.reserve(N);
  Rational partial(0);
  for (const SeriesTerm& t : terms) {
    partial += t.exact;
    Row row;
    row.n = t.n;
    row.exact = t.exact.str();
    row.term = t.approx.str(kDigits);
    row.partial = BigFloat::of(partial, kPrec).str(kDigits);
    row.abs_err = BigFloat::of(abs(partial - truth), kPrec).str(kDigits);
    rows.push_back(std::move(row));
  }

  std::ostringstream os;
  switch (format) {
    case TableFormat::Csv:
      os << "n,term_exact,term,partial_sum,abs_error_vs_closed_form\n";
      for (const Row& r : rows)
        os << r.n << "," << r.exact << "," << r.term << "," << r.partial << "," << r.abs_err
           << "\n";
      break;
    case TableFormat::Json: {
      ordered_json root;
      root["j"] = j;
      root["target"] = "t";
      root["ground_truth"] = truth.str();
      ordered_json jrows = ordered_json::array();
      for (const Row& r : rows) {
        ordered_json jr;
        jr["n"] = r.n;
        jr["term_exact"] = r.exact;
        jr["term"] = r.term;
        jr["partial_sum"] = r.partial;
        jr["abs_error"] = r.abs_err;
        jrows.push_back(std::move(jr));
      }
      root["rows"] = std::move(jrows);
      os << root.dump(2) << "\n";
      break;
    }
    case TableFormat::Text: {
      char line[256];
      std::snprintf(line, sizeof(line), "%-6s %-16s %-28s %-28s %s\n", "n", "term_exact", "term",
                    "partial_sum", "abs_error");
      os << line;
      for (const Row& r : rows) {
        std::snprintf(line, sizeof(line), "%-6lu %-16s %-28s %-28s %s\n", r.n, r.exact.c_str(),
                      r.term.c_str(), r.partial.c_str(), r.abs_err.c_str());
        os << line;
      }
      break;
    }
  }
  return os.str();
}

}  // namespace sumverify
