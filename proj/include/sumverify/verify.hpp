#ifndef SUMVERIFY_VERIFY_HPP
#define SUMVERIFY_VERIFY_HPP

#include <string>
#include <vector>

#include "sumverify/quadrature.hpp"
#include "sumverify/series.hpp"

namespace sumverify {

inline constexpr int kReportSchemaVersion = 1;

// process exit codes for the CLI
inline constexpr int kExitAllPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInternal = 3;  // reserved: closed-form non-convergence

struct ReportMetadata {
  mpfr_prec_t precision_bits = 128;
  unsigned long series_max_terms = 0;
  double series_tolerance = 0.0;
  double quad_tolerance = 0.0;
  std::string timestamp;  // ISO 8601 UTC, informational only
  unsigned long total_work = 0;
  double direct_decay_exponent = 0.0;  // empirical p in a_n(j) ~ c/n^p
};

/// Cross-route comparison for one j against the closed form.
struct VerificationReport {
  unsigned long j = 1;
  Target target = Target::S;
  std::vector<RouteResult> routes;
  Rational ground_truth;      // closed form for the chosen target
  double max_discrepancy = 0.0;  // max over routes of |value - ground truth|
  double tolerance = 0.0;
  bool pass = false;
  ReportMetadata metadata;
};

/// Runs every route for one j and compares against the closed form.
/// Route order: closed, direct, accel, pfrac, int-t, int-w. The verdict is
/// pass iff every converged route lies within `tolerance` of the ground
/// truth and every route lies within its own error estimate plus the
/// tolerance. Per-route non-convergence is reported, never thrown.
VerificationReport run_all_routes(unsigned long j, double tolerance,
                                  const SeriesConfig& series_cfg,
                                  const QuadratureConfig& quad_cfg,
                                  Target target = Target::S);

/// One report per j in [j_min, j_max], ascending. Throws
/// std::invalid_argument when j_min > j_max or j_min == 0.
std::vector<VerificationReport> sweep(unsigned long j_min, unsigned long j_max,
                                      double tolerance, const SeriesConfig& series_cfg,
                                      const QuadratureConfig& quad_cfg,
                                      Target target = Target::S);

/// Schema v1:
/// {schema_version, j, target, tolerance, ground_truth: "p/q",
///  routes: [{route, value: decimal-string, exact_value: "p/q"|null,
///            error_estimate, work, converged}],
///  max_discrepancy, verdict}
/// Exact rationals serialize as base-10 "p/q" strings; BigFloat values as
/// decimal strings with enough digits to reproduce every bit.
std::string report_to_json(const VerificationReport& report);

/// Inverse of report_to_json. `precision_bits` must match the precision the
/// report was produced with for the value fields to round-trip bit-exactly.
VerificationReport report_from_json(const std::string& json_text, mpfr_prec_t precision_bits);

std::string report_to_text(const VerificationReport& report);

enum class TableFormat { Csv, Json, Text };

/// Convergence table for the outer series of T(j): one row per term with the
/// exact value as "p/q", its decimal form, the running partial sum, and the
/// distance to the closed form. Output bytes are deterministic for fixed
/// inputs.
std::string convergence_table(unsigned long j, unsigned long N, TableFormat format);

}  // namespace sumverify

#endif  // SUMVERIFY_VERIFY_HPP
