// sumverify: multi-route verification of S(j) = -(2/j) * sum_{k<=j} 1/(2k-1)
// against its series, partial-fraction, and integral representations.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sumverify/verify.hpp"

namespace {

using namespace sumverify;

struct CommonOpts {
  unsigned long j = 1;
  double tol = 1e-10;
  long precision_bits = 128;
  unsigned long max_terms = 20000;
};

SeriesConfig make_series_cfg(const CommonOpts& o) {
  SeriesConfig cfg;
  cfg.target_tolerance = o.tol;
  cfg.max_terms = o.max_terms;
  cfg.precision_bits = o.precision_bits;
  return cfg;
}

QuadratureConfig make_quad_cfg(const CommonOpts& o) {
  QuadratureConfig cfg;
  cfg.target_tolerance = o.tol;
  cfg.precision_bits = o.precision_bits;
  return cfg;
}

void print_route_result(const RouteResult& r) {
  std::printf("route:          %s\n", route_token(r.route));
  std::printf("target:         %s\n", target_token(r.target));
  std::printf("value:          %s\n", r.value.str().c_str());
  std::printf("exact_value:    %s\n", r.exact_value ? r.exact_value->str().c_str() : "-");
  std::printf("error_estimate: %.6e\n", r.error_estimate);
  std::printf("work:           %lu\n", r.work);
  std::printf("converged:      %s\n", r.converged ? "true" : "false");
  if (r.breakdown) std::printf("note:           lozenge denominator vanished; column skipped\n");
}

RouteResult eval_route(const std::string& route, unsigned long j, Target target,
                       const SeriesConfig& scfg, const QuadratureConfig& qcfg) {
  RouteResult r;
  if (route == "closed") {
    const Rational truth = closed_form_t(j);
    r.route = Route::ClosedForm;
    r.target = Target::T;
    r.value = BigFloat::of(truth, scfg.precision_bits);
    r.exact_value = truth;
    r.converged = true;
    r.work = j;
  } else if (route == "direct") {
    r = sum_direct(j, scfg);
  } else if (route == "accel") {
    r = accelerate(j, scfg);
  } else if (route == "pfrac") {
    r = sum_partial_fractions(j, scfg);
  } else if (route == "int-t") {
    r = integrate(IntegralRepresentation{IntegralKind::TForm, j}, qcfg);
  } else {
    r = integrate(IntegralRepresentation{IntegralKind::WForm, j}, qcfg);
  }
  if (target == Target::S) {
    r.target = Target::S;
    r.value = -r.value;
    if (r.exact_value) r.exact_value = -*r.exact_value;
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-route verifier for the alternating binomial/odd-harmonic identity"};
  app.require_subcommand(1);

  CommonOpts opts;

  // --- eval ---
  auto* eval = app.add_subcommand("eval", "evaluate one route for one j");
  std::string eval_target = "s";
  std::string eval_route_name = "closed";
  eval->add_option("--j", opts.j, "identity parameter")->required()->check(CLI::PositiveNumber);
  eval->add_option("--target", eval_target, "s or t")
      ->check(CLI::IsMember({"s", "t"}));
  eval->add_option("--route", eval_route_name, "route to evaluate")
      ->check(CLI::IsMember({"closed", "direct", "accel", "pfrac", "int-t", "int-w"}));
  eval->add_option("--tol", opts.tol, "target tolerance")->check(CLI::PositiveNumber);
  eval->add_option("--precision-bits", opts.precision_bits, "working precision")
      ->envname("SUMVERIFY_PRECISION_BITS")
      ->check(CLI::Range(64l, 65536l));
  eval->add_option("--max-terms", opts.max_terms, "series term budget")
      ->check(CLI::PositiveNumber);

  // --- verify ---
  auto* verify = app.add_subcommand("verify", "run all routes and compare to the closed form");
  unsigned long j_min = 0, j_max = 0;
  std::string verify_format = "json";
  auto* opt_j = verify->add_option("--j", opts.j, "single j")->check(CLI::PositiveNumber);
  auto* opt_jmin = verify->add_option("--j-min", j_min, "sweep start")->check(CLI::PositiveNumber);
  auto* opt_jmax = verify->add_option("--j-max", j_max, "sweep end")->check(CLI::PositiveNumber);
  verify->add_option("--tol", opts.tol, "verdict tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--precision-bits", opts.precision_bits, "working precision")
      ->envname("SUMVERIFY_PRECISION_BITS")
      ->check(CLI::Range(64l, 65536l));
  verify->add_option("--format", verify_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
  opt_jmin->needs(opt_jmax);
  opt_jmax->needs(opt_jmin);
  opt_j->excludes(opt_jmin);

  // --- table ---
  auto* table = app.add_subcommand("table", "emit the outer-series convergence table");
  unsigned long table_terms = 10;
  std::string table_format = "csv";
  table->add_option("--j", opts.j, "identity parameter")->required()->check(CLI::PositiveNumber);
  table->add_option("--terms", table_terms, "number of rows")
      ->required()
      ->check(CLI::PositiveNumber);
  table->add_option("--format", table_format, "csv, json or text")
      ->check(CLI::IsMember({"csv", "json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*eval) {
      const SeriesConfig scfg = make_series_cfg(opts);
      const QuadratureConfig qcfg = make_quad_cfg(opts);
      const Target target = eval_target == "s" ? Target::S : Target::T;
      print_route_result(eval_route(eval_route_name, opts.j, target, scfg, qcfg));
      return kExitAllPass;
    }

    if (*verify) {
      if (!*opt_j && !*opt_jmin) {
        std::cerr << "verify: need --j or --j-min/--j-max\n";
        return kExitUsage;
      }
      const unsigned long lo = *opt_jmin ? j_min : opts.j;
      const unsigned long hi = *opt_jmin ? j_max : opts.j;
      if (lo > hi) {
        std::cerr << "verify: j-min must not exceed j-max\n";
        return kExitUsage;
      }
      const SeriesConfig scfg = make_series_cfg(opts);
      const QuadratureConfig qcfg = make_quad_cfg(opts);
      const std::vector<VerificationReport> reports =
          sweep(lo, hi, opts.tol, scfg, qcfg, Target::S);

      if (verify_format == "json") {
        if (reports.size() == 1 && !*opt_jmin) {
          std::cout << report_to_json(reports[0]) << "\n";
        } else {
          std::cout << "[\n";
          for (size_t i = 0; i < reports.size(); ++i)
            std::cout << report_to_json(reports[i]) << (i + 1 < reports.size() ? ",\n" : "\n");
          std::cout << "]\n";
        }
      } else {
        for (const auto& rep : reports) std::cout << report_to_text(rep) << "\n";
      }
      const bool all_pass =
          std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
      return all_pass ? kExitAllPass : kExitFail;
    }

    // table
    const TableFormat fmt = table_format == "csv"    ? TableFormat::Csv
                            : table_format == "json" ? TableFormat::Json
                                                     : TableFormat::Text;
    std::cout << convergence_table(opts.j, table_terms, fmt);
    return kExitAllPass;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}
