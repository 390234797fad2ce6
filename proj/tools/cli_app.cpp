#include "cli_app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "ceslab/bounds.hpp"
#include "ceslab/errors.hpp"
#include "ceslab/io.hpp"
#include "ceslab/resolvent.hpp"
#include "ceslab/spectra.hpp"
#include "ceslab/sweep.hpp"

namespace ceslab::cli {
namespace {

constexpr double kResidualLimit = 1e-9;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

std::optional<std::string> flag_value(const std::vector<std::string>& args, const std::string& flag) {
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == flag && k + 1 < args.size()) return args[k + 1];
    if (args[k].rfind(flag + "=", 0) == 0) return args[k].substr(flag.size() + 1);
  }
  return std::nullopt;
}

/// Config entries become flags unless the same flag was given explicitly.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  if (args.empty() || args.front() != "sweep") return args;
  const auto path = flag_value(args, "--config");
  if (!path) return args;
  for (const auto& [key, value] : read_flat_config(*path)) {
    const std::string flag = "--" + key;
    if (key == "config" || has_flag(args, flag)) continue;
    if (key == "point") {
      std::stringstream points(value);
      std::string p;
      while (std::getline(points, p, ';')) args.push_back(flag + "=" + trim(p));
    } else {
      args.push_back(flag + "=" + value);
    }
  }
  return args;
}

NormEstimateOptions<double> estimate_options(int restarts, int iterations, double tol, std::uint64_t seed) {
  NormEstimateOptions<double> o;
  o.restarts = restarts;
  o.max_iterations = iterations;
  o.relative_tolerance = tol;
  o.seed = seed;
  return o;
}

int cmd_verify(const std::string& lambda_text, Index n, std::ostream& out, std::ostream& err) {
  const std::complex<double> lambda = parse_complex(lambda_text);
  const auto d = sigma_zero_distance(lambda);
  if (d.distance <= kSigmaZeroThreshold) {
    err << "lambda within 1e-9 of " << sigma_zero_point_name(d.nearest) << " ∈ Σ0\n";
    return kPrecondition;
  }
  const double res = residual(lambda, n);
  const bool ok = res <= kResidualLimit;
  out << "lambda   = " << format_complex(lambda) << '\n'
      << "n        = " << n << '\n'
      << "alpha    = " << format_double(reciprocal_real_part(lambda)) << '\n'
      << "gamma    = " << format_double(d.distance) << '\n'
      << "residual = " << format_double(res) << '\n'
      << "result   = " << (ok ? "ok" : "FAIL") << " (limit 1e-09)\n";
  return ok ? kOk : kFailure;
}

struct BoundsArgs {
  std::string kind;
  std::optional<std::string> lambda;
  std::optional<double> alpha;
  std::optional<double> t;
  Index n = 1000;
  double b = 2.0;
  std::optional<Index> horizon;
};

std::optional<std::complex<double>> bounds_lambda(const BoundsArgs& a) {
  if (a.lambda) return parse_complex(*a.lambda);
  if (a.alpha && a.t) return gamma_circle_point(*a.alpha, *a.t);
  return std::nullopt;
}

int cmd_bounds(const BoundsArgs& a, std::ostream& out, std::ostream& err) {
  const auto lambda = bounds_lambda(a);
  nlohmann::json report;
  bool holds = false;

  if (a.kind == "profile_38") {
    if (!lambda) {
      err << "profile_38 needs --lambda (or --alpha with --t)\n";
      return kPrecondition;
    }
    const auto profile = product_profile(*lambda, a.n);
    const Index horizon = a.horizon.value_or(std::max<Index>(1, a.n / 10));
    const auto band = profile_band_check(profile, horizon);
    holds = band.holds;
    report = {{"kind", a.kind},          {"lambda", {lambda->real(), lambda->imag()}},
              {"alpha", profile.alpha},  {"n_max", a.n},
              {"horizon", horizon},      {"p_hat", band.p_hat},
              {"q_hat", band.q_hat},     {"window_min", band.window_min},
              {"window_max", band.window_max}, {"holds", holds}};
  } else if (a.kind == "remark41") {
    if (!lambda) {
      err << "remark41 needs --lambda (or --alpha with --t)\n";
      return kPrecondition;
    }
    const auto [alpha_below, outside] = remark41(*lambda, a.b);
    holds = alpha_below == outside;
    report = {{"kind", a.kind},
              {"lambda", {lambda->real(), lambda->imag()}},
              {"b", a.b},
              {"alpha", reciprocal_real_part(*lambda)},
              {"alpha_below_inverse_b", alpha_below},
              {"outside_disk", outside},
              {"holds", holds}};
  } else {
    const auto kind = parse_bound_kind(a.kind);
    if (!kind) {
      err << "unknown bound kind '" << a.kind << "'\n";
      return kFailure;
    }
    BoundReport<double> r;
    if (*kind == BoundKind::RowSum || *kind == BoundKind::ColumnLimit) {
      std::optional<double> alpha = a.alpha;
      if (!alpha && lambda) alpha = reciprocal_real_part(*lambda);
      if (!alpha) {
        err << a.kind << " needs --alpha (or --lambda)\n";
        return kPrecondition;
      }
      r = check_comparison_bounds(*alpha, a.n, *kind);
    } else {
      if (!lambda) {
        err << a.kind << " needs --lambda (or --alpha with --t)\n";
        return kPrecondition;
      }
      r = check_entry_bounds(*lambda, a.n, *kind);
    }
    holds = r.holds;
    report = bound_report_to_json(r);
  }
  out << report.dump(2) << '\n';
  return holds ? kOk : kFailure;
}

struct SweepArgs {
  std::string space = "l2";
  std::optional<double> re_min, re_max, im_min, im_max, step;
  std::vector<std::string> points;
  std::string sizes = "128,512";
  std::uint64_t seed = 0x5eed;
  std::string output = "-";
  std::string format = "csv";
  int restarts = 5;
  int iterations = 200;
  double tolerance = 1e-10;
  double growing = 1.5;
  double bounded = 1.1;
  unsigned threads = 0;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  SweepGrid grid;
  const bool any_rect = a.re_min || a.re_max || a.im_min || a.im_max || a.step;
  if (any_rect) {
    if (!(a.re_min && a.re_max && a.im_min && a.im_max && a.step)) {
      throw InvalidConfig("a grid rectangle needs re-min, re-max, im-min, im-max and step");
    }
    grid.rect = GridRect{*a.re_min, *a.re_max, *a.im_min, *a.im_max, *a.step};
  }
  for (const auto& p : a.points) grid.points.push_back(parse_complex(p));
  if (a.format != "csv" && a.format != "json") throw InvalidConfig("format must be csv or json");

  SweepOptions options;
  options.estimate = estimate_options(a.restarts, a.iterations, a.tolerance, a.seed);
  options.thresholds = {a.growing, a.bounded};
  options.threads = a.threads;
  const SweepResult result = sweep(parse_space(a.space), grid, parse_sizes(a.sizes), options);

  std::ostringstream body;
  if (a.format == "csv") {
    write_sweep_csv(body, result);
  } else {
    body << sweep_to_json(result).dump(2) << '\n';
  }
  if (a.output == "-") {
    out << body.str();
  } else {
    std::ofstream file(a.output, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "cannot open output '" << a.output << "' for writing\n";
      return kFailure;
    }
    file << body.str();
    if (!file.flush()) {
      err << "failed writing '" << a.output << "'\n";
      return kFailure;
    }
  }
  for (const auto& s : result.skipped) err << "skipped lambda=" << format_complex(s.lambda) << ": " << s.reason << '\n';
  err << result.records.size() << " records, " << result.skipped.size() << " skipped\n";
  return kOk;
}

int cmd_norms(const std::string& spaces, const std::string& sizes, const std::string& format,
              const NormEstimateOptions<double>& opts, std::ostream& out) {
  std::vector<SpaceTag> tags;
  std::stringstream list(spaces);
  std::string item;
  while (std::getline(list, item, ',')) tags.push_back(parse_space(item));
  const auto ns = parse_sizes(sizes);
  nlohmann::json rows = nlohmann::json::array();
  if (format == "csv") out << "space,n,op_norm_est,upper,exact,limit\n";
  for (const auto& space : tags) {
    for (Index n : ns) {
      const auto est = operator_norm_estimate(space, cesaro_matrix<double>(n), opts);
      const double limit = space.dual();
      if (format == "csv") {
        out << space.name() << ',' << n << ',' << format_double(est.value) << ',' << format_double(est.upper)
            << ',' << (est.exact ? "true" : "false") << ',' << format_double(limit) << '\n';
      } else {
        rows.push_back({{"space", space.name()},
                        {"n", n},
                        {"op_norm_est", est.value},
                        {"upper", est.upper},
                        {"exact", est.exact},
                        {"limit", limit}});
      }
    }
  }
  if (format != "csv") out << rows.dump(2) << '\n';
  return kOk;
}

}  // namespace

std::map<std::string, std::string> read_flat_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot read config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidConfig(path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cesaro operator resolvents, bounds and spectral sweeps", "ceslab"};
  app.require_subcommand(1);

  std::string lambda_text;
  Index verify_n = 256;
  auto* verify = app.add_subcommand("verify", "Residual check of the closed-form resolvent");
  verify->add_option("--lambda", lambda_text, "Spectral parameter, e.g. 2+1i")->required();
  verify->add_option("--n", verify_n, "Truncation size")->check(CLI::PositiveNumber);

  BoundsArgs bargs;
  auto* bounds = app.add_subcommand("bounds", "Entrywise bound checks, JSON report on stdout");
  bounds->add_option("--kind", bargs.kind,
                     "diag_36 | alpha_43 | rowsum_46 | collimit_49 | rho1_54 | gamma_56 | profile_38 | remark41")
      ->required();
  bounds->add_option("--lambda", bargs.lambda, "Spectral parameter");
  bounds->add_option("--alpha", bargs.alpha, "Re(1/lambda); with --t selects lambda = 1/(alpha + i t)");
  bounds->add_option("--t", bargs.t, "Circle parameter");
  bounds->add_option("--n", bargs.n, "Truncation size / horizon")->check(CLI::PositiveNumber);
  bounds->add_option("--b", bargs.b, "Disk parameter for remark41");
  bounds->add_option("--horizon", bargs.horizon, "Calibration horizon for profile_38");

  SweepArgs sargs;
  auto* sweep_cmd = app.add_subcommand("sweep", "Resolvent norm sweep over a lambda grid");
  sweep_cmd->add_option("--config", "Flat key = value file; flags override it");
  sweep_cmd->add_option("--space", sargs.space, "lp:<p>, l2, linf, c0, ces:<p>, ces0");
  sweep_cmd->add_option("--re-min", sargs.re_min);
  sweep_cmd->add_option("--re-max", sargs.re_max);
  sweep_cmd->add_option("--im-min", sargs.im_min);
  sweep_cmd->add_option("--im-max", sargs.im_max);
  sweep_cmd->add_option("--step", sargs.step);
  sweep_cmd->add_option("--point", sargs.points, "Explicit lambda (repeatable)");
  sweep_cmd->add_option("--sizes", sargs.sizes, "Ascending truncation sizes, comma separated");
  sweep_cmd->add_option("--seed", sargs.seed);
  sweep_cmd->add_option("--output", sargs.output, "Output path, - for stdout");
  sweep_cmd->add_option("--format", sargs.format, "csv | json");
  sweep_cmd->add_option("--restarts", sargs.restarts);
  sweep_cmd->add_option("--iterations", sargs.iterations);
  sweep_cmd->add_option("--tolerance", sargs.tolerance);
  sweep_cmd->add_option("--growing-threshold", sargs.growing);
  sweep_cmd->add_option("--bounded-threshold", sargs.bounded);
  sweep_cmd->add_option("--threads", sargs.threads, "Worker count (0: CESLAB_THREADS or hardware)");

  std::string norm_spaces = "l2,lp:3,linf,c0,ces:2,ces0";
  std::string norm_sizes = "64,256,1024";
  std::string norm_format = "csv";
  int norm_restarts = 5;
  std::uint64_t norm_seed = 0x5eed;
  auto* norms = app.add_subcommand("norms", "Operator norm table of the Cesaro sections");
  norms->add_option("--spaces", norm_spaces);
  norms->add_option("--sizes", norm_sizes);
  norms->add_option("--format", norm_format)->check(CLI::IsMember({"csv", "json"}));
  norms->add_option("--restarts", norm_restarts);
  norms->add_option("--seed", norm_seed);

  try {
    std::vector<std::string> args = merge_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kFailure;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kFailure;
  }

  try {
    if (verify->parsed()) return cmd_verify(lambda_text, verify_n, out, err);
    if (bounds->parsed()) return cmd_bounds(bargs, out, err);
    if (sweep_cmd->parsed()) return cmd_sweep(sargs, out, err);
    if (norms->parsed()) {
      return cmd_norms(norm_spaces, norm_sizes, norm_format, estimate_options(norm_restarts, 200, 1e-10, norm_seed),
                       out);
    }
  } catch (const LambdaInSigmaZero& e) {
    err << e.what() << '\n';
    return kPrecondition;
  } catch (const WrongRegime& e) {
    err << e.what() << '\n';
    return kPrecondition;
  } catch (const UnsupportedParameter& e) {
    err << e.what() << '\n';
    return kPrecondition;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace ceslab::cli
