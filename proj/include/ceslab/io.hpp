#pragma once

// Text formats: complex literals, space names, CSV/JSON sweep artifacts and
// JSON bound reports.

#include <complex>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ceslab/bounds.hpp"
#include "ceslab/spaces.hpp"
#include "ceslab/sweep.hpp"

namespace ceslab {

/// Accepts "a+bi", "a-bi", "a", "bi", "i" with optional whitespace and scientific notation.
std::complex<double> parse_complex(std::string_view text);

/// "a+bi" with 17 significant digits per part.
std::string format_complex(std::complex<double> z);

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double x);

/// lp:<p> (also l<p>), linf, c0, ces:<p> (also ces<p>), ces0.
SpaceTag parse_space(std::string_view text);

/// Comma-separated positive integers.
std::vector<Index> parse_sizes(std::string_view text);

inline constexpr const char* kSweepCsvHeader =
    "lambda_re,lambda_im,n,gamma,op_norm_est,reg_norm_est,in_disk,verdict";

void write_sweep_csv(std::ostream& out, const SweepResult& result);

nlohmann::json sweep_to_json(const SweepResult& result);

/// Inverse of sweep_to_json for the numeric fields (records, sizes, skipped points).
SweepResult sweep_from_json(const nlohmann::json& doc);

nlohmann::json bound_report_to_json(const BoundReport<double>& report);

}  // namespace ceslab
