#include "ceslab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "ceslab/errors.hpp"

namespace ceslab {
namespace {

double parse_real(std::string_view text, std::string_view whole) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidConfig("cannot parse number '" + std::string(whole) + "'");
  }
  return value;
}

std::string strip_spaces(std::string_view text) {
  std::string out;
  for (char c : text)
    if (c != ' ' && c != '\t') out.push_back(c);
  return out;
}

nlohmann::json complex_or_null(std::complex<double> z) {
  if (std::isnan(z.real()) || std::isnan(z.imag())) return nullptr;
  return nlohmann::json::array({z.real(), z.imag()});
}

}  // namespace

std::complex<double> parse_complex(std::string_view text) {
  const std::string s = strip_spaces(text);
  if (s.empty()) throw InvalidConfig("empty complex literal");
  const char last = s.back();
  if (last != 'i' && last != 'j') return {parse_real(s, text), 0.0};

  const std::string_view body(s.data(), s.size() - 1);
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string_view re_text = split == std::string_view::npos ? std::string_view("0") : body.substr(0, split);
  std::string_view im_text = split == std::string_view::npos ? body : body.substr(split);
  double im = 0.0;
  if (im_text.empty() || im_text == "+") {
    im = 1.0;
  } else if (im_text == "-") {
    im = -1.0;
  } else {
    im = parse_real(im_text.front() == '-' ? im_text.substr(1) : im_text, text);
    if (im_text.front() == '-') im = -im;
  }
  return {parse_real(re_text, text), im};
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_complex(std::complex<double> z) {
  const std::string im = format_double(std::abs(z.imag()));
  return format_double(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + im + "i";
}

SpaceTag parse_space(std::string_view text) {
  const std::string s = strip_spaces(text);
  if (s == "linf" || s == "l_inf" || s == "linfty") return SpaceTag::linf();
  if (s == "c0") return SpaceTag::c0();
  if (s == "ces0" || s == "ces:0") return SpaceTag::ces0();
  auto exponent_after = [&](std::size_t prefix) {
    std::string_view rest(s);
    rest.remove_prefix(prefix);
    if (!rest.empty() && rest.front() == ':') rest.remove_prefix(1);
    return parse_real(rest, text);
  };
  if (s.rfind("ces", 0) == 0) return SpaceTag::cesp(exponent_after(3));
  if (s.rfind("lp", 0) == 0) return SpaceTag::lp(exponent_after(2));
  if (s.rfind("l", 0) == 0) return SpaceTag::lp(exponent_after(1));
  throw InvalidConfig("unknown space '" + std::string(text) + "'");
}

std::vector<Index> parse_sizes(std::string_view text) {
  std::vector<Index> out;
  const std::string s = strip_spaces(text);
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = std::min(s.find(',', start), s.size());
    const std::string_view item(s.data() + start, comma - start);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size() || v < 1) {
      throw InvalidConfig("cannot parse size list '" + std::string(text) + "'");
    }
    out.push_back(static_cast<Index>(v));
    start = comma + 1;
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << kSweepCsvHeader << '\n';
  for (std::size_t k = 0; k < result.records.size(); ++k) {
    const SweepRecord& r = result.records[k];
    out << format_double(r.lambda.real()) << ',' << format_double(r.lambda.imag()) << ',' << r.n << ','
        << format_double(r.gamma) << ',' << format_double(r.op_norm_est) << ','
        << format_double(r.reg_norm_est) << ',' << (r.in_disk ? "true" : "false") << ','
        << result.verdict_for(k) << '\n';
  }
}

nlohmann::json sweep_to_json(const SweepResult& result) {
  nlohmann::json records = nlohmann::json::array();
  for (std::size_t k = 0; k < result.records.size(); ++k) {
    const SweepRecord& r = result.records[k];
    records.push_back({{"lambda_re", r.lambda.real()},
                       {"lambda_im", r.lambda.imag()},
                       {"n", r.n},
                       {"gamma", r.gamma},
                       {"op_norm_est", r.op_norm_est},
                       {"reg_norm_est", r.reg_norm_est},
                       {"in_disk", r.in_disk},
                       {"verdict", result.verdict_for(k)}});
  }
  nlohmann::json skipped = nlohmann::json::array();
  for (const auto& s : result.skipped) {
    skipped.push_back({{"lambda_re", s.lambda.real()}, {"lambda_im", s.lambda.imag()}, {"reason", s.reason}});
  }
  return {{"space", result.space.name()}, {"sizes", result.sizes}, {"records", records}, {"skipped", skipped}};
}

SweepResult sweep_from_json(const nlohmann::json& doc) {
  SweepResult out;
  out.space = parse_space(doc.at("space").get<std::string>());
  out.sizes = doc.at("sizes").get<std::vector<Index>>();
  std::vector<std::pair<std::complex<double>, std::string>> verdicts;
  for (const auto& j : doc.at("records")) {
    SweepRecord r;
    r.lambda = {j.at("lambda_re").get<double>(), j.at("lambda_im").get<double>()};
    r.n = j.at("n").get<Index>();
    r.gamma = j.at("gamma").get<double>();
    r.op_norm_est = j.at("op_norm_est").get<double>();
    r.reg_norm_est = j.at("reg_norm_est").get<double>();
    r.in_disk = j.at("in_disk").get<bool>();
    out.records.push_back(r);
    const std::string v = j.at("verdict").get<std::string>();
    if (verdicts.empty() || verdicts.back().first != r.lambda) verdicts.emplace_back(r.lambda, v);
  }
  for (const auto& [lambda, name] : verdicts) {
    GrowthVerdict g{lambda, {}, Verdict::Inconclusive};
    if (name == "bounded") g.verdict = Verdict::Bounded;
    if (name == "growing") g.verdict = Verdict::Growing;
    out.verdicts.push_back(g);
  }
  for (const auto& j : doc.at("skipped")) {
    out.skipped.push_back(
        {{j.at("lambda_re").get<double>(), j.at("lambda_im").get<double>()}, j.at("reason").get<std::string>()});
  }
  return out;
}

nlohmann::json bound_report_to_json(const BoundReport<double>& report) {
  nlohmann::json j = {{"kind", bound_kind_name(report.kind)},
                      {"lambda", complex_or_null(report.lambda)},
                      {"alpha", report.alpha},
                      {"n_max", report.n_max},
                      {"holds", report.holds},
                      {"worst_margin", report.worst_margin},
                      {"witness", {report.witness.first, report.witness.second}}};
  j["constant"] = report.constant ? nlohmann::json(*report.constant) : nlohmann::json(nullptr);
  return j;
}

}  // namespace ceslab
