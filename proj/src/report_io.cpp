#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "smoothlab/validation.hpp"

namespace smoothlab {

namespace {

using nlohmann::ordered_json;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json jnum(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ordered_json record_json(const ScanRecord& r) {
  ordered_json j;
  j["n"] = r.n;
  j["m"] = r.m;
  j["z"] = r.z ? jnum(*r.z) : ordered_json(nullptr);
  j["upsilon"] = jnum(r.upsilon);
  j["exact"] = jnum(r.exact);
  j["approx"] = jnum(r.approx);
  j["abs_err"] = jnum(r.abs_err);
  j["scaled_err"] = jnum(r.scaled_err);
  j["method"] = to_string(r.method);
  j["mc_ci"] = jnum(r.mc_ci);
  j["variant"] = r.variant;
  return j;
}

ordered_json summary_json(const ScanSummary& s) {
  ordered_json j;
  j["variant"] = s.variant;
  j["sup_scaled_err"] = jnum(s.sup_scaled_err);
  j["max_trend"] = s.max_trend ? jnum(*s.max_trend) : ordered_json(nullptr);
  ordered_json extras = ordered_json::object();
  for (const auto& [k, v] : s.extras) extras[k] = jnum(v);
  j["extras"] = extras;
  return j;
}

ordered_json scan_json(const ScanResult& scan) {
  ordered_json j;
  j["scan"] = scan.scan;
  j["summaries"] = ordered_json::array();
  for (const auto& s : scan.summaries) j["summaries"].push_back(summary_json(s));
  j["warnings"] = scan.warnings;
  j["records"] = ordered_json::array();
  for (const auto& r : scan.records) j["records"].push_back(record_json(r));
  return j;
}

ordered_json check_json(const CheckResult& c) {
  ordered_json j;
  j["name"] = c.name;
  j["pass"] = c.pass;
  j["asserted"] = c.asserted;
  ordered_json metrics = ordered_json::object();
  for (const auto& [k, v] : c.metrics) metrics[k] = jnum(v);
  j["metrics"] = metrics;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

ordered_json suite_json(const SuiteResult& s) {
  ordered_json j;
  j["suite"] = s.suite;
  j["pass"] = s.pass();
  j["checks"] = ordered_json::array();
  for (const auto& c : s.checks) j["checks"].push_back(check_json(c));
  return j;
}

}  // namespace

void write_scan_csv(std::ostream& out, const ScanResult& scan) {
  out << "n,m,z,upsilon,exact,approx,abs_err,scaled_err,method,mc_ci,variant\n";
  for (const auto& r : scan.records) {
    out << r.n << ',' << r.m << ',' << (r.z ? num(*r.z) : std::string()) << ',' << num(r.upsilon)
        << ',' << num(r.exact) << ',' << num(r.approx) << ',' << num(r.abs_err) << ','
        << num(r.scaled_err) << ',' << to_string(r.method) << ',' << num(r.mc_ci) << ','
        << r.variant << '\n';
  }
  for (const auto& s : scan.summaries) {
    out << "# summary variant=" << s.variant << " sup_scaled_err=" << num(s.sup_scaled_err);
    if (s.max_trend) out << " max_trend=" << num(*s.max_trend);
    for (const auto& [k, v] : s.extras) out << ' ' << k << '=' << num(v);
    out << '\n';
  }
  for (const auto& w : scan.warnings) out << "# warning " << w << '\n';
}

std::string scan_to_json(const ScanResult& scan) { return scan_json(scan).dump(2); }

std::string suite_to_json(const SuiteResult& suite) { return suite_json(suite).dump(2); }

std::string report_to_json(const RunAllReport& report) {
  ordered_json j;
  j["pass"] = report.pass();
  j["suites"] = ordered_json::array();
  for (const auto& s : report.suites) j["suites"].push_back(suite_json(s));
  j["scans"] = ordered_json::array();
  for (const auto& s : report.scans) j["scans"].push_back(scan_json(s));
  return j.dump(2);
}

void write_mertens_csv(std::ostream& out, std::span<const MertensRecord> rows) {
  out << "n,lambda,log_n,first_resid,first_bound,second_resid,second_bound,third_scaled_resid,"
         "pi_n,trudgian_resid,trudgian_bound,pass\n";
  for (const auto& r : rows) {
    out << r.n << ',' << num(r.lambda) << ',' << num(r.log_n) << ',' << num(r.first_resid) << ','
        << num(r.first_bound) << ',' << num(r.second_resid) << ',' << num(r.second_bound) << ','
        << num(r.third_scaled_resid) << ',' << r.pi_n << ','
        << (r.trudgian_resid ? num(*r.trudgian_resid) : std::string()) << ','
        << (r.trudgian_bound ? num(*r.trudgian_bound) : std::string()) << ','
        << (r.pass() ? "true" : "false") << '\n';
  }
}

std::string mertens_to_json(std::span<const MertensRecord> rows, double c1) {
  ordered_json j;
  j["c1"] = jnum(c1);
  j["rows"] = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json o;
    o["n"] = r.n;
    o["lambda"] = jnum(r.lambda);
    o["log_n"] = jnum(r.log_n);
    o["first_resid"] = jnum(r.first_resid);
    o["first_bound"] = jnum(r.first_bound);
    o["second_resid"] = jnum(r.second_resid);
    o["second_bound"] = jnum(r.second_bound);
    o["third_scaled_resid"] = jnum(r.third_scaled_resid);
    o["pi_n"] = r.pi_n;
    o["trudgian_resid"] = r.trudgian_resid ? jnum(*r.trudgian_resid) : ordered_json(nullptr);
    o["trudgian_bound"] = r.trudgian_bound ? jnum(*r.trudgian_bound) : ordered_json(nullptr);
    o["pass"] = r.pass();
    j["rows"].push_back(o);
  }
  return j.dump(2);
}

}  // namespace smoothlab
