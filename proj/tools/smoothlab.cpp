// smoothlab command line entry point. Exit codes: 0 success, 1 a verified
// invariant failed, 2 usage or configuration error.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "smoothlab/dickman.hpp"
#include "smoothlab/distance.hpp"
#include "smoothlab/errors.hpp"
#include "smoothlab/prime_tables.hpp"
#include "smoothlab/samplers.hpp"
#include "smoothlab/smooth_core.hpp"
#include "smoothlab/stein.hpp"
#include "smoothlab/validation.hpp"

using namespace smoothlab;
using nlohmann::ordered_json;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

bool parse_on_off(const std::string& s) {
  if (s == "on") return true;
  if (s == "off") return false;
  throw UsageError("expected on or off, got '" + s + "'");
}

DickmanTable dickman_from(const std::string& cache, double u_max, double tol) {
  if (!cache.empty()) return DickmanTable::load(cache);
  return build_dickman(u_max, tol);
}

int finish_suite(const SuiteResult& s, const std::string& out) {
  emit(out, suite_to_json(s));
  return s.pass() ? 0 : 1;
}

struct ScanFlags {
  std::string config;
  std::vector<std::string> sets;
  std::string n_grid, m_grid, z_grid, x_grid, upsilon_grid;
  std::uint64_t mc_count = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string gamma;
  std::string format;
  std::string out;
};

ScanConfig build_config(const ScanFlags& f) {
  ScanConfig cfg;
  if (!f.config.empty()) cfg = load_scan_config(f.config, cfg);
  auto set_if = [&](const char* key, const std::string& v) {
    if (!v.empty()) apply_config_value(cfg, key, v);
  };
  set_if("n_grid", f.n_grid);
  set_if("m_grid", f.m_grid);
  set_if("z_grid", f.z_grid);
  set_if("x_grid", f.x_grid);
  set_if("upsilon_grid", f.upsilon_grid);
  set_if("assert_gamma", f.gamma);
  set_if("format", f.format);
  set_if("out", f.out);
  if (f.mc_count) cfg.mc_count = f.mc_count;
  if (f.seed_given) cfg.seed = f.seed;
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
    apply_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

void add_scan_flags(CLI::App* cmd, ScanFlags& f) {
  cmd->add_option("--config", f.config, "flat key = value config file");
  cmd->add_option("--set", f.sets, "override one config key (key=value)");
  cmd->add_option("--n-grid", f.n_grid, "comma separated n values");
  cmd->add_option("--m-grid", f.m_grid, "comma separated m values");
  cmd->add_option("--z-grid", f.z_grid, "comma separated z values");
  cmd->add_option("--x-grid", f.x_grid, "comma separated x values");
  cmd->add_option("--upsilon-grid", f.upsilon_grid, "fixed upsilon values for trend checks");
  cmd->add_option("--mc-count", f.mc_count, "Monte Carlo sample count (>= 10000)");
  cmd->add_option_function<std::uint64_t>("--seed", [&f](const std::uint64_t& s) {
    f.seed = s;
    f.seed_given = true;
  });
  cmd->add_option("--gamma", f.gamma, "variant asserted by verify all: on|off");
  cmd->add_option("--format", f.format, "csv|json");
  cmd->add_option("--out", f.out, "output path (stdout when omitted)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smoothlab: smooth numbers, harmonic sampling and Dickman approximations"};
  app.require_subcommand(1);

  // mertens
  auto* mertens = app.add_subcommand("mertens", "Mertens-type prime sums on a grid of n");
  std::string mertens_n = "100,1000,10000";
  std::uint64_t mertens_limit = 1'000'000;
  std::string mertens_format = "csv", mertens_out;
  mertens->add_option("--n", mertens_n, "comma separated n values");
  mertens->add_option("--limit", mertens_limit, "prime table limit");
  mertens->add_option("--format", mertens_format)->check(CLI::IsMember({"csv", "json"}));
  mertens->add_option("--out", mertens_out);

  // dickman
  auto* dickman = app.add_subcommand("dickman", "Dickman function table");
  dickman->require_subcommand(1);
  auto* d_eval = dickman->add_subcommand("eval", "evaluate rho at u");
  double d_u = 0.0, d_umax = 20.0, d_tol = 1e-10;
  bool d_integral = false, d_cdf = false;
  std::string d_cache;
  d_eval->add_option("--u", d_u)->required();
  d_eval->add_flag("--integral", d_integral, "also report I[rho](u)");
  d_eval->add_flag("--cdf", d_cdf, "also report e^-gamma I[rho](u)");
  d_eval->add_option("--u-max", d_umax);
  d_eval->add_option("--tol", d_tol);
  d_eval->add_option("--table", d_cache, "load a cached table instead of solving");
  auto* d_table = dickman->add_subcommand("table", "solve and write a table cache");
  std::string d_out;
  d_table->add_option("--u-max", d_umax);
  d_table->add_option("--tol", d_tol);
  d_table->add_option("--out", d_out)->required();

  // psi / psih
  auto* psi = app.add_subcommand("psi", "count m-smooth integers up to n");
  auto* psih = app.add_subcommand("psih", "P[psi(H_n) <= m]");
  std::uint64_t q_n = 0, q_m = 0;
  bool q_raw = false, q_approx = false;
  std::string q_gamma = "off";
  for (auto* c : {psi, psih}) {
    c->add_option("--n", q_n)->required();
    c->add_option("--m", q_m)->required();
    c->add_flag("--raw", q_raw, "print the bare number");
  }
  psih->add_flag("--approx", q_approx, "Dickman approximation instead of the exact value");
  psih->add_option("--gamma", q_gamma, "include the e^-gamma factor: on|off")
      ->check(CLI::IsMember({"on", "off"}));

  // sample
  auto* sample = app.add_subcommand("sample", "draw samples");
  std::string s_kind, s_out, s_method = "quantile";
  std::uint64_t s_n = 0, s_m = 0, s_count = 1'000'000, s_seed = 42;
  sample->add_option("kind", s_kind)->required()->check(
      CLI::IsMember({"harmonic", "harmonic-rej", "dickman", "sm"}));
  sample->add_option("--n", s_n);
  sample->add_option("--m", s_m);
  sample->add_option("--count", s_count);
  sample->add_option("--seed", s_seed);
  sample->add_option("--method", s_method, "Dickman sampler: quantile|perpetuity")
      ->check(CLI::IsMember({"quantile", "perpetuity"}));
  sample->add_option("--out", s_out);

  // verify
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string v_kind, v_out, v_config;
  std::uint64_t v_n = 0, v_m = 1000, v_count = 1'000'000, v_seed = 42;
  bool v_seed_given = false;
  std::vector<std::string> v_sets;
  verify->add_option("kind", v_kind)->required()->check(
      CLI::IsMember({"representation", "tv", "stein", "sizebias", "vm", "all"}));
  verify->add_option("--n", v_n);
  verify->add_option("--m", v_m);
  verify->add_option("--count", v_count);
  verify->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) {
    v_seed = s;
    v_seed_given = true;
  });
  verify->add_option("--config", v_config);
  verify->add_option("--set", v_sets);
  verify->add_option("--out", v_out);

  // scan
  auto* scan = app.add_subcommand("scan", "grid scans of the approximation errors");
  std::string scan_kind;
  ScanFlags sf;
  scan->add_option("kind", scan_kind)->required()->check(
      CLI::IsMember({"main-theorem", "kolmogorov", "debruijn"}));
  add_scan_flags(scan, sf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*mertens) {
      ScanConfig parse;
      apply_config_value(parse, "n_grid", mertens_n);
      const auto table = PrimeTable::build(mertens_limit);
      const auto c1 = estimate_mertens_c1(table);
      const auto rows = mertens_report(table, parse.n_grid, c1.c1);
      if (mertens_format == "csv") {
        std::ostringstream os;
        write_mertens_csv(os, rows);
        emit(mertens_out, os.str());
      } else {
        emit(mertens_out, mertens_to_json(rows, c1.c1));
      }
      return 0;
    }

    if (*dickman) {
      if (*d_table) {
        build_dickman(d_umax, d_tol).save(d_out);
        return 0;
      }
      const DickmanTable t = dickman_from(d_cache, d_umax, d_tol);
      ordered_json j;
      j["u"] = d_u;
      j["rho"] = t.rho(d_u);
      if (d_integral) j["integral"] = t.integral(d_u);
      if (d_cdf) j["cdf"] = t.cdf(d_u);
      emit("", j.dump());
      return 0;
    }

    if (*psi || *psih) {
      const SmoothQuery q(q_n, q_m);
      double value = 0.0;
      if (*psi) {
        value = static_cast<double>(psi_count(LpfSieve::build(q_n), q_n, q_m));
      } else if (q_approx) {
        value = psi_h_prob_approx(build_dickman(), q, parse_on_off(q_gamma)).value;
      } else {
        value = psi_h_prob_exact(LpfSieve::build(q_n), q);
      }
      if (q_raw) {
        emit("", *psi ? std::to_string(static_cast<std::uint64_t>(value)) : num(value));
      } else {
        ordered_json j;
        j["n"] = q.n;
        j["m"] = q.m;
        j["upsilon"] = q.upsilon();
        if (*psi) j["value"] = static_cast<std::uint64_t>(value);
        else j["value"] = value;
        emit("", j.dump());
      }
      return 0;
    }

    if (*sample) {
      const RandomSource base(s_seed);
      std::ostringstream os;
      if (s_kind == "harmonic") {
        if (s_n < 1) throw UsageError("sample harmonic needs --n >= 1");
        const HarmonicDirectSampler h(s_n);
        os << "value\n";
        for (auto v : sample_batch<std::uint64_t>(s_count, base, [&](RandomSource& r) { return h.draw(r); }))
          os << v << '\n';
      } else if (s_kind == "harmonic-rej") {
        if (s_n < 1) throw UsageError("sample harmonic-rej needs --n >= 1");
        const auto table = PrimeTable::build(std::max<std::uint64_t>(s_n, 2));
        const HarmonicRejectionSampler h(table, s_n);
        os << "value,attempts\n";
        for (const auto& d : sample_batch<RejectionDraw>(s_count, base, [&](RandomSource& r) { return h.draw(r); }))
          os << d.product << ',' << d.attempts << '\n';
      } else if (s_kind == "dickman") {
        const auto t = build_dickman();
        const auto method = s_method == "quantile" ? DickmanMethod::kQuantile : DickmanMethod::kPerpetuity;
        os << "value\n";
        for (double v : sample_batch<double>(s_count, base, [&](RandomSource& r) { return sample_dickman(t, r, method); }))
          os << num(v) << '\n';
      } else {
        if (s_m < 2) throw UsageError("sample sm needs --m >= 2");
        const auto table = PrimeTable::build(s_m);
        const SmSampler sm(table, s_m);
        os << "value\n";
        for (double v : sample_batch<double>(s_count, base, [&](RandomSource& r) { return sm.draw(r); }))
          os << num(v) << '\n';
      }
      emit(s_out, os.str());
      return 0;
    }

    if (*verify) {
      ScanConfig cfg;
      if (!v_config.empty()) cfg = load_scan_config(v_config, cfg);
      for (const auto& kv : v_sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
        apply_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
      }
      if (v_seed_given) cfg.seed = v_seed;
      if (v_kind == "all") {
        const RunAllReport rep = run_all(cfg);
        emit(v_out.empty() ? cfg.out : v_out, report_to_json(rep));
        return rep.pass() ? 0 : 1;
      }
      if (v_kind == "representation") {
        if (v_n) {
          cfg.representation_n = v_n;
          cfg.acceptance_n = {v_n};
        }
        cfg.mc_count = v_count;
        cfg.validate();
        const auto table = PrimeTable::build(std::max<std::uint64_t>({cfg.coverage_limit, cfg.representation_n, 2}));
        return finish_suite(representation_suite(table, cfg), v_out);
      }
      if (v_kind == "tv") {
        std::vector<std::uint64_t> ns = v_n ? std::vector<std::uint64_t>{v_n} : cfg.tv_n;
        std::uint64_t top = 21;
        for (auto n : ns) top = std::max(top, n);
        const auto table = PrimeTable::build(top);
        return finish_suite(tv_suite(table, ns), v_out);
      }
      if (v_kind == "stein") {
        cfg.mc_count = v_count;
        cfg.validate();
        DickmanOptions o;
        o.u_max = cfg.u_max;
        o.tol = cfg.dickman_tol;
        return finish_suite(stein_suite(DickmanTable::build(o), cfg), v_out);
      }
      if (v_kind == "sizebias") return finish_suite(sizebias_suite(), v_out);
      // vm
      if (v_m < 2) throw UsageError("verify vm needs --m >= 2");
      const auto table = PrimeTable::build(2 * v_m + 2);
      const std::vector<std::uint64_t> ms{v_m};
      return finish_suite(vm_suite(table, ms), v_out);
    }

    if (*scan) {
      const ScanConfig cfg = build_config(sf);
      Workbench bench(cfg);
      ScanResult r;
      if (scan_kind == "main-theorem") r = scan_main_theorem(cfg, bench);
      else if (scan_kind == "kolmogorov") r = scan_kolmogorov(cfg, bench);
      else r = scan_debruijn(cfg, bench);
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
      if (cfg.format == "json") {
        emit(cfg.out, scan_to_json(r));
      } else {
        std::ostringstream os;
        write_scan_csv(os, r);
        emit(cfg.out, os.str());
      }
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const RangeError& e) {
    std::cerr << "range error: " << e.what() << '\n';
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
