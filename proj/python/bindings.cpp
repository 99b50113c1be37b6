#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "smoothlab/dickman.hpp"
#include "smoothlab/distance.hpp"
#include "smoothlab/errors.hpp"
#include "smoothlab/prime_tables.hpp"
#include "smoothlab/samplers.hpp"
#include "smoothlab/smooth_core.hpp"
#include "smoothlab/stein.hpp"
#include "smoothlab/validation.hpp"

namespace py = pybind11;
using namespace smoothlab;

namespace {

ScanConfig config_from(const py::dict& overrides) {
  ScanConfig cfg;
  for (auto item : overrides) {
    const std::string key = py::str(item.first);
    py::handle v = item.second;
    std::string text;
    if (py::isinstance<py::list>(v) || py::isinstance<py::tuple>(v)) {
      for (auto e : v) {
        if (!text.empty()) text += ",";
        text += py::str(e).cast<std::string>();
      }
    } else if (py::isinstance<py::bool_>(v)) {
      text = v.cast<bool>() ? "on" : "off";
    } else {
      text = py::str(v);
    }
    apply_config_value(cfg, key, text);
  }
  cfg.validate();
  return cfg;
}

py::dict record_dict(const ScanRecord& r) {
  py::dict d;
  d["n"] = r.n;
  d["m"] = r.m;
  d["z"] = r.z ? py::cast(*r.z) : py::none();
  d["upsilon"] = r.upsilon;
  d["exact"] = r.exact;
  d["approx"] = r.approx;
  d["abs_err"] = r.abs_err;
  d["scaled_err"] = r.scaled_err;
  d["method"] = to_string(r.method);
  d["mc_ci"] = r.mc_ci;
  d["variant"] = r.variant;
  return d;
}

py::list records(const ScanResult& s) {
  py::list out;
  for (const auto& r : s.records) out.append(record_dict(r));
  return out;
}

DickmanMethod method_from(const std::string& name) {
  if (name == "quantile") return DickmanMethod::kQuantile;
  if (name == "perpetuity") return DickmanMethod::kPerpetuity;
  throw UsageError("method must be quantile or perpetuity");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "smooth numbers, harmonic sampling and Dickman approximations";

  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_IndexError);
  py::register_exception<SolverFailure>(m, "SolverFailure", PyExc_RuntimeError);
  py::register_exception<InfeasibleExact>(m, "InfeasibleExact", PyExc_RuntimeError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_RuntimeError);

  py::class_<PrimeTable>(m, "PrimeTable")
      .def_static("build", &PrimeTable::build, py::arg("limit"), py::arg("max_limit") = kMaxPrimeLimit)
      .def_property_readonly("limit", &PrimeTable::limit)
      .def("primes", [](const PrimeTable& t) {
        auto p = t.primes();
        return std::vector<std::uint64_t>(p.begin(), p.end());
      })
      .def("count_upto", &PrimeTable::count_upto)
      .def("lambda_", &PrimeTable::lambda, py::arg("m"))
      .def("reciprocal_sum", &PrimeTable::reciprocal_sum)
      .def("euler_product", &PrimeTable::euler_product)
      .def("next_prime", &PrimeTable::next_prime);
  m.def("build_prime_table", &build_prime_table, py::arg("limit"));
  m.def("harmonic", [](std::uint64_t n) { return harmonic(n); }, py::arg("n"));
  m.def("mertens_report", [](const PrimeTable& t, const std::vector<std::uint64_t>& grid) {
    const auto c1 = estimate_mertens_c1(t);
    py::list out;
    for (const auto& r : mertens_report(t, grid, c1.c1)) {
      py::dict d;
      d["n"] = r.n;
      d["lambda"] = r.lambda;
      d["log_n"] = r.log_n;
      d["first_resid"] = r.first_resid;
      d["first_bound"] = r.first_bound;
      d["second_resid"] = r.second_resid;
      d["second_bound"] = r.second_bound;
      d["third_scaled_resid"] = r.third_scaled_resid;
      d["pi_n"] = r.pi_n;
      d["trudgian_resid"] = r.trudgian_resid ? py::cast(*r.trudgian_resid) : py::none();
      d["trudgian_bound"] = r.trudgian_bound ? py::cast(*r.trudgian_bound) : py::none();
      d["pass"] = r.pass();
      out.append(d);
    }
    return out;
  });

  py::class_<DickmanTable>(m, "DickmanTable")
      .def_static("load", py::overload_cast<const std::string&>(&DickmanTable::load))
      .def("save", py::overload_cast<const std::string&>(&DickmanTable::save, py::const_))
      .def_property_readonly("u_max", &DickmanTable::u_max)
      .def_property_readonly("error_estimate", &DickmanTable::error_estimate)
      .def("rho", &DickmanTable::rho)
      .def("integral", &DickmanTable::integral)
      .def("cdf", &DickmanTable::cdf)
      .def("density", &DickmanTable::density)
      .def("quantile", &DickmanTable::quantile);
  m.def("build_dickman", &build_dickman, py::arg("u_max") = 20.0, py::arg("tol") = 1e-10);

  py::class_<LpfSieve>(m, "LpfSieve")
      .def_static("build", &LpfSieve::build, py::arg("n"), py::arg("max_n") = kMaxSieveLimit)
      .def_property_readonly("limit", &LpfSieve::limit)
      .def("lpf", &LpfSieve::lpf);
  m.def("build_lpf_sieve", &build_lpf_sieve, py::arg("n"));
  m.def("psi_count", &psi_count, py::arg("sieve"), py::arg("n"), py::arg("m"));
  m.def("harmonic_smooth_sum", &harmonic_smooth_sum, py::arg("sieve"), py::arg("n"), py::arg("m"));
  m.def("psi_h_prob_exact", [](const LpfSieve& s, std::uint64_t n, std::uint64_t mm) {
    return psi_h_prob_exact(s, SmoothQuery(n, mm));
  }, py::arg("sieve"), py::arg("n"), py::arg("m"));
  m.def("psi_h_prob_approx", [](const DickmanTable& t, std::uint64_t n, std::uint64_t mm, bool gamma) {
    return psi_h_prob_approx(t, SmoothQuery(n, mm), gamma).value;
  }, py::arg("table"), py::arg("n"), py::arg("m"), py::arg("with_gamma"));
  m.def("s_m_cdf_exact", &s_m_cdf_exact, py::arg("table"), py::arg("m"), py::arg("z"),
        py::arg("cap") = kDefaultExactCap);

  m.def("sample_harmonic_direct", [](std::uint64_t n, std::uint64_t count, std::uint64_t seed) {
    const HarmonicDirectSampler s(n);
    py::gil_scoped_release release;
    return sample_batch<std::uint64_t>(count, RandomSource(seed), [&](RandomSource& r) { return s.draw(r); });
  }, py::arg("n"), py::arg("count"), py::arg("seed") = 42);
  m.def("sample_harmonic_rejection", [](const PrimeTable& t, std::uint64_t n, std::uint64_t count,
                                        std::uint64_t seed) {
    const HarmonicRejectionSampler s(t, n);
    py::gil_scoped_release release;
    return sample_batch<std::uint64_t>(count, RandomSource(seed),
                                       [&](RandomSource& r) { return s.draw(r).product; });
  }, py::arg("table"), py::arg("n"), py::arg("count"), py::arg("seed") = 42);
  m.def("sample_dickman", [](const DickmanTable& t, std::uint64_t count, std::uint64_t seed,
                             const std::string& method) {
    const auto how = method_from(method);
    py::gil_scoped_release release;
    return sample_batch<double>(count, RandomSource(seed),
                                [&](RandomSource& r) { return sample_dickman(t, r, how); });
  }, py::arg("table"), py::arg("count"), py::arg("seed") = 42, py::arg("method") = "quantile");
  m.def("sample_s_m", [](const PrimeTable& t, std::uint64_t mm, std::uint64_t count, std::uint64_t seed) {
    const SmSampler s(t, mm);
    py::gil_scoped_release release;
    return sample_batch<double>(count, RandomSource(seed), [&](RandomSource& r) { return s.draw(r); });
  }, py::arg("table"), py::arg("m"), py::arg("count"), py::arg("seed") = 42);

  m.def("tv_uniform_vs_hq", [](const PrimeTable& t, std::uint64_t n) {
    const TvReport r = tv_uniform_vs_hq(t, n);
    py::dict d;
    d["n"] = r.n;
    d["tv"] = r.tv;
    d["bound"] = r.bound;
    d["total_mass"] = r.total_mass;
    return d;
  }, py::arg("table"), py::arg("n"));
  m.def("size_bias_check", [](double theta, const std::function<double(std::int64_t)>& f) {
    const SizeBiasResult r = size_bias_check(theta, f);
    return py::make_tuple(r.lhs, r.rhs);
  }, py::arg("theta"), py::arg("f"));
  m.def("f1z_eval", [](const DickmanTable& t, double z, double x) {
    return SteinF1::from_table(t, z)(x);
  }, py::arg("table"), py::arg("z"), py::arg("x"));

  m.def("scan_main_theorem", [](const py::dict& o) { return records(scan_main_theorem(config_from(o))); },
        py::arg("config") = py::dict());
  m.def("scan_kolmogorov", [](const py::dict& o) { return records(scan_kolmogorov(config_from(o))); },
        py::arg("config") = py::dict());
  m.def("scan_debruijn", [](const py::dict& o) { return records(scan_debruijn(config_from(o))); },
        py::arg("config") = py::dict());
  m.def("run_all", [](const py::dict& o) {
    const ScanConfig cfg = config_from(o);
    RunAllReport rep;
    {
      py::gil_scoped_release release;
      rep = run_all(cfg);
    }
    return py::make_tuple(rep.pass(), report_to_json(rep));
  }, py::arg("config") = py::dict());
}
