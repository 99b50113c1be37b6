#include "smoothlab/dickman.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "smoothlab/errors.hpp"
#include "smoothlab/numeric.hpp"

namespace smoothlab {

namespace {

constexpr int kNodes = DickmanTable::kDegree + 1;
constexpr char kCacheMagic[] = "# smoothlab-dickman-table v1";

using DelayRule = boost::math::quadrature::gauss<double, 20>;
using PanelRule = boost::math::quadrature::gauss<double, 10>;

// Chebyshev-Lobatto points on [0, 1], ascending, endpoints included.
const std::array<double, kNodes>& unit_nodes() {
  static const std::array<double, kNodes> nodes = [] {
    std::array<double, kNodes> x{};
    for (int j = 0; j < kNodes; ++j) {
      x[j] = 0.5 * (1.0 - std::cos(std::numbers::pi * j / DickmanTable::kDegree));
    }
    x[0] = 0.0;
    x[kNodes - 1] = 1.0;
    return x;
  }();
  return nodes;
}

const std::array<double, kNodes>& bary_weights() {
  static const std::array<double, kNodes> w = [] {
    std::array<double, kNodes> out{};
    for (int j = 0; j < kNodes; ++j) out[j] = (j % 2 == 0) ? 1.0 : -1.0;
    out[0] *= 0.5;
    out[kNodes - 1] *= 0.5;
    return out;
  }();
  return w;
}

// Barycentric interpolation at local coordinate s in [0, 1].
double interpolate(const double* v, double s) {
  const auto& x = unit_nodes();
  const auto& w = bary_weights();
  double num = 0.0, den = 0.0;
  for (int j = 0; j < kNodes; ++j) {
    const double d = s - x[j];
    if (d == 0.0) return v[j];
    const double c = w[j] / d;
    num += c * v[j];
    den += c;
  }
  return num / den;
}

void validate_options(const DickmanOptions& o) {
  if (!(o.u_max >= 1.0 && o.u_max <= 50.0)) {
    throw UsageError("dickman: u_max must lie in [1, 50]");
  }
  if (!(o.tol >= 1e-14 && o.tol <= 1e-6)) {
    throw UsageError("dickman: tol must lie in [1e-14, 1e-6]");
  }
  if (o.nodes_per_unit < 1 || o.nodes_per_unit > (1 << 16)) {
    throw UsageError("dickman: nodes_per_unit out of range");
  }
  if (o.max_refinements < 0) throw UsageError("dickman: max_refinements must be >= 0");
}

}  // namespace

DickmanTable DickmanTable::build_uncertified(double u_max, int nodes_per_unit) {
  DickmanTable t;
  t.u_max_ = u_max;
  t.nodes_per_unit_ = nodes_per_unit;
  t.width_ = 1.0 / nodes_per_unit;
  t.panels_ = static_cast<std::size_t>(std::ceil(u_max * nodes_per_unit - 1e-9));
  t.error_estimate_ = std::numeric_limits<double>::quiet_NaN();
  t.values_.assign(t.panels_ * kNodes, 1.0);

  const auto& x = unit_nodes();
  const auto per_unit = static_cast<std::size_t>(nodes_per_unit);
  for (std::size_t i = per_unit; i < t.panels_; ++i) {
    const double a = static_cast<double>(i) * t.width_;
    const double* prev = &t.values_[(i - per_unit) * kNodes];
    double* cur = &t.values_[i * kNodes];
    cur[0] = t.values_[(i - 1) * kNodes + kNodes - 1];
    // rho(t - 1) on [a, a + width] lives on panel i - per_unit, local coord
    // (t - a) / width.
    auto integrand = [&](double tt) { return interpolate(prev, (tt - a) / t.width_) / tt; };
    for (int j = 1; j < kNodes; ++j) {
      const double xj = a + x[j] * t.width_;
      cur[j] = cur[0] - DelayRule::integrate(integrand, a, xj);
    }
  }
  t.compute_panel_integrals();
  return t;
}

void DickmanTable::compute_panel_integrals() {
  integral_start_.assign(panels_ + 1, 0.0);
  CompensatedSum acc;
  const auto per_unit = static_cast<std::size_t>(nodes_per_unit_);
  for (std::size_t i = 0; i < panels_; ++i) {
    if (i < per_unit) {
      integral_start_[i] = static_cast<double>(i) * width_;
      if (i + 1 == per_unit) acc = CompensatedSum(1.0);
      continue;
    }
    integral_start_[i] = acc.value();
    const double* v = &values_[i * kNodes];
    acc += width_ * PanelRule::integrate([&](double s) { return interpolate(v, s); }, 0.0, 1.0);
  }
  integral_start_[panels_] =
      panels_ <= per_unit ? static_cast<double>(panels_) * width_ : acc.value();
}

DickmanTable DickmanTable::build(const DickmanOptions& opts) {
  validate_options(opts);
  int n = opts.nodes_per_unit;
  double achieved = std::numeric_limits<double>::infinity();
  for (int r = 0; r <= opts.max_refinements; ++r, n *= 2) {
    DickmanTable coarse = build_uncertified(opts.u_max, n);
    DickmanTable fine = build_uncertified(opts.u_max, 2 * n);
    const auto& x = unit_nodes();
    double err = 0.0;
    for (std::size_t i = 0; i < coarse.panels_; ++i) {
      for (int j = 0; j < kNodes; ++j) {
        const double u =
            std::min((static_cast<double>(i) + x[j]) * coarse.width_, coarse.u_max_);
        err = std::max(err, std::fabs(coarse.rho(u) - fine.rho(u)));
        err = std::max(err, std::fabs(coarse.integral(u) - fine.integral(u)));
      }
    }
    achieved = err;
    if (err <= opts.tol) {
      coarse.tol_ = opts.tol;
      coarse.error_estimate_ = err;
      return coarse;
    }
  }
  std::ostringstream msg;
  msg << "dickman: tolerance " << opts.tol << " not reached after " << opts.max_refinements
      << " refinements (achieved " << achieved << ")";
  throw SolverFailure(msg.str(), achieved);
}

void DickmanTable::check_arg(double u, const char* what) const {
  if (std::isnan(u) || u < 0.0) {
    throw UsageError(std::string(what) + ": argument must be >= 0");
  }
  if (u > u_max_ * (1.0 + 1e-15)) {
    throw RangeError(std::string(what) + ": argument beyond u_max (no extrapolation)");
  }
}

std::size_t DickmanTable::panel_of(double u) const {
  const auto i = static_cast<std::size_t>(u * nodes_per_unit_);
  return std::min(i, panels_ - 1);
}

double DickmanTable::panel_eval(std::size_t panel, double u) const {
  const double a = static_cast<double>(panel) * width_;
  return interpolate(&values_[panel * kNodes], (u - a) / width_);
}

double DickmanTable::panel_integral(std::size_t panel, double x) const {
  const double a = static_cast<double>(panel) * width_;
  if (x <= a) return 0.0;
  const double* v = &values_[panel * kNodes];
  const double s_end = (x - a) / width_;
  return width_ * PanelRule::integrate([&](double s) { return interpolate(v, s); }, 0.0, s_end);
}

double DickmanTable::rho(double u) const {
  check_arg(u, "rho");
  if (u <= 1.0) return 1.0;
  return panel_eval(panel_of(u), u);
}

double DickmanTable::integral(double x) const {
  check_arg(x, "rho_integral");
  if (x <= 1.0) return x;
  const std::size_t i = panel_of(x);
  return integral_start_[i] + panel_integral(i, x);
}

CdfValue DickmanTable::cdf_flagged(double z) const {
  if (std::isnan(z)) throw UsageError("dickman_cdf: NaN argument");
  if (z <= 0.0) return {0.0, false};
  if (z > u_max_) return {kExpMinusGamma * integral(u_max_), true};
  return {kExpMinusGamma * integral(z), false};
}

double DickmanTable::density(double z) const {
  if (z < 0.0 || z > u_max_) return 0.0;
  return kExpMinusGamma * rho(z);
}

double DickmanTable::quantile(double q) const {
  if (!(q >= 0.0 && q < 1.0 - 1e-6)) {
    throw UsageError("dickman_quantile: q must lie in [0, 1 - 1e-6)");
  }
  if (q / kExpMinusGamma > integral_start_[panels_]) {
    throw RangeError("dickman_quantile: q beyond the tabulated mass");
  }
  return inverse_cdf(q);
}

double DickmanTable::inverse_cdf(double q) const {
  if (!(q >= 0.0 && q < 1.0)) throw UsageError("dickman inverse cdf: q must lie in [0, 1)");
  if (q == 0.0) return 0.0;
  const double target = q / kExpMinusGamma;  // work on the I[rho] scale
  if (target <= 1.0) return target;
  if (target >= integral_start_[panels_]) return u_max_;
  auto it = std::upper_bound(integral_start_.begin(), integral_start_.end() - 1, target);
  const std::size_t panel = static_cast<std::size_t>(it - integral_start_.begin()) - 1;
  double lo = static_cast<double>(panel) * width_;
  double hi = std::min(lo + width_, u_max_);
  const double base = integral_start_[panel];

  // Newton on I[rho](z) - target, kept inside a shrinking bracket.
  double z = lo;
  for (int iter = 0; iter < 100; ++iter) {
    const double g = base + panel_integral(panel, z) - target;
    if (std::fabs(g) <= 1e-14) break;
    if (g > 0) hi = z; else lo = z;
    const double slope = panel_eval(panel, z);
    double next = z - g / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * hi) break;
    z = next;
  }
  return z;
}

std::vector<double> DickmanTable::grid_nodes() const {
  std::vector<double> out(panels_ + 1);
  for (std::size_t i = 0; i <= panels_; ++i) {
    out[i] = std::min(static_cast<double>(i) * width_, u_max_);
  }
  return out;
}

std::vector<double> DickmanTable::grid_rho() const {
  auto nodes = grid_nodes();
  for (double& u : nodes) u = rho(u);
  return nodes;
}

std::vector<double> DickmanTable::grid_integral() const {
  auto nodes = grid_nodes();
  for (double& u : nodes) u = integral(u);
  return nodes;
}

void DickmanTable::save(std::ostream& out) const {
  char buf[128];
  out << kCacheMagic << '\n';
  std::snprintf(buf, sizeof buf, "# u_max %.17g\n", u_max_);
  out << buf;
  out << "# nodes_per_unit " << nodes_per_unit_ << '\n';
  out << "# degree " << kDegree << '\n';
  std::snprintf(buf, sizeof buf, "# tol %.17g\n# error_estimate %.17g\n", tol_, error_estimate_);
  out << buf;
  out << "# columns u rho integral\n";
  const auto& x = unit_nodes();
  for (std::size_t i = 0; i < panels_; ++i) {
    const int last = (i + 1 == panels_) ? kNodes : kNodes - 1;
    for (int j = 0; j < last; ++j) {
      const double u = (static_cast<double>(i) + x[j]) * width_;
      const double v = values_[i * kNodes + j];
      const double integ = integral_start_[i] + panel_integral(i, u);
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", u, v, integ);
      out << buf;
    }
  }
}

void DickmanTable::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw UsageError("cannot open " + path + " for writing");
  save(f);
}

DickmanTable DickmanTable::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCacheMagic) {
    throw FormatError("dickman cache: missing or unsupported version header");
  }
  DickmanTable t;
  int degree = -1;
  bool have_umax = false, have_npu = false;
  std::vector<double> rows_u, rows_rho;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, key;
      ls >> hash >> key;
      if (key == "u_max") { ls >> t.u_max_; have_umax = !ls.fail(); }
      else if (key == "nodes_per_unit") { ls >> t.nodes_per_unit_; have_npu = !ls.fail(); }
      else if (key == "degree") ls >> degree;
      else if (key == "tol") ls >> t.tol_;
      else if (key == "error_estimate") ls >> t.error_estimate_;
      continue;
    }
    double u, r, integ;
    if (!(ls >> u >> r >> integ)) throw FormatError("dickman cache: malformed row: " + line);
    rows_u.push_back(u);
    rows_rho.push_back(r);
  }
  if (!have_umax || !have_npu || degree != kDegree) {
    throw FormatError("dickman cache: header incomplete or degree mismatch");
  }
  if (!(t.u_max_ >= 1.0 && t.u_max_ <= 50.0) || t.nodes_per_unit_ < 1) {
    throw FormatError("dickman cache: header values out of range");
  }
  t.width_ = 1.0 / t.nodes_per_unit_;
  t.panels_ = static_cast<std::size_t>(std::ceil(t.u_max_ * t.nodes_per_unit_ - 1e-9));
  if (rows_u.size() != t.panels_ * kDegree + 1) {
    throw FormatError("dickman cache: row count does not match header");
  }
  t.values_.resize(t.panels_ * kNodes);
  const auto& x = unit_nodes();
  for (std::size_t i = 0; i < t.panels_; ++i) {
    for (int j = 0; j < kNodes; ++j) {
      const std::size_t row = i * kDegree + static_cast<std::size_t>(j);
      const double u = (static_cast<double>(i) + x[j]) * t.width_;
      if (std::fabs(rows_u[row] - u) > 1e-12) {
        throw FormatError("dickman cache: node coordinates do not match the mesh");
      }
      t.values_[i * kNodes + j] = rows_rho[row];
    }
  }
  t.compute_panel_integrals();
  return t;
}

DickmanTable DickmanTable::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open " + path);
  return load(f);
}

}  // namespace smoothlab
