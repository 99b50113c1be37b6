#ifndef SMOOTHLAB_DICKMAN_HPP_
#define SMOOTHLAB_DICKMAN_HPP_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace smoothlab {

struct DickmanOptions {
  double u_max = 20.0;
  double tol = 1e-10;
  int nodes_per_unit = 64;  // panels per unit interval
  int max_refinements = 4;  // mesh doublings allowed while certifying tol
};

struct CdfValue {
  double value = 0.0;
  bool saturated = false;  // argument was clamped to u_max
};

// Piecewise-polynomial representation of the Dickman function rho and its
// running integral I[rho](x) = int_0^x rho.
//
// [0, u_max] is split into panels of width 1/nodes_per_unit aligned with the
// integers, so a shift by one maps panels onto panels. On each panel rho is
// stored at Chebyshev-Lobatto nodes and interpolated barycentrically. For
// u >= 1 the panel values come from
//     rho(u) = rho(a) - int_a^u rho(t - 1) / t dt,
// integrated with Gauss-Legendre against the interpolant one unit back.
// Immutable once built.
class DickmanTable {
 public:
  static constexpr int kDegree = 8;  // polynomial degree per panel

  // Builds and certifies the table: the mesh is doubled until two successive
  // builds agree to `tol` at every panel node (SolverFailure otherwise).
  // Requires 1 <= u_max <= 50 and 1e-14 <= tol <= 1e-6.
  static DickmanTable build(const DickmanOptions& opts = {});

  // Single build without certification; error_estimate() stays unset (NaN).
  static DickmanTable build_uncertified(double u_max, int nodes_per_unit);

  double u_max() const { return u_max_; }
  double tol() const { return tol_; }
  int nodes_per_unit() const { return nodes_per_unit_; }
  double error_estimate() const { return error_estimate_; }

  // rho(u); UsageError for u < 0, RangeError for u > u_max.
  double rho(double u) const;
  // I[rho](x), same range rules as rho.
  double integral(double x) const;

  // e^{-gamma} I[rho](z), clamped (and flagged) at u_max. Zero for z <= 0.
  CdfValue cdf_flagged(double z) const;
  double cdf(double z) const { return cdf_flagged(z).value; }
  // Density e^{-gamma} rho(z) on [0, u_max], zero outside.
  double density(double z) const;

  // Left inverse of cdf for 0 <= q < 1 - 1e-6, |cdf(z) - q| <= 1e-9.
  double quantile(double q) const;
  // Same inverse over all of [0, 1); returns u_max once q exceeds the
  // tabulated mass. Used by the samplers, whose uniforms reach past 1 - 1e-6.
  double inverse_cdf(double q) const;

  // Values at the uniform panel endpoints k / nodes_per_unit.
  std::vector<double> grid_nodes() const;
  std::vector<double> grid_rho() const;
  std::vector<double> grid_integral() const;

  // Versioned text cache: '#'-prefixed header, then one "u rho I" row per
  // interpolation node. Loading reproduces the table bit-for-bit.
  void save(std::ostream& out) const;
  void save(const std::string& path) const;
  static DickmanTable load(std::istream& in);
  static DickmanTable load(const std::string& path);

 private:
  std::size_t panel_of(double u) const;
  double panel_eval(std::size_t panel, double u) const;
  double panel_integral(std::size_t panel, double x) const;
  void compute_panel_integrals();
  void check_arg(double u, const char* what) const;

  double u_max_ = 0.0;
  double tol_ = 0.0;
  double error_estimate_ = 0.0;
  int nodes_per_unit_ = 0;
  double width_ = 0.0;
  std::size_t panels_ = 0;
  // panels_ * (kDegree + 1) values; node j of panel i at i * (kDegree + 1) + j.
  std::vector<double> values_;
  // I[rho] at the left end of each panel, plus one trailing entry for u_max.
  std::vector<double> integral_start_;
};

inline DickmanTable build_dickman(double u_max = 20.0, double tol = 1e-10) {
  DickmanOptions o;
  o.u_max = u_max;
  o.tol = tol;
  return DickmanTable::build(o);
}

}  // namespace smoothlab

#endif  // SMOOTHLAB_DICKMAN_HPP_
