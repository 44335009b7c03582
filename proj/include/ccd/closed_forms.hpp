#pragma once

// Closed-form generating curves (sphere, n = 1 catenoid) and the definite
// integrals giving the slab half-width of the catenoids and the half-periods
// of the unduloids and nodoids.

#include <cmath>
#include <numbers>
#include <string>

#include "ccd/classify.hpp"
#include "ccd/curvature.hpp"
#include "ccd/error.hpp"
#include "ccd/quadrature.hpp"

namespace ccd {

inline void check_sphere_domain(double h, double x) {
  if (!(h > 0.0)) fail(ErrorKind::InvalidArgument, "sphere profile needs H > 0");
  if (!(x >= 0.0) || x > 1.0 / h * (1.0 + 1e-15)) {
    fail(ErrorKind::InvalidArgument, "sphere profile: x = " + std::to_string(x) + " outside [0, 1/H]");
  }
}

/// Upper half of the profile of S_H: t = (H x sqrt(1 - H^2 x^2) + arccos(H x)) / (2 H^2).
inline double sphere_profile(double h, double x) {
  check_sphere_domain(h, x);
  const double u = std::min(h * x, 1.0);
  return (u * std::sqrt(1.0 - u * u) + std::acos(u)) / (2.0 * h * h);
}

/// dt/dx = -H x^2 / sqrt(1 - H^2 x^2); requires x < 1/H.
inline double sphere_profile_derivative(double h, double x) {
  check_sphere_domain(h, x);
  const double u = h * x;
  if (!(u < 1.0)) fail(ErrorKind::InvalidArgument, "sphere profile derivative is infinite at x = 1/H");
  return -h * x * x / std::sqrt(1.0 - u * u);
}

/// Whole profile of S_H, phi in [0, pi], from the south pole through the
/// equator (phi = pi/2) to the north pole:
/// x = sin(phi)/H, t = (2 phi - pi - sin(2 phi)) / (4 H^2).
inline CurveJet sphere_param(double h, double phi) {
  if (!(h > 0.0)) fail(ErrorKind::InvalidArgument, "sphere profile needs H > 0");
  const double s = std::sin(phi), c = std::cos(phi);
  const double h2 = h * h;
  return {s / h, (2.0 * phi - std::numbers::pi - std::sin(2.0 * phi)) / (4.0 * h2), c / h, s * s / h2, -s / h,
          std::sin(2.0 * phi) / h2};
}

/// Catenoid for n = 1: x = sqrt(t^2 + E^4) / E.
inline double catenoid_profile_h1(double e, double t) {
  if (!(e > 0.0)) fail(ErrorKind::InvalidArgument, "catenoid profile needs E > 0");
  return std::sqrt(t * t + e * e * e * e) / e;
}

namespace detail {

/// (r + d)^k - r^k without cancellation: d * sum_j (r + d)^j r^{k-1-j}.
inline double pow_diff(double r, double d, int k) {
  const double x = r + d;
  double acc = 0.0, rp = 1.0;
  for (int j = 0; j < k; ++j) {
    acc = acc * x + rp;
    rp *= r;
  }
  // acc = sum_j x^{k-1-j} r^j
  return d * acc;
}

// E x / sqrt(x^{4n-2} - E^2) at x = a + d, a = E^{1/(2n-1)}
inline double slab_integrand(int n, double e, double a, double d) {
  const double x = a + d;
  const double p = ipow(x, 2 * n - 1);
  return e * x / std::sqrt(pow_diff(a, d, 2 * n - 1) * (p + e));
}

inline double slab_integrand(int n, double e, double x) {
  const double p = ipow(x, 2 * n - 1);
  return e * x / std::sqrt((p - e) * (p + e));
}

// same integrand after x = 1/u, including the Jacobian 1/u^2:
// E u^{2n-4} / sqrt(1 - E^2 u^{4n-2})
inline double slab_tail_integrand(int n, double e, double u) {
  const double q = e * ipow(u, 2 * n - 1);
  return e * ipow(u, 2 * n - 4) / std::sqrt((1.0 - q) * (1.0 + q));
}

inline void check_slab_args(int n, double e) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "n must be >= 1");
  if (!(e > 0.0) || !std::isfinite(e)) fail(ErrorKind::InvalidArgument, "slab half-width needs E > 0");
}

}  // namespace detail

/// t_inf = integral over [E^{1/(2n-1)}, inf) of E x / sqrt(x^{4n-2} - E^2) dx,
/// the half-width of the slab containing a catenoid with n >= 2.
/// The interval is cut at 2 E^{1/(2n-1)}: the inner piece has an inverse
/// square root at its left end, the tail is mapped to u = 1/x.
inline QuadratureResult catenoid_slab_halfwidth(int n, double e, SingularMethod method = SingularMethod::Substitution,
                                                const QuadratureOptions& opt = {}) {
  detail::check_slab_args(n, e);
  if (n == 1) fail(ErrorKind::Divergent, "slab half-width diverges for n = 1 (integrand tends to E)");
  const double a = std::pow(e, 1.0 / (2.0 * n - 1.0));
  auto inner = [&](double, double da, double) { return detail::slab_integrand(n, e, a, da); };
  auto tail = [&](double u) { return detail::slab_tail_integrand(n, e, u); };
  auto res = singular_quadrature_offsets(inner, a, 2.0 * a, {true, false}, method, opt);
  if (method == SingularMethod::DoubleExponential) {
    res += tanh_sinh(tail, 0.0, 0.5 / a, opt);
  } else {
    res += integrate_adaptive(tail, 0.0, 0.5 / a, opt);
  }
  return res;
}

/// Same integral truncated at x = X (any n).
inline QuadratureResult catenoid_slab_partial(int n, double e, double upper, const QuadratureOptions& opt = {}) {
  detail::check_slab_args(n, e);
  const double a = std::pow(e, 1.0 / (2.0 * n - 1.0));
  if (!(upper >= a)) fail(ErrorKind::InvalidArgument, "upper limit below E^{1/(2n-1)}");
  auto near = [&](double, double da, double) { return detail::slab_integrand(n, e, a, da); };
  auto far = [&](double x) { return detail::slab_integrand(n, e, x); };
  const double cut = std::min(upper, 2.0 * a);
  auto res = singular_quadrature_offsets(near, a, cut, {true, false}, SingularMethod::Substitution, opt);
  if (upper > cut) res += integrate_adaptive(far, cut, upper, opt);
  return res;
}

namespace detail {

struct PeriodicSetup {
  NormalizedParams p;
  StructuralRadii r;
};

inline PeriodicSetup periodic_setup(int n, double h, double e, FamilyLabel want) {
  const auto p = normalize_params(n, h, e);
  const FamilyLabel fam = classify(n, p.h, p.e);
  if (fam != want) {
    fail(ErrorKind::InvalidArgument, std::string("parameters describe a ") + std::string(to_string(fam)) + ", not a " +
                                         std::string(to_string(want)));
  }
  return {p, structural_radii(n, p.h, p.e)};
}

// Which factor of x^{4n-2} - (E + H x^{2n})^2 = q+(x) q-(x) vanishes at an
// endpoint, with q+(y) = H y^{2n} - y^{2n-1} + E, q-(y) = -H y^{2n} - y^{2n-1} - E.
enum class RootFactor { None, Plus, Minus };

struct PeriodicIntegrand {
  int n;
  double h, e;
  double a, b;
  RootFactor at_a, at_b;

  double q_near(bool plus, double r, double d) const {
    const double s = plus ? 1.0 : -1.0;
    return s * h * pow_diff(r, d, 2 * n) - pow_diff(r, d, 2 * n - 1);
  }
  double factor(bool plus, double x, double da, double db) const {
    const RootFactor want = plus ? RootFactor::Plus : RootFactor::Minus;
    if (at_a == want && (da <= db || at_b != want)) return q_near(plus, a, da);
    if (at_b == want) return q_near(plus, b, -db);
    return plus ? q_plus(n, h, e, x) : q_minus(n, h, e, x);
  }
  double radicand(double x, double da, double db) const { return factor(true, x, da, db) * factor(false, x, da, db); }

  // dt/dx = (E + H x^{2n}) x / sqrt(x^{4n-2} - (E + H x^{2n})^2)
  double raw(double x, double da, double db) const {
    const double A = e + h * ipow(x, 2 * n);
    return A * x / std::sqrt(radicand(x, da, db));
  }
  // [2(n-1) x^{1-2n} A^2 + x^{2n-1}] / sqrt(...) / (2nH)
  double regularized(double x, double da, double db) const {
    const double A = e + h * ipow(x, 2 * n);
    const double p = ipow(x, 2 * n - 1);
    return (2.0 * (n - 1.0) * A * A / p + p) / std::sqrt(radicand(x, da, db)) / (2.0 * n * h);
  }
};

inline double raw_integrand(int n, double h, double e, double x) {
  return PeriodicIntegrand{n, h, e, x, x, RootFactor::None, RootFactor::None}.raw(x, 0.0, 0.0);
}

inline double regularized_integrand(int n, double h, double e, double x) {
  return PeriodicIntegrand{n, h, e, x, x, RootFactor::None, RootFactor::None}.regularized(x, 0.0, 0.0);
}

template <class Member>
QuadratureResult periodic_integral(const PeriodicIntegrand& f, Member m, SingularMethod method, const QuadratureOptions& opt) {
  auto g = [&](double x, double da, double db) { return (f.*m)(x, da, db); };
  return singular_quadrature_offsets(g, f.a, f.b, {f.at_a != RootFactor::None, f.at_b != RootFactor::None}, method, opt);
}

}  // namespace detail

struct HalfPeriodForms {
  QuadratureResult regularized;
  QuadratureResult raw;
};

/// Both integral representations of the nodoid half-period t2 over [x1, x2].
inline HalfPeriodForms nodoid_halfperiod_forms(int n, double h, double e, SingularMethod method = SingularMethod::Substitution,
                                               const QuadratureOptions& opt = {}) {
  using detail::PeriodicIntegrand;
  using detail::RootFactor;
  const auto s = detail::periodic_setup(n, h, e, FamilyLabel::Nodoid);
  const PeriodicIntegrand f{n, s.p.h, s.p.e, s.r.x1, s.r.x2, RootFactor::Minus, RootFactor::Plus};
  return {detail::periodic_integral(f, &PeriodicIntegrand::regularized, method, opt),
          detail::periodic_integral(f, &PeriodicIntegrand::raw, method, opt)};
}

/// Discrepancy allowed between the two forms of t2.
inline constexpr double kHalfPeriodFormTolerance = 1e-8;

/// Nodoid half-period t2 from the regularized integrand (positive integrand),
/// checked against the raw form.
inline QuadratureResult nodoid_halfperiod(int n, double h, double e, SingularMethod method = SingularMethod::Substitution,
                                          const QuadratureOptions& opt = {}) {
  const auto f = nodoid_halfperiod_forms(n, h, e, method, opt);
  const double diff = std::abs(f.regularized.value - f.raw.value);
  const double allowed = std::max(kHalfPeriodFormTolerance, f.regularized.error_estimate + f.raw.error_estimate);
  if (diff > allowed) {
    fail(ErrorKind::NonConvergence, "raw and regularized half-period integrals differ by " + std::to_string(diff));
  }
  QuadratureResult out = f.regularized;
  out.error_estimate = std::max(out.error_estimate, diff);
  out.evaluations += f.raw.evaluations;
  return out;
}

/// Unduloid half-period: integral of dt/dx between the radii x1 < x2.
inline QuadratureResult unduloid_halfperiod(int n, double h, double e, SingularMethod method = SingularMethod::Substitution,
                                            const QuadratureOptions& opt = {}) {
  using detail::PeriodicIntegrand;
  using detail::RootFactor;
  const auto s = detail::periodic_setup(n, h, e, FamilyLabel::Unduloid);
  const PeriodicIntegrand f{n, s.p.h, s.p.e, s.r.x1, s.r.x2, RootFactor::Plus, RootFactor::Plus};
  return detail::periodic_integral(f, &PeriodicIntegrand::raw, method, opt);
}

/// Height gained from the start of a half period to x0: from x1 to the
/// inflection of an unduloid, or from x2 to the vertical tangent of a nodoid.
inline QuadratureResult periodic_t1(int n, double h, double e, const QuadratureOptions& opt = {}) {
  const auto p = normalize_params(n, h, e);
  const FamilyLabel fam = classify(n, p.h, p.e);
  if (fam != FamilyLabel::Unduloid && fam != FamilyLabel::Nodoid) {
    fail(ErrorKind::InvalidArgument, "t1 is defined for unduloids and nodoids");
  }
  using detail::PeriodicIntegrand;
  using detail::RootFactor;
  const auto s = detail::periodic_setup(n, h, e, fam);
  const double x0 = *s.r.x0;
  const auto f = fam == FamilyLabel::Unduloid
                     ? PeriodicIntegrand{n, s.p.h, s.p.e, s.r.x1, x0, RootFactor::Plus, RootFactor::None}
                     : PeriodicIntegrand{n, s.p.h, s.p.e, x0, s.r.x2, RootFactor::None, RootFactor::Plus};
  return detail::periodic_integral(f, &PeriodicIntegrand::raw, SingularMethod::Substitution, opt);
}

/// Half-period of a periodic profile (unduloid or nodoid).
inline QuadratureResult periodic_halfperiod(int n, double h, double e) {
  const auto p = normalize_params(n, h, e);
  const FamilyLabel fam = classify(n, p.h, p.e);
  if (fam == FamilyLabel::Unduloid) return unduloid_halfperiod(n, p.h, p.e);
  if (fam == FamilyLabel::Nodoid) return nodoid_halfperiod(n, p.h, p.e);
  fail(ErrorKind::InvalidArgument, "half-period is defined for unduloids and nodoids");
}

}  // namespace ccd
