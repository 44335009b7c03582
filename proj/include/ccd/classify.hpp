#pragma once

// Delaunay-type classification of rotationally invariant CMC hypersurfaces
// in H^n by the signs of (H, E), together with the structural radii of the
// periodic families.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "ccd/error.hpp"

namespace ccd {

enum class FamilyLabel { Hyperplane, Catenoid, Sphere, Cylinder, Unduloid, Nodoid };

inline std::string_view to_string(FamilyLabel f) {
  switch (f) {
    case FamilyLabel::Hyperplane: return "Hyperplane";
    case FamilyLabel::Catenoid: return "Catenoid";
    case FamilyLabel::Sphere: return "Sphere";
    case FamilyLabel::Cylinder: return "Cylinder";
    case FamilyLabel::Unduloid: return "Unduloid";
    case FamilyLabel::Nodoid: return "Nodoid";
  }
  return "Unknown";
}

inline std::optional<FamilyLabel> family_from_string(std::string_view s) {
  for (auto f : {FamilyLabel::Hyperplane, FamilyLabel::Catenoid, FamilyLabel::Sphere, FamilyLabel::Cylinder,
                 FamilyLabel::Unduloid, FamilyLabel::Nodoid}) {
    const auto name = to_string(f);
    if (name.size() != s.size()) continue;
    bool same = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (std::tolower(static_cast<unsigned char>(name[i])) != std::tolower(static_cast<unsigned char>(s[i]))) same = false;
    }
    if (same) return f;
  }
  return std::nullopt;
}

/// x1 <= x2 bound the profile radially; x0 is the inflection radius of an
/// unduloid or the vertical-tangent radius of a nodoid.
struct StructuralRadii {
  double x1 = 0.0;
  double x2 = 0.0;
  std::optional<double> x0;
};

/// Relative tolerance on |E - E_cyl| / E_cyl for detecting the cylinder.
inline constexpr double kCylinderTolerance = 1e-12;

/// (n, H, E) with H >= 0, and E >= 0 when H = 0. The map (H, E) -> (-H, -E)
/// reverses the profile and preserves the family.
struct NormalizedParams {
  int n = 1;
  double h = 0.0;
  double e = 0.0;
  bool flipped = false;
};

inline NormalizedParams normalize_params(int n, double h, double e) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "n must be an integer >= 1");
  if (!std::isfinite(h) || !std::isfinite(e)) fail(ErrorKind::InvalidArgument, "H and E must be finite");
  if (h < 0.0 || (h == 0.0 && e < 0.0)) return {n, -h, -e, true};
  return {n, h, e, false};
}

inline double ipow(double y, int k) {
  double r = 1.0;
  double b = y;
  unsigned u = static_cast<unsigned>(k);
  while (u) {
    if (u & 1u) r *= b;
    b *= b;
    u >>= 1u;
  }
  return r;
}

/// E_cyl = r^{2n-1} - H r^{2n} with r = (2n-1)/(2nH): the energy of the cylinder of curvature H.
inline double cylinder_energy(int n, double h) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "n must be an integer >= 1");
  if (!(h > 0.0)) fail(ErrorKind::InvalidArgument, "cylinder_energy requires H > 0");
  const double r = (2.0 * n - 1.0) / (2.0 * n * h);
  return ipow(r, 2 * n - 1) - h * ipow(r, 2 * n);
}

inline double cylinder_radius(int n, double h) {
  if (!(h > 0.0)) fail(ErrorKind::InvalidArgument, "cylinder_radius requires H > 0");
  return (2.0 * n - 1.0) / (2.0 * n * h);
}

/// Number of sign changes in a coefficient sequence (zeros skipped): an upper
/// bound on the number of positive real roots, with the same parity.
inline int descartes_positive_root_bound(std::span<const double> coefficients) {
  int changes = 0;
  int last = 0;
  for (double c : coefficients) {
    if (c == 0.0) continue;
    const int s = c > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  if (last == 0) fail(ErrorKind::InvalidArgument, "descartes_positive_root_bound: zero polynomial");
  return changes;
}

namespace detail {

/// Root of f in [lo, hi] given a strict sign change: bisection down to width
/// 1e-10, then up to three Newton steps kept inside the final bracket.
template <class F, class DF>
double refine_root(F&& f, DF&& df, double lo, double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) fail(ErrorKind::RootBracketFailure, "no sign change on the bracket");
  while (hi - lo > 1e-10 * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double d = df(x);
    if (d == 0.0 || !std::isfinite(d)) break;
    const double nx = x - f(x) / d;
    if (!(nx >= lo && nx <= hi)) break;
    x = nx;
  }
  return x;
}

// q(y) = H y^{2n} - y^{2n-1} + E
inline double q_plus(int n, double h, double e, double y) { return ipow(y, 2 * n - 1) * (h * y - 1.0) + e; }
inline double dq_plus(int n, double h, double y) {
  return ipow(y, 2 * n - 2) * (2.0 * n * h * y - (2.0 * n - 1.0));
}
// -H y^{2n} - y^{2n-1} - E
inline double q_minus(int n, double h, double e, double y) { return -ipow(y, 2 * n - 1) * (h * y + 1.0) - e; }
inline double dq_minus(int n, double h, double y) {
  return -ipow(y, 2 * n - 2) * (2.0 * n * h * y + (2.0 * n - 1.0));
}

}  // namespace detail

/// Delaunay family of (n, H, E). Throws NoAdmissibleRadius when EH > 0 and E exceeds E_cyl.
inline FamilyLabel classify(int n, double h, double e) {
  const auto p = normalize_params(n, h, e);
  if (p.h == 0.0) return p.e == 0.0 ? FamilyLabel::Hyperplane : FamilyLabel::Catenoid;
  if (p.e == 0.0) return FamilyLabel::Sphere;
  if (p.e < 0.0) return FamilyLabel::Nodoid;
  const double ecyl = cylinder_energy(n, p.h);
  const double rel = (p.e - ecyl) / ecyl;
  if (std::abs(rel) <= kCylinderTolerance) return FamilyLabel::Cylinder;
  if (rel > 0.0) {
    fail(ErrorKind::NoAdmissibleRadius, "E = " + std::to_string(p.e) + " exceeds the cylinder energy " + std::to_string(ecyl) +
                                            "; H y^{2n} - y^{2n-1} + E has no positive root");
  }
  return FamilyLabel::Unduloid;
}

/// Minimum and maximum radius (x1, x2) of a profile with EH != 0.
inline StructuralRadii radius_bounds(int n, double h, double e) {
  const auto p = normalize_params(n, h, e);
  if (p.h == 0.0 || p.e == 0.0) fail(ErrorKind::InvalidArgument, "radius_bounds requires EH != 0");
  const double hh = p.h, ee = p.e;
  auto q = [&](double y) { return detail::q_plus(n, hh, ee, y); };
  auto dq = [&](double y) { return detail::dq_plus(n, hh, y); };
  StructuralRadii out;
  if (ee > 0.0) {
    const FamilyLabel fam = classify(n, hh, ee);  // throws NoAdmissibleRadius
    const double r = cylinder_radius(n, hh);
    if (fam == FamilyLabel::Cylinder) {
      out.x1 = out.x2 = r;
      return out;
    }
    out.x1 = detail::refine_root(q, dq, 0.0, r);
    out.x2 = detail::refine_root(q, dq, r, 1.0 / hh);
    return out;
  }
  const double x0 = std::pow(-ee / hh, 1.0 / (2.0 * n));
  auto qm = [&](double y) { return detail::q_minus(n, hh, ee, y); };
  auto dqm = [&](double y) { return detail::dq_minus(n, hh, y); };
  out.x1 = detail::refine_root(qm, dqm, 0.0, x0);
  double hi = std::max(x0, 1.0 / hh);
  for (int i = 0; i < 200 && q(hi) <= 0.0; ++i) hi *= 2.0;
  out.x2 = detail::refine_root(q, dq, x0, hi);
  return out;
}

/// p(y) = (E + H y^{2n})^3 - 2H y^{6n-2} + 2(n-1) E y^{4n-2}; along an
/// unduloid the profile curvature sigma' vanishes exactly where p(x) = 0.
inline double inflection_polynomial(int n, double h, double e, double y) {
  const double a = e + h * ipow(y, 2 * n);
  return a * a * a - 2.0 * h * ipow(y, 6 * n - 2) + 2.0 * (n - 1.0) * e * ipow(y, 4 * n - 2);
}

inline double inflection_polynomial_derivative(int n, double h, double e, double y) {
  const double a = e + h * ipow(y, 2 * n);
  const double nn = static_cast<double>(n);
  return 3.0 * a * a * 2.0 * nn * h * ipow(y, 2 * n - 1) - 2.0 * h * (6.0 * nn - 2.0) * ipow(y, 6 * n - 3) +
         2.0 * (nn - 1.0) * e * (4.0 * nn - 2.0) * ipow(y, 4 * n - 3);
}

/// Inflection radius of an unduloid (the root of p in [x1, x2]) or the
/// vertical-tangent radius (-E/H)^{1/2n} of a nodoid.
inline double inflection_radius(int n, double h, double e) {
  const auto p = normalize_params(n, h, e);
  if (p.h == 0.0 || p.e == 0.0) fail(ErrorKind::InvalidArgument, "inflection_radius requires EH != 0");
  if (p.e < 0.0) return std::pow(-p.e / p.h, 1.0 / (2.0 * n));
  const auto r = radius_bounds(n, p.h, p.e);
  if (r.x1 == r.x2) return r.x1;
  auto f = [&](double y) { return inflection_polynomial(n, p.h, p.e, y); };
  auto df = [&](double y) { return inflection_polynomial_derivative(n, p.h, p.e, y); };
  if (!(f(r.x1) > 0.0) || !(f(r.x2) < 0.0)) {
    fail(ErrorKind::RootBracketFailure, "expected p(x1) > 0 > p(x2) for an unduloid");
  }
  return detail::refine_root(f, df, r.x1, r.x2);
}

/// x1, x2 and x0 together.
inline StructuralRadii structural_radii(int n, double h, double e) {
  auto r = radius_bounds(n, h, e);
  r.x0 = inflection_radius(n, h, e);
  return r;
}

}  // namespace ccd
