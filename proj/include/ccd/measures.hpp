#pragma once

// Perimeter and volume of rotationally invariant sets in H^n described by a
// generating curve gamma = (x, t) in the half-plane {x >= 0}, and a numeric
// check of the first variation of perimeter.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "ccd/closed_forms.hpp"
#include "ccd/curvature.hpp"
#include "ccd/error.hpp"
#include "ccd/profile_ode.hpp"
#include "ccd/quadrature.hpp"

namespace ccd {

/// Area of the unit sphere S^{m} in R^{m+1}.
inline double unit_sphere_area(int m) {
  const double k = 0.5 * (m + 1);
  return 2.0 * std::pow(std::numbers::pi, k) / std::tgamma(k);
}

/// Volume of the unit ball in R^m.
inline double unit_ball_volume(int m) {
  const double k = 0.5 * m;
  return std::pow(std::numbers::pi, k) / std::tgamma(k + 1.0);
}

/// |N_H| for a profile with velocity (x', t') at radius x, any regular parameter:
/// sqrt(x^2 x'^2 + t'^2) / sqrt(x'^2 + t'^2 + x^2 x'^2).
inline double horizontal_normal_density(double x, double dx, double dt) {
  if (!(x > 0.0)) fail(ErrorKind::AxisPoint, "horizontal_normal_density: x must be positive");
  const double num = x * x * dx * dx + dt * dt;
  const double den = dx * dx + dt * dt + x * x * dx * dx;
  if (!(den > 0.0)) fail(ErrorKind::InvalidArgument, "horizontal_normal_density: zero velocity");
  return std::sqrt(num / den);
}

/// Gram matrix of the coordinate tangents of phi(s, v) = (x(s) f(v), t(s))
/// in the chart of S^{2n-1} around w = e_1.
inline Eigen::MatrixXd rotational_gram(int n, double x, double dx, double dt) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "n must be >= 1");
  std::vector<double> omega(2 * static_cast<std::size_t>(n), 0.0);
  omega[0] = 1.0;
  const CurveJet c{x, 0.0, dx, dt, 0.0, 0.0};
  const ImmersionJet jet = rotational_jet(c, omega);
  const auto m = static_cast<Eigen::Index>(jet.tangents.size());
  Eigen::MatrixXd g(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) g(i, j) = dot(jet.tangents[static_cast<std::size_t>(i)], jet.tangents[static_cast<std::size_t>(j)]);
  return g;
}

/// |N_H| sqrt(det Gram): the perimeter density per unit of S^{2n-1} area,
/// computed from the tangent vectors and normal of the immersion.
inline double gram_perimeter_density(int n, double x, double dx, double dt) {
  const Eigen::MatrixXd g = rotational_gram(n, x, dx, dt);
  std::vector<double> omega(2 * static_cast<std::size_t>(n), 0.0);
  omega[0] = 1.0;
  const FrameVector nrm = rotational_normal({x, 0.0, dx, dt, 0.0, 0.0}, omega);
  const double nh = norm(horizontal_part(nrm)) / norm(nrm);
  return nh * std::sqrt(std::max(0.0, g.determinant()));
}

/// x^{2n-1} sqrt(x^2 x'^2 + t'^2).
inline double perimeter_density(int n, double x, double dx, double dt) {
  return ipow(x, 2 * n - 1) * std::sqrt(x * x * dx * dx + dt * dt);
}

/// Riemannian area density x^{2n-1} sqrt(x'^2 + t'^2 + x^2 x'^2).
inline double area_density(int n, double x, double dx, double dt) {
  return ipow(x, 2 * n - 1) * std::sqrt(dx * dx + dt * dt + x * x * dx * dx);
}

/// Relative agreement required between the Gram-determinant density and the closed form.
inline constexpr double kDensityCheckTolerance = 1e-12;

inline void check_density(int n, double x, double dx, double dt) {
  if (!(x > 0.0)) return;
  const double fast = perimeter_density(n, x, dx, dt);
  const double slow = gram_perimeter_density(n, x, dx, dt);
  if (std::abs(fast - slow) > kDensityCheckTolerance * std::max(1.0, std::abs(fast))) {
    fail(ErrorKind::NonConvergence, "perimeter density disagrees with the Gram determinant at x = " + std::to_string(x));
  }
}

enum class Closure {
  Unspecified,  // open curve, not declared as a truncation
  Truncated,    // a deliberately truncated piece of a hypersurface
  Capped,       // ends joined to the axis by horizontal discs {t = const}
  Closed,       // meets the axis at both ends
};

inline std::string_view to_string(Closure c) {
  switch (c) {
    case Closure::Unspecified: return "Unspecified";
    case Closure::Truncated: return "Truncated";
    case Closure::Capped: return "Capped";
    case Closure::Closed: return "Closed";
  }
  return "Unknown";
}

/// A generating curve given piecewise by parameterized segments. Any
/// regular parameter is accepted; breakpoints mark where a segment's
/// derivatives may jump.
class RotationalProfile {
 public:
  struct Segment {
    std::function<CurveJet(double)> eval;
    double a = 0.0;
    double b = 0.0;
    std::vector<double> breakpoints;  // strictly inside (a, b)
  };

  RotationalProfile() = default;
  RotationalProfile(int n, std::vector<Segment> segments, Closure closure)
      : n_(n), segments_(std::move(segments)), closure_(closure) {
    if (n < 1) fail(ErrorKind::InvalidArgument, "n must be >= 1");
    for (const auto& s : segments_) {
      if (!(s.b >= s.a)) fail(ErrorKind::InvalidArgument, "profile segment with b < a");
      if (!s.eval) fail(ErrorKind::InvalidArgument, "profile segment without an evaluator");
    }
  }

  static RotationalProfile from_function(int n, std::function<CurveJet(double)> f, double a, double b, Closure closure,
                                         std::vector<double> breakpoints = {}) {
    return RotationalProfile(n, {Segment{std::move(f), a, b, std::move(breakpoints)}}, closure);
  }

  /// Quintic Hermite interpolation of (x, t) through the samples, matching
  /// x' = sin, t' = cos and their derivatives from the profile system.
  static RotationalProfile from_trajectory(const Trajectory& tr, Closure closure) {
    if (tr.samples.size() < 2) {
      fail(ErrorKind::InvalidArgument, "trajectory needs at least two samples");
    }
    struct Node {
      double s, x, t, dx, dt, ddx, ddt;
    };
    auto nodes = std::make_shared<std::vector<Node>>();
    nodes->reserve(tr.samples.size());
    for (const auto& p : tr.samples) {
      if (!nodes->empty() && !(p.s > nodes->back().s)) fail(ErrorKind::InvalidArgument, "trajectory s must increase");
      const double sg = std::sin(p.sigma), cg = std::cos(p.sigma);
      const double ds = p.x > 0.0 ? detail::sigma_prime(tr.n, tr.h, p.x, p.sigma) : 0.0;
      nodes->push_back({p.s, p.x, p.t, sg, cg, cg * ds, -sg * ds});
    }
    auto eval = [nodes](double s) -> CurveJet {
      const auto& v = *nodes;
      std::size_t i = static_cast<std::size_t>(
          std::upper_bound(v.begin(), v.end(), s, [](double q, const Node& nd) { return q < nd.s; }) - v.begin());
      i = std::clamp<std::size_t>(i, 1, v.size() - 1) - 1;
      const Node& l = v[i];
      const Node& r = v[i + 1];
      const double h = r.s - l.s;
      const double u = (s - l.s) / h;
      auto quintic = [&](double y0, double d0, double dd0, double y1, double d1, double dd1, double out[3]) {
        // basis on [0, 1] applied to scaled derivatives
        const double p0 = y0, p1 = d0 * h, p2 = dd0 * h * h, q0 = y1, q1 = d1 * h, q2 = dd1 * h * h;
        const double c0 = p0, c1 = p1, c2 = 0.5 * p2;
        const double c3 = 10 * (q0 - p0) - 6 * p1 - 4 * q1 - 1.5 * p2 + 0.5 * q2;
        const double c4 = -15 * (q0 - p0) + 8 * p1 + 7 * q1 + 1.5 * p2 - q2;
        const double c5 = 6 * (q0 - p0) - 3 * (p1 + q1) - 0.5 * p2 + 0.5 * q2;
        out[0] = c0 + u * (c1 + u * (c2 + u * (c3 + u * (c4 + u * c5))));
        out[1] = (c1 + u * (2 * c2 + u * (3 * c3 + u * (4 * c4 + u * 5 * c5)))) / h;
        out[2] = (2 * c2 + u * (6 * c3 + u * (12 * c4 + u * 20 * c5))) / (h * h);
      };
      double xs[3], ts[3];
      quintic(l.x, l.dx, l.ddx, r.x, r.dx, r.ddx, xs);
      quintic(l.t, l.dt, l.ddt, r.t, r.dt, r.ddt, ts);
      return {xs[0], ts[0], xs[1], ts[1], xs[2], ts[2]};
    };
    std::vector<double> bps;
    for (std::size_t i = 1; i + 1 < nodes->size(); ++i) bps.push_back((*nodes)[i].s);
    return from_function(tr.n, eval, nodes->front().s, nodes->back().s, closure, std::move(bps));
  }

  /// Whole profile of S_H from the south pole to the north pole.
  static RotationalProfile sphere(int n, double h) {
    if (!(h > 0.0)) fail(ErrorKind::InvalidArgument, "sphere needs H > 0");
    return from_function(n, [h](double phi) { return sphere_param(h, phi); }, 0.0, std::numbers::pi, Closure::Closed,
                         {0.5 * std::numbers::pi});
  }

  /// Vertical segment x = r, t in [t0, t0 + height].
  static RotationalProfile cylinder_band(int n, double r, double height, double t0 = 0.0) {
    if (!(r > 0.0) || !(height >= 0.0)) fail(ErrorKind::InvalidArgument, "cylinder band needs r > 0, height >= 0");
    return from_function(n, [r, t0](double s) { return CurveJet{r, t0 + s, 0.0, 1.0, 0.0, 0.0}; }, 0.0, height,
                         Closure::Truncated);
  }

  /// Boundary of the solid cylinder {|z| <= r, t0 <= t <= t0 + height}: bottom
  /// disc outwards, side upwards, top disc inwards.
  static RotationalProfile solid_cylinder(int n, double r, double height, double t0 = 0.0) {
    if (!(r > 0.0) || !(height > 0.0)) fail(ErrorKind::InvalidArgument, "solid cylinder needs r > 0, height > 0");
    std::vector<Segment> segs;
    segs.push_back({[t0](double s) { return CurveJet{s, t0, 1.0, 0.0, 0.0, 0.0}; }, 0.0, r, {}});
    segs.push_back({[r, t0](double s) { return CurveJet{r, t0 + s, 0.0, 1.0, 0.0, 0.0}; }, 0.0, height, {}});
    segs.push_back({[r, t0, height](double s) { return CurveJet{r - s, t0 + height, -1.0, 0.0, 0.0, 0.0}; }, 0.0, r, {}});
    return RotationalProfile(n, std::move(segs), Closure::Closed);
  }

  /// Horizontal segment t = t0, x in [x0, x1] (a piece of the hyperplane).
  static RotationalProfile hyperplane_piece(int n, double x0, double x1, double t0 = 0.0) {
    if (!(x0 >= 0.0) || !(x1 >= x0)) fail(ErrorKind::InvalidArgument, "hyperplane piece needs 0 <= x0 <= x1");
    return from_function(n, [t0](double s) { return CurveJet{s, t0, 1.0, 0.0, 0.0, 0.0}; }, x0, x1, Closure::Truncated);
  }

  int n() const noexcept { return n_; }
  Closure closure() const noexcept { return closure_; }
  const std::vector<Segment>& segments() const noexcept { return segments_; }

  RotationalProfile with_closure(Closure c) const {
    RotationalProfile p = *this;
    p.closure_ = c;
    return p;
  }

  /// Same curve traversed backwards.
  RotationalProfile reversed() const {
    std::vector<Segment> segs;
    for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) {
      const auto f = it->eval;
      const double a = it->a, b = it->b;
      std::vector<double> bps;
      for (auto bp = it->breakpoints.rbegin(); bp != it->breakpoints.rend(); ++bp) bps.push_back(a + b - *bp);
      segs.push_back({[f, a, b](double s) {
                        CurveJet c = f(a + b - s);
                        c.dx = -c.dx;
                        c.dt = -c.dt;
                        return c;
                      },
                      a, b, std::move(bps)});
    }
    return RotationalProfile(n_, std::move(segs), closure_);
  }

  /// Concatenation (curves are not required to join).
  friend RotationalProfile concatenate(const RotationalProfile& p, const RotationalProfile& q, Closure closure) {
    if (p.n_ != q.n_) fail(ErrorKind::DimensionMismatch, "concatenate: profiles in different dimensions");
    std::vector<Segment> segs = p.segments_;
    segs.insert(segs.end(), q.segments_.begin(), q.segments_.end());
    return RotationalProfile(p.n_, std::move(segs), closure);
  }

  /// Intervals between consecutive breakpoints of every segment.
  template <class Fn>
  void for_each_piece(Fn&& fn) const {
    for (const auto& seg : segments_) {
      double lo = seg.a;
      for (double bp : seg.breakpoints) {
        if (bp > lo && bp < seg.b) {
          fn(seg, lo, bp);
          lo = bp;
        }
      }
      if (seg.b > lo) fn(seg, lo, seg.b);
    }
  }

 private:
  int n_ = 1;
  std::vector<Segment> segments_;
  Closure closure_ = Closure::Unspecified;
};

struct MeasureOptions {
  QuadratureOptions quadrature{1e-14, 1e-12, 400000};
  int panels_per_piece = 1;
};

namespace detail {

template <class Density>
QuadratureResult integrate_profile(const RotationalProfile& p, Density&& density, const MeasureOptions& opt) {
  if (opt.panels_per_piece < 1) fail(ErrorKind::InvalidArgument, "panels_per_piece must be >= 1");
  QuadratureResult total;
  p.for_each_piece([&](const RotationalProfile::Segment& seg, double lo, double hi) {
    auto f = [&](double s) { return density(seg.eval(s)); };
    const double w = (hi - lo) / opt.panels_per_piece;
    for (int k = 0; k < opt.panels_per_piece; ++k) {
      const double a = lo + k * w;
      const double b = k + 1 == opt.panels_per_piece ? hi : a + w;
      total += integrate_adaptive(f, a, b, opt.quadrature);
    }
  });
  return total;
}

// The fast density is only used after it matches the Gram determinant on the profile.
inline void check_profile_density(const RotationalProfile& p) {
  p.for_each_piece([&](const RotationalProfile::Segment& seg, double lo, double hi) {
    for (double u : {0.25, 0.5, 0.75}) {
      const CurveJet c = seg.eval(lo + u * (hi - lo));
      if (c.x > 0.0 && (c.dx != 0.0 || c.dt != 0.0)) check_density(p.n(), c.x, c.dx, c.dt);
    }
  });
}

}  // namespace detail

/// P = sigma_{2n-1} * integral of x^{2n-1} sqrt(x^2 x'^2 + t'^2) along the
/// profile: the perimeter of the lateral hypersurface (caps excluded).
inline QuadratureResult perimeter(const RotationalProfile& p, const MeasureOptions& opt = {}) {
  if (p.closure() == Closure::Unspecified) {
    fail(ErrorKind::OpenProfile, "perimeter of an open profile needs a declared truncation or closure");
  }
  detail::check_profile_density(p);
  const int n = p.n();
  auto res = detail::integrate_profile(p, [n](const CurveJet& c) { return perimeter_density(n, std::abs(c.x), c.dx, c.dt); }, opt);
  const double k = unit_sphere_area(2 * n - 1);
  res.value *= k;
  res.error_estimate *= k;
  return res;
}

/// V = omega_{2n} * line integral of x^{2n} dt; positive when the profile
/// runs counterclockwise in the (x, t) half-plane.
inline QuadratureResult enclosed_volume(const RotationalProfile& p, const MeasureOptions& opt = {}) {
  if (p.closure() != Closure::Closed && p.closure() != Closure::Capped) {
    fail(ErrorKind::OpenProfile, "volume needs a closed or capped profile");
  }
  const int n = p.n();
  auto res = detail::integrate_profile(p, [n](const CurveJet& c) { return ipow(c.x, 2 * n) * c.dt; }, opt);
  const double k = unit_ball_volume(2 * n);
  res.value *= k;
  res.error_estimate *= k;
  return res;
}

/// A scalar function on the profile parameter with its derivative.
struct ProfileFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

struct FirstVariation {
  double numeric = 0.0;  // central difference of P along tau u N
  double formula = 0.0;  // -2n * integral of H u da
  double perimeter = 0.0;
};

/// Minimum radius allowed in the support of u.
inline constexpr double kVariationAxisTolerance = 1e-6;

namespace detail {

// Profile of the hypersurface moved by p -> p + eps u(p) N(p), taken in
// Euclidean coordinates at the point over w = e_1, where N has Euclidean
// components (-t', -x x', x'(1 + x^2)) / D, D = sqrt(x'^2 + t'^2 + x^2 x'^2).
inline CurveJet displaced(const CurveJet& c, double u, double du, double eps) {
  const double D2 = c.dx * c.dx + c.dt * c.dt + c.x * c.x * c.dx * c.dx;
  const double D = std::sqrt(D2);
  const double dD = (c.dx * c.ddx + c.dt * c.ddt + c.x * c.dx * c.dx * c.dx + c.x * c.x * c.dx * c.ddx) / D;
  const double a = -c.dt / D;
  const double da = -(c.ddt * D - c.dt * dD) / D2;
  const double bnum = c.x * c.dx;
  const double b = -bnum / D;
  const double db = -((c.dx * c.dx + c.x * c.ddx) * D - bnum * dD) / D2;
  const double m = c.dx * (1.0 + c.x * c.x);
  const double dm = c.ddx * (1.0 + c.x * c.x) + 2.0 * c.x * c.dx * c.dx;
  const double ce = m / D;
  const double dce = (dm * D - m * dD) / D2;

  const double X = c.x + eps * u * a;
  const double Y = eps * u * b;
  const double dX = c.dx + eps * (du * a + u * da);
  const double dY = eps * (du * b + u * db);
  const double r = std::hypot(X, Y);
  CurveJet out;
  out.x = r;
  out.t = c.t + eps * u * ce;
  out.dx = r > 0.0 ? (X * dX + Y * dY) / r : 0.0;
  out.dt = c.dt + eps * (du * ce + u * dce);
  return out;
}

}  // namespace detail

/// Central difference of the perimeter along the variation tau -> p + tau u N
/// and the value -2n * integral of H u da predicted by the first variation formula.
inline FirstVariation first_variation_check(const RotationalProfile& p, const ProfileFunction& u, double step = 1e-4,
                                            const MeasureOptions& opt = {}) {
  if (!(step > 0.0)) fail(ErrorKind::InvalidArgument, "step must be positive");
  if (!u.value || !u.derivative) fail(ErrorKind::InvalidArgument, "u needs a value and a derivative");
  const int n = p.n();
  // support check on a fine sample of every piece
  p.for_each_piece([&](const RotationalProfile::Segment& seg, double lo, double hi) {
    for (int k = 0; k <= 64; ++k) {
      const double s = lo + (hi - lo) * k / 64.0;
      if (u.value(s) != 0.0 && seg.eval(s).x <= kVariationAxisTolerance) {
        fail(ErrorKind::InvalidArgument, "support of u reaches the axis (singular set)");
      }
    }
  });
  auto perimeter_at = [&](double eps) {
    QuadratureResult total;
    p.for_each_piece([&](const RotationalProfile::Segment& seg, double lo, double hi) {
      auto f = [&](double s) {
        const CurveJet c = seg.eval(s);
        const double uv = u.value(s);
        if (uv == 0.0) return perimeter_density(n, std::abs(c.x), c.dx, c.dt);
        const CurveJet d = detail::displaced(c, uv, u.derivative(s), eps);
        return perimeter_density(n, d.x, d.dx, d.dt);
      };
      total += integrate_adaptive(f, lo, hi, opt.quadrature);
    });
    return total.value * unit_sphere_area(2 * n - 1);
  };
  FirstVariation out;
  out.numeric = (perimeter_at(step) - perimeter_at(-step)) / (2.0 * step);
  out.perimeter = perimeter_at(0.0);
  QuadratureResult f;
  p.for_each_piece([&](const RotationalProfile::Segment& seg, double lo, double hi) {
    auto g = [&](double s) {
      const double uv = u.value(s);
      if (uv == 0.0) return 0.0;
      const CurveJet c = seg.eval(s);
      return mean_curvature_rotational(c, n) * uv * area_density(n, c.x, c.dx, c.dt);
    };
    f += integrate_adaptive(g, lo, hi, opt.quadrature);
  });
  out.formula = -2.0 * n * f.value * unit_sphere_area(2 * n - 1);
  return out;
}

}  // namespace ccd
