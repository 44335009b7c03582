#pragma once

// Adaptive Gauss-Kronrod (G7/K15) and two treatments of integrable
// inverse-square-root endpoint singularities: the substitution x = a + u^2
// (mirrored at b) followed by adaptive Gauss-Kronrod, and the tanh-sinh
// (double exponential) transform.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "ccd/error.hpp"

namespace ccd {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;

  QuadratureResult& operator+=(const QuadratureResult& o) {
    value += o.value;
    error_estimate += o.error_estimate;
    evaluations += o.evaluations;
    return *this;
  }
};

struct QuadratureOptions {
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  int max_evaluations = 400000;
};

namespace detail {

// 15-point Kronrod nodes (non-negative half) with the embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                                         0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment kronrod15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * kKronrodWeights[7];
  double g = fc * kGaussWeights[3];
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = h * kKronrodNodes[i];
    const double s = f(c - dx) + f(c + dx);
    k += kKronrodWeights[i] * s;
    if (i % 2 == 1) g += kGaussWeights[i / 2] * s;
  }
  return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace detail

/// Single G7/K15 panel; value from the Kronrod rule, error |K15 - G7|.
template <class F>
QuadratureResult gauss_kronrod15(F&& f, double a, double b) {
  const auto s = detail::kronrod15(f, a, b);
  return {s.value, s.error, 15};
}

/// Globally adaptive G7/K15 on a finite interval.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  if (!std::isfinite(a) || !std::isfinite(b)) fail(ErrorKind::InvalidArgument, "integrate_adaptive: finite limits required");
  if (a == b) return {};
  std::priority_queue<detail::Segment> queue;
  auto first = detail::kronrod15(f, a, b);
  double total = first.value;
  double err = first.error;
  int evals = 15;
  queue.push(first);
  while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    if (evals + 30 > opt.max_evaluations) {
      fail(ErrorKind::NonConvergence,
           "adaptive quadrature exhausted its budget (error " + std::to_string(err) + ", value " + std::to_string(total) + ")");
    }
    const auto worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval cannot be split further in double precision; accept it.
      queue.push({worst.a, worst.b, worst.value, 0.0});
      err -= worst.error;
      continue;
    }
    const auto l = detail::kronrod15(f, worst.a, mid);
    const auto r = detail::kronrod15(f, mid, worst.b);
    evals += 30;
    total += l.value + r.value - worst.value;
    err += l.error + r.error - worst.error;
    queue.push(l);
    queue.push(r);
  }
  // Re-sum to shed the drift of incremental updates.
  double sum = 0.0, esum = 0.0;
  while (!queue.empty()) {
    sum += queue.top().value;
    esum += queue.top().error;
    queue.pop();
  }
  // never claim better than rounding
  esum = std::max(esum, 50.0 * std::numeric_limits<double>::epsilon() * std::abs(sum));
  return {sum, esum, evals};
}

/// Which endpoints carry an inverse-square-root singularity.
struct EndpointSingularity {
  bool left = false;
  bool right = false;
};

enum class SingularMethod { Substitution, DoubleExponential };

/// Tanh-sinh rule on [a, b] for an integrand g(x, x - a, b - x). The two
/// offsets are exact near the endpoint they refer to, so g can resolve
/// cancellation at a singular endpoint.
template <class G>
QuadratureResult tanh_sinh_offsets(G&& g, double a, double b, const QuadratureOptions& opt = {}) {
  using std::numbers::pi;
  if (a == b) return {};
  const double len = b - a;
  const double tmax = 6.5;
  int evals = 0;
  // outermost evaluated node on each side: its distance to the endpoint and |g|
  double edge_dist[2] = {0.0, 0.0}, edge_val[2] = {0.0, 0.0}, edge_tau[2] = {0.0, 0.0};
  auto term = [&](double tau) -> double {
    const double y = 0.5 * pi * std::sinh(tau);
    // distance to the endpoint approached as |tau| grows
    const double dist = len / (std::exp(2.0 * std::abs(y)) + 1.0);
    if (!(dist > 0.0)) return 0.0;
    const double cy = std::cosh(y);
    const double w = 0.25 * pi * std::cosh(tau) / (cy * cy) * len;
    ++evals;
    const double v = tau >= 0.0 ? g(b - dist, len - dist, dist) : g(a + dist, dist, len - dist);
    if (!std::isfinite(v)) return 0.0;
    const int side = tau >= 0.0 ? 1 : 0;
    if (std::abs(tau) >= edge_tau[side]) {
      edge_tau[side] = std::abs(tau);
      edge_dist[side] = dist;
      edge_val[side] = std::abs(v);
    }
    return w * v;
  };
  // mass left out beyond the outermost nodes, sized for an inverse square root
  auto dropped = [&] { return 2.0 * (edge_dist[0] * edge_val[0] + edge_dist[1] * edge_val[1]); };
  double h = 1.0;
  double sum = term(0.0);
  for (double tau = h; tau <= tmax; tau += h) sum += term(tau) + term(-tau);
  double prev = sum * h;
  double diff = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= 10; ++level) {
    h *= 0.5;
    for (double tau = h; tau <= tmax; tau += 2.0 * h) sum += term(tau) + term(-tau);
    const double cur = sum * h;
    diff = std::abs(cur - prev);
    prev = cur;
    if (level >= 3 && diff <= std::max(opt.abs_tol, opt.rel_tol * std::abs(cur))) return {cur, diff + dropped(), evals};
    if (evals > opt.max_evaluations) break;
  }
  // An integrand that only sees x cannot be sampled closer to an endpoint
  // than its floating-point spacing, which caps the attainable accuracy;
  // report the stagnated estimate unless it is clearly unconverged.
  if (diff <= 1e-6 * std::max(1.0, std::abs(prev))) return {prev, diff + dropped(), evals};
  fail(ErrorKind::NonConvergence, "tanh-sinh quadrature did not converge");
}

template <class F>
QuadratureResult tanh_sinh(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  return tanh_sinh_offsets([&](double x, double, double) { return f(x); }, a, b, opt);
}

/// singular_quadrature for an integrand g(x, x - a, b - x); see tanh_sinh_offsets.
template <class G>
QuadratureResult singular_quadrature_offsets(G&& g, double a, double b, EndpointSingularity sing,
                                             SingularMethod method = SingularMethod::Substitution,
                                             const QuadratureOptions& opt = {}) {
  if (!(b >= a)) fail(ErrorKind::InvalidArgument, "singular_quadrature: b < a");
  if (a == b) return {};
  if (method == SingularMethod::DoubleExponential) return tanh_sinh_offsets(g, a, b, opt);
  const double len = b - a;

  auto left_piece = [&](double hi) {
    // x = a + u^2, dx = 2u du
    auto k = [&](double u) { return 2.0 * u * g(a + u * u, u * u, len - u * u); };
    return integrate_adaptive(k, 0.0, std::sqrt(hi - a), opt);
  };
  auto right_piece = [&](double lo) {
    auto k = [&](double u) { return 2.0 * u * g(b - u * u, len - u * u, u * u); };
    return integrate_adaptive(k, 0.0, std::sqrt(b - lo), opt);
  };
  if (sing.left && sing.right) {
    const double mid = 0.5 * (a + b);
    auto res = left_piece(mid);
    res += right_piece(mid);
    return res;
  }
  if (sing.left) return left_piece(b);
  if (sing.right) return right_piece(a);
  return integrate_adaptive([&](double x) { return g(x, x - a, b - x); }, a, b, opt);
}

/// Integral of f over [a, b] where f may blow up like 1/sqrt(x - a) and/or
/// 1/sqrt(b - x) at the declared endpoints.
template <class F>
QuadratureResult singular_quadrature(F&& f, double a, double b, EndpointSingularity sing,
                                     SingularMethod method = SingularMethod::Substitution,
                                     const QuadratureOptions& opt = {}) {
  if (!(a < b)) throw Error(ErrorKind::InvalidArgument, "singular_quadrature: need a < b");
  if (!sing.left && !sing.right) {
    return method == SingularMethod::DoubleExponential ? tanh_sinh(f, a, b, opt) : integrate_adaptive(f, a, b, opt);
  }
  auto rule = [&](auto&& k, double hi) {
    return method == SingularMethod::DoubleExponential ? tanh_sinh(k, 0.0, hi, opt)
                                                       : integrate_adaptive(k, 0.0, hi, opt);
  };
  // jacobian from the gap actually realised in floating point
  auto left_piece = [&](double hi) {
    auto k = [&](double u) {
      double x = a + u * u;
      if (x <= a) x = std::nextafter(a, b);
      const double d = x - a;
      return 2.0 * std::sqrt(d) * f(x);
    };
    return rule(k, std::sqrt(hi - a));
  };
  auto right_piece = [&](double lo) {
    auto k = [&](double u) {
      double x = b - u * u;
      if (x >= b) x = std::nextafter(b, a);
      const double d = b - x;
      return 2.0 * std::sqrt(d) * f(x);
    };
    return rule(k, std::sqrt(b - lo));
  };
  if (sing.left && sing.right) {
    const double mid = 0.5 * (a + b);
    const auto l = left_piece(mid), r = right_piece(mid);
    return {l.value + r.value, l.error_estimate + r.error_estimate, l.evaluations + r.evaluations};
  }
  return sing.left ? left_piece(b) : right_piece(a);
}

}  // namespace ccd
