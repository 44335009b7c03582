#pragma once

// Heisenberg group H^n = (R^{2n+1}, *) with the left-invariant frame
// X_k = d/dx_k + y_k d/dt,  Y_k = d/dy_k - x_k d/dt,  T = d/dt
// and the Riemannian metric g that makes {X_k, Y_k, T} orthonormal.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ccd/error.hpp"

namespace ccd {

inline void require_same_dim(std::size_t lhs, std::size_t rhs, const char* where) {
  if (lhs != rhs) {
    fail(ErrorKind::DimensionMismatch,
         std::string(where) + ": dimensions " + std::to_string(lhs) + " and " + std::to_string(rhs));
  }
}

/// Point [z, t] of H^n in coordinates (x_k, y_k, t), z_k = x_k + i y_k.
struct Point {
  std::vector<double> x;
  std::vector<double> y;
  double t = 0.0;

  Point() = default;
  Point(std::vector<double> xs, std::vector<double> ys, double tt) : x(std::move(xs)), y(std::move(ys)), t(tt) {
    if (x.empty()) fail(ErrorKind::InvalidArgument, "Point: n must be >= 1");
    require_same_dim(x.size(), y.size(), "Point");
  }

  static Point origin(std::size_t n) { return Point(std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0.0); }

  std::size_t dim() const noexcept { return x.size(); }
};

/// Tangent vector in frame coordinates: sum a_k X_k + b_k Y_k + c T.
/// These are never Euclidean components; see frame_from_euclidean().
struct FrameVector {
  std::vector<double> a;
  std::vector<double> b;
  double c = 0.0;

  FrameVector() = default;
  FrameVector(std::vector<double> as, std::vector<double> bs, double cc) : a(std::move(as)), b(std::move(bs)), c(cc) {
    require_same_dim(a.size(), b.size(), "FrameVector");
  }

  static FrameVector zero(std::size_t n) { return FrameVector(std::vector<double>(n), std::vector<double>(n), 0.0); }
  static FrameVector X(std::size_t n, std::size_t k) {
    auto v = zero(n);
    v.a.at(k) = 1.0;
    return v;
  }
  static FrameVector Y(std::size_t n, std::size_t k) {
    auto v = zero(n);
    v.b.at(k) = 1.0;
    return v;
  }
  static FrameVector T(std::size_t n) {
    auto v = zero(n);
    v.c = 1.0;
    return v;
  }

  /// Basis vector E_i in the order X_1..X_n, Y_1..Y_n, T.
  static FrameVector basis(std::size_t n, std::size_t i) {
    if (i < n) return X(n, i);
    if (i < 2 * n) return Y(n, i - n);
    return T(n);
  }

  std::size_t dim() const noexcept { return a.size(); }

  /// Coefficient i in the order X_1..X_n, Y_1..Y_n, T.
  double operator[](std::size_t i) const {
    const std::size_t n = dim();
    return i < n ? a[i] : (i < 2 * n ? b[i - n] : c);
  }
  double& operator[](std::size_t i) {
    const std::size_t n = dim();
    return i < n ? a[i] : (i < 2 * n ? b[i - n] : c);
  }

  FrameVector& operator+=(const FrameVector& o) {
    require_same_dim(dim(), o.dim(), "FrameVector +=");
    for (std::size_t k = 0; k < dim(); ++k) {
      a[k] += o.a[k];
      b[k] += o.b[k];
    }
    c += o.c;
    return *this;
  }
  FrameVector& operator-=(const FrameVector& o) {
    require_same_dim(dim(), o.dim(), "FrameVector -=");
    for (std::size_t k = 0; k < dim(); ++k) {
      a[k] -= o.a[k];
      b[k] -= o.b[k];
    }
    c -= o.c;
    return *this;
  }
  FrameVector& operator*=(double s) {
    for (std::size_t k = 0; k < dim(); ++k) {
      a[k] *= s;
      b[k] *= s;
    }
    c *= s;
    return *this;
  }

  friend FrameVector operator+(FrameVector l, const FrameVector& r) { return l += r; }
  friend FrameVector operator-(FrameVector l, const FrameVector& r) { return l -= r; }
  friend FrameVector operator*(double s, FrameVector v) { return v *= s; }
  friend FrameVector operator*(FrameVector v, double s) { return v *= s; }
  friend FrameVector operator-(FrameVector v) { return v *= -1.0; }
};

/// Metric g, for which the left-invariant frame is orthonormal.
inline double dot(const FrameVector& u, const FrameVector& v) {
  require_same_dim(u.dim(), v.dim(), "dot");
  double s = u.c * v.c;
  for (std::size_t k = 0; k < u.dim(); ++k) s += u.a[k] * v.a[k] + u.b[k] * v.b[k];
  return s;
}

inline double norm(const FrameVector& u) { return std::sqrt(dot(u, u)); }

/// [z,t] * [z',t'] = [z + z', t + t' + Im(sum z_k conj(z'_k))].
inline Point group_product(const Point& p, const Point& q) {
  require_same_dim(p.dim(), q.dim(), "group_product");
  Point r = p;
  double im = 0.0;
  for (std::size_t k = 0; k < p.dim(); ++k) {
    r.x[k] += q.x[k];
    r.y[k] += q.y[k];
    im += p.y[k] * q.x[k] - p.x[k] * q.y[k];
  }
  r.t = p.t + q.t + im;
  return r;
}

inline Point group_inverse(const Point& p) {
  Point r = p;
  for (std::size_t k = 0; k < p.dim(); ++k) {
    r.x[k] = -p.x[k];
    r.y[k] = -p.y[k];
  }
  r.t = -p.t;
  return r;
}

/// Euclidean vector (a, b, c) attached at p, rewritten in the left-invariant frame.
/// The T coefficient is c - sum a_k y_k + sum b_k x_k.
inline FrameVector frame_from_euclidean(const Point& p, const FrameVector& euclidean) {
  require_same_dim(p.dim(), euclidean.dim(), "frame_from_euclidean");
  FrameVector v = euclidean;
  for (std::size_t k = 0; k < p.dim(); ++k) v.c += -euclidean.a[k] * p.y[k] + euclidean.b[k] * p.x[k];
  return v;
}

inline FrameVector euclidean_from_frame(const Point& p, const FrameVector& frame) {
  require_same_dim(p.dim(), frame.dim(), "euclidean_from_frame");
  FrameVector v = frame;
  for (std::size_t k = 0; k < p.dim(); ++k) v.c += frame.a[k] * p.y[k] - frame.b[k] * p.x[k];
  return v;
}

/// D_U V for U, V with constant frame coefficients, expanded over
///   D_{X_k}Y_j = -d_kj T,  D_{X_k}T = Y_k,  D_{Y_k}X_j = d_kj T,
///   D_{Y_k}T = -X_k,       D_T X_k = Y_k,   D_T Y_k = -X_k,
/// with all remaining pairs zero.
inline FrameVector connection_constant(const FrameVector& u, const FrameVector& v) {
  require_same_dim(u.dim(), v.dim(), "connection");
  const std::size_t n = u.dim();
  FrameVector r = FrameVector::zero(n);
  for (std::size_t k = 0; k < n; ++k) {
    r.a[k] = -u.b[k] * v.c - u.c * v.b[k];
    r.b[k] = u.a[k] * v.c + u.c * v.a[k];
    r.c += u.b[k] * v.a[k] - u.a[k] * v.b[k];
  }
  return r;
}

/// A frame field sampled at one point: its coefficient vector and the
/// derivatives E_i(coefficients) along each frame direction E_i
/// (ordered X_1..X_n, Y_1..Y_n, T).
struct FrameFieldJet {
  FrameVector value;
  std::vector<FrameVector> derivatives;

  static FrameFieldJet constant(const FrameVector& v) {
    return {v, std::vector<FrameVector>(2 * v.dim() + 1, FrameVector::zero(v.dim()))};
  }
};

/// D_U V at `at` by the Leibniz rule: U(coefficients of V) plus the connection
/// terms of the frame. The frame's connection coefficients are constant, so
/// `at` only fixes the dimension.
inline FrameVector connection(const FrameVector& u, const FrameFieldJet& v, const Point& at) {
  const std::size_t n = at.dim();
  require_same_dim(u.dim(), n, "connection");
  require_same_dim(v.value.dim(), n, "connection");
  if (v.derivatives.size() != 2 * n + 1) {
    fail(ErrorKind::DimensionMismatch, "connection: expected 2n+1 frame derivatives");
  }
  FrameVector r = connection_constant(u, v.value);
  for (std::size_t i = 0; i < 2 * n + 1; ++i) {
    const double ui = u[i];
    if (ui != 0.0) r += ui * v.derivatives[i];
  }
  return r;
}

/// G(U) = D_U T: X_k -> Y_k, Y_k -> -X_k, T -> 0.
inline FrameVector g_operator(const FrameVector& u) {
  FrameVector r = FrameVector::zero(u.dim());
  for (std::size_t k = 0; k < u.dim(); ++k) {
    r.a[k] = -u.b[k];
    r.b[k] = u.a[k];
  }
  return r;
}

inline FrameVector horizontal_part(const FrameVector& u) {
  FrameVector r = u;
  r.c = 0.0;
  return r;
}

inline bool is_horizontal(const FrameVector& u) { return u.c == 0.0; }

/// Relative tolerance on |N_H| / |N| below which a point is treated as singular.
inline constexpr double kSingularTolerance = 1e-12;

/// nu_H = N_H / |N_H|. Throws SingularPoint when |N_H| <= tol * |N|.
inline FrameVector horizontal_unit_normal(const FrameVector& normal, double tol = kSingularTolerance) {
  const FrameVector nh = horizontal_part(normal);
  const double len = norm(nh);
  if (!(len > tol * norm(normal))) {
    fail(ErrorKind::SingularPoint, "horizontal part of the normal vanishes (|N_H| = " + std::to_string(len) + ")");
  }
  return (1.0 / len) * nh;
}

}  // namespace ccd
