#pragma once

// Sub-Riemannian mean curvature of hypersurfaces in H^n.
//
// Sign convention: -2n H = div_Sigma(nu_H) with respect to the chosen unit
// normal N. Rotational jets use the normal whose frame coordinates are
//   (x x' w_{n+k} - t' w_k, -x x' w_k - t' w_{n+k}, x') / sqrt(|g'|^2 + x^2 x'^2),
// which gives the spheres S_H positive curvature H.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <vector>

#include "ccd/heisenberg.hpp"

namespace ccd {

/// First and second order data of an immersion phi: B -> H^n at one point.
/// `tangents[j]` holds the frame coordinates (x_kj, y_kj, t_j) of d_j = e_j(phi),
/// `tangent_derivatives[i][j]` holds e_i applied to those coordinate functions.
/// The e_i are coordinate fields on B, so D_{e_i} d_j is symmetric in (i, j).
struct ImmersionJet {
  Point point;
  std::vector<FrameVector> tangents;
  std::vector<std::vector<FrameVector>> tangent_derivatives;
  FrameVector normal;

  std::size_t dim() const noexcept { return point.dim(); }
};

/// The same data in Euclidean coordinates of R^{2n+1}: first partials d_j phi
/// and second partials d_i d_j phi.
struct EuclideanJet {
  Point point;
  std::vector<FrameVector> first;
  std::vector<std::vector<FrameVector>> second;
};

namespace detail {

inline void check_jet_shape(const ImmersionJet& jet) {
  const std::size_t n = jet.dim();
  if (jet.tangents.size() != 2 * n || jet.tangent_derivatives.size() != 2 * n) {
    fail(ErrorKind::DimensionMismatch, "ImmersionJet: expected 2n tangents");
  }
  for (const auto& row : jet.tangent_derivatives) {
    if (row.size() != 2 * n) fail(ErrorKind::DimensionMismatch, "ImmersionJet: tangent derivative table must be 2n x 2n");
  }
  require_same_dim(jet.normal.dim(), n, "ImmersionJet normal");
}

inline Eigen::MatrixXd tangent_matrix(const ImmersionJet& jet) {
  const std::size_t n = jet.dim();
  Eigen::MatrixXd m(2 * n + 1, 2 * n);
  for (std::size_t j = 0; j < 2 * n; ++j) {
    for (std::size_t r = 0; r < 2 * n + 1; ++r) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = jet.tangents[j][r];
  }
  return m;
}

}  // namespace detail

/// Unit vector orthogonal to 2n tangent vectors, by the generalized cross
/// product (cofactor expansion). If `hint` is given the result is oriented so
/// that <N, hint> >= 0.
inline FrameVector unit_normal_from_tangents(const std::vector<FrameVector>& tangents, const FrameVector* hint = nullptr) {
  if (tangents.empty()) fail(ErrorKind::InvalidArgument, "unit_normal_from_tangents: no tangents");
  const std::size_t n = tangents.front().dim();
  if (tangents.size() != 2 * n) fail(ErrorKind::DimensionMismatch, "unit_normal_from_tangents: expected 2n tangents");
  const auto dim = static_cast<Eigen::Index>(2 * n + 1);
  Eigen::MatrixXd m(dim - 1, dim);
  for (Eigen::Index j = 0; j < dim - 1; ++j) {
    for (Eigen::Index r = 0; r < dim; ++r) m(j, r) = tangents[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)];
  }
  FrameVector nrm = FrameVector::zero(n);
  for (Eigen::Index r = 0; r < dim; ++r) {
    Eigen::MatrixXd minor(dim - 1, dim - 1);
    for (Eigen::Index c = 0, cc = 0; c < dim; ++c) {
      if (c == r) continue;
      minor.col(cc++) = m.col(c);
    }
    const double sign = ((r + dim - 1) % 2 == 0) ? 1.0 : -1.0;
    nrm[static_cast<std::size_t>(r)] = sign * minor.determinant();
  }
  const double len = norm(nrm);
  if (!(len > 0.0)) fail(ErrorKind::DegenerateTangents, "tangent vectors are linearly dependent");
  nrm *= 1.0 / len;
  if (hint != nullptr && dot(nrm, *hint) < 0.0) nrm *= -1.0;
  return nrm;
}

/// Rewrites a Euclidean jet in the left-invariant frame and attaches a normal.
inline ImmersionJet jet_from_euclidean(const EuclideanJet& e, const FrameVector& normal) {
  const std::size_t n = e.point.dim();
  const std::size_t m = 2 * n;
  if (e.first.size() != m || e.second.size() != m) fail(ErrorKind::DimensionMismatch, "EuclideanJet: expected 2n partials");
  ImmersionJet jet;
  jet.point = e.point;
  jet.normal = normal;
  jet.tangents.reserve(m);
  for (const auto& d : e.first) jet.tangents.push_back(frame_from_euclidean(e.point, d));
  jet.tangent_derivatives.assign(m, std::vector<FrameVector>(m, FrameVector::zero(n)));
  for (std::size_t i = 0; i < m; ++i) {
    if (e.second[i].size() != m) fail(ErrorKind::DimensionMismatch, "EuclideanJet: second partials must be 2n x 2n");
    for (std::size_t j = 0; j < m; ++j) {
      const FrameVector& h = e.second[i][j];
      FrameVector d = frame_from_euclidean(e.point, h);
      // The T coefficient c_j = t_j - sum a_kj y_k + sum b_kj x_k also varies
      // through the base point: d_i y_k = b_ki and d_i x_k = a_ki.
      for (std::size_t k = 0; k < n; ++k) {
        d.c += -e.first[j].a[k] * e.first[i].b[k] + e.first[j].b[k] * e.first[i].a[k];
      }
      jet.tangent_derivatives[i][j] = d;
    }
  }
  return jet;
}

inline ImmersionJet jet_from_euclidean(const EuclideanJet& e, const FrameVector* orientation_hint = nullptr) {
  std::vector<FrameVector> tangents;
  tangents.reserve(e.first.size());
  for (const auto& d : e.first) tangents.push_back(frame_from_euclidean(e.point, d));
  return jet_from_euclidean(e, unit_normal_from_tangents(tangents, orientation_hint));
}

/// D_{e_i} d_j: e_i(x_kj) - t_i y_kj - t_j y_ki on X_k, e_i(y_kj) + t_i x_kj + t_j x_ki
/// on Y_k, and e_i(t_j) + sum_k (x_kj y_ki - x_ki y_kj) on T.
inline FrameVector covariant_derivative(const ImmersionJet& jet, std::size_t i, std::size_t j) {
  return jet.tangent_derivatives.at(i).at(j) + connection_constant(jet.tangents.at(i), jet.tangents.at(j));
}

/// II_ij = <N, D_{e_i} d_j>.
inline Eigen::MatrixXd second_fundamental_form(const ImmersionJet& jet, double unit_tol = 1e-9) {
  detail::check_jet_shape(jet);
  if (std::abs(norm(jet.normal) - 1.0) > unit_tol) fail(ErrorKind::NonUnitNormal, "second_fundamental_form: |N| != 1");
  const auto m = static_cast<Eigen::Index>(2 * jet.dim());
  Eigen::MatrixXd ii(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      ii(i, j) = dot(jet.normal, covariant_derivative(jet, static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
    }
  }
  return ii;
}

/// Orthonormal basis {Z_1 = G(nu_H), Z_2, ..., Z_{2n-1}} of the horizontal
/// tangent space, completed by Gram-Schmidt over the frame vectors X_k, Y_k
/// with pivoting on the largest projected norm.
inline std::vector<FrameVector> horizontal_tangent_basis(const FrameVector& nu_h) {
  const std::size_t n = nu_h.dim();
  std::vector<FrameVector> basis{g_operator(nu_h)};
  std::vector<FrameVector> against{nu_h, basis.front()};
  std::vector<FrameVector> candidates;
  for (std::size_t i = 0; i < 2 * n; ++i) candidates.push_back(FrameVector::basis(n, i));
  while (basis.size() < 2 * n - 1) {
    double best = -1.0;
    FrameVector pick;
    for (const auto& cand : candidates) {
      FrameVector v = cand;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : against) v -= dot(v, q) * q;
      }
      const double len = norm(v);
      if (len > best) {
        best = len;
        pick = v;
      }
    }
    if (!(best > 1e-8)) fail(ErrorKind::DegenerateTangents, "horizontal tangent basis could not be completed");
    pick *= 1.0 / best;
    basis.push_back(pick);
    against.push_back(pick);
  }
  return basis;
}

/// Components of a tangent vector in the basis d_j (least squares on the Gram system).
inline Eigen::VectorXd tangent_coordinates(const ImmersionJet& jet, const FrameVector& v) {
  const Eigen::MatrixXd a = detail::tangent_matrix(jet);
  Eigen::VectorXd rhs(a.rows());
  for (Eigen::Index r = 0; r < a.rows(); ++r) rhs(r) = v[static_cast<std::size_t>(r)];
  const Eigen::MatrixXd gram = a.transpose() * a;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.vectorD().minCoeff() <= 1e-14 * ldlt.vectorD().maxCoeff()) {
    fail(ErrorKind::DegenerateTangents, "tangent vectors are linearly dependent");
  }
  return ldlt.solve(a.transpose() * rhs);
}

/// 2n H = |N_H|^{-1} sum_i II(Z_i, Z_i) over an orthonormal horizontal tangent basis.
inline double mean_curvature_general(const ImmersionJet& jet, double singular_tol = kSingularTolerance) {
  const Eigen::MatrixXd ii = second_fundamental_form(jet);
  const FrameVector nu_h = horizontal_unit_normal(jet.normal, singular_tol);
  const double nh = norm(horizontal_part(jet.normal));
  double trace = 0.0;
  for (const auto& z : horizontal_tangent_basis(nu_h)) {
    const Eigen::VectorXd c = tangent_coordinates(jet, z);
    trace += c.dot(ii * c);
  }
  return trace / (2.0 * static_cast<double>(jet.dim()) * nh);
}

/// Value and derivatives up to order two of f at (x, y), for graphs t = f(x, y) in H^1.
struct GraphJet2 {
  double f = 0, fx = 0, fy = 0, fxx = 0, fxy = 0, fyy = 0;
};

/// 2H = -[(f_y + x)^2 f_xx + (f_x - y)^2 f_yy - 2 (f_x - y)(f_y + x) f_xy]
///      / ((f_x - y)^2 + (f_y + x)^2)^{3/2}.
inline double mean_curvature_graph_h1(const GraphJet2& g, double x, double y, double singular_tol = 1e-14) {
  const double p = g.fx - y;
  const double q = g.fy + x;
  const double den2 = p * p + q * q;
  if (!(den2 > singular_tol)) fail(ErrorKind::SingularPoint, "graph is horizontal at this point");
  const double num = q * q * g.fxx + p * p * g.fyy - 2.0 * p * q * g.fxy;
  return -0.5 * num / std::pow(den2, 1.5);
}

/// Immersion (x, y) -> (x, y, f(x, y)) with the downward normal
/// (T coefficient negative), the orientation in which mean_curvature_graph_h1 holds.
inline ImmersionJet graph_jet_h1(const GraphJet2& g, double x, double y) {
  EuclideanJet e;
  e.point = Point({x}, {y}, g.f);
  e.first = {FrameVector({1.0}, {0.0}, g.fx), FrameVector({0.0}, {1.0}, g.fy)};
  e.second = {{FrameVector({0.0}, {0.0}, g.fxx), FrameVector({0.0}, {0.0}, g.fxy)},
              {FrameVector({0.0}, {0.0}, g.fxy), FrameVector({0.0}, {0.0}, g.fyy)}};
  const FrameVector down = -FrameVector::T(1);
  return jet_from_euclidean(e, &down);
}

/// Radial function t = h(r) seen as a graph over the xy-plane.
inline GraphJet2 radial_graph_jet(double h, double dh, double ddh, double x, double y) {
  const double r2 = x * x + y * y;
  const double r = std::sqrt(r2);
  if (!(r > 0.0)) fail(ErrorKind::AxisPoint, "radial_graph_jet: r = 0");
  GraphJet2 g;
  g.f = h;
  g.fx = dh * x / r;
  g.fy = dh * y / r;
  const double a = ddh / r2;
  const double b = dh / (r * r2);
  g.fxx = a * x * x + b * y * y;
  g.fyy = a * y * y + b * x * x;
  g.fxy = (a - b) * x * y;
  return g;
}

/// Second-order data of a generating curve gamma = (x, t) at one parameter value.
/// Derivatives are with respect to the curve parameter (arclength when |gamma'| = 1).
struct CurveJet {
  double x = 0, t = 0, dx = 0, dt = 0, ddx = 0, ddt = 0;
};

/// 2n H = [x^3 (x' t'' - x'' t') + (2n-1) t'^3 + 2(n-1) x^2 x'^2 t'] / (x (x^2 x'^2 + t'^2)^{3/2}).
inline double mean_curvature_rotational(const CurveJet& c, int n, double singular_tol = 1e-14) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "n must be >= 1");
  if (!(c.x > 0.0)) fail(ErrorKind::AxisPoint, "mean_curvature_rotational: x must be positive");
  const double q = c.x * c.x * c.dx * c.dx + c.dt * c.dt;
  if (!(q > singular_tol)) fail(ErrorKind::SingularPoint, "mean_curvature_rotational: x^2 x'^2 + t'^2 vanishes");
  const double nn = static_cast<double>(n);
  const double num = c.x * c.x * c.x * (c.dx * c.ddt - c.ddx * c.dt) + (2.0 * nn - 1.0) * c.dt * c.dt * c.dt +
                     2.0 * (nn - 1.0) * c.x * c.x * c.dx * c.dx * c.dt;
  return num / (2.0 * nn * c.x * std::pow(q, 1.5));
}

/// u_2 = (-w_{n+k}, w_k) followed by a Gram-Schmidt completion to an
/// orthonormal basis {u_2, ..., u_{2n}} of the tangent space of S^{2n-1} at w.
inline std::vector<std::vector<double>> sphere_tangent_frame(const std::vector<double>& omega) {
  const std::size_t m = omega.size();
  const std::size_t n = m / 2;
  std::vector<std::vector<double>> out;
  std::vector<double> u2(m);
  for (std::size_t k = 0; k < n; ++k) {
    u2[k] = -omega[n + k];
    u2[n + k] = omega[k];
  }
  out.push_back(u2);
  std::vector<std::vector<double>> against{omega, u2};
  auto proj = [&](std::vector<double> v) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : against) {
        double d = 0;
        for (std::size_t i = 0; i < m; ++i) d += v[i] * q[i];
        for (std::size_t i = 0; i < m; ++i) v[i] -= d * q[i];
      }
    }
    return v;
  };
  while (out.size() < m - 1) {
    double best = -1;
    std::vector<double> pick;
    for (std::size_t e = 0; e < m; ++e) {
      std::vector<double> v(m, 0.0);
      v[e] = 1.0;
      v = proj(v);
      double len = 0;
      for (double vi : v) len += vi * vi;
      len = std::sqrt(len);
      if (len > best) {
        best = len;
        pick = v;
      }
    }
    for (double& vi : pick) vi /= best;
    out.push_back(pick);
    against.push_back(pick);
  }
  return out;
}

/// Unit normal of a rotational hypersurface at (s, omega), in frame coordinates.
inline FrameVector rotational_normal(const CurveJet& c, const std::vector<double>& omega) {
  const std::size_t n = omega.size() / 2;
  const double den = std::sqrt(c.dx * c.dx + c.dt * c.dt + c.x * c.x * c.dx * c.dx);
  FrameVector nrm = FrameVector::zero(n);
  for (std::size_t k = 0; k < n; ++k) {
    nrm.a[k] = (c.x * c.dx * omega[n + k] - c.dt * omega[k]) / den;
    nrm.b[k] = (-c.x * c.dx * omega[k] - c.dt * omega[n + k]) / den;
  }
  nrm.c = c.dx / den;
  return nrm;
}

/// Jet of phi(s, v) = (x(s) f(v), t(s)) where f(v) = (w + sum v_j u_j) / |w + sum v_j u_j|
/// is a chart of S^{2n-1} around w with d_j f = u_j and d_i d_j f = -delta_ij w at v = 0.
inline ImmersionJet rotational_jet(const CurveJet& c, const std::vector<double>& omega) {
  const std::size_t m = omega.size();
  if (m < 2 || m % 2 != 0) fail(ErrorKind::DimensionMismatch, "rotational_jet: omega must lie in R^{2n}");
  const std::size_t n = m / 2;
  double len2 = 0;
  for (double w : omega) len2 += w * w;
  if (std::abs(len2 - 1.0) > 1e-12) fail(ErrorKind::InvalidArgument, "rotational_jet: omega must be a unit vector");
  const auto u = sphere_tangent_frame(omega);

  auto horizontal = [n](const std::vector<double>& v, double scale, double tcoef) {
    FrameVector f = FrameVector::zero(n);
    for (std::size_t k = 0; k < n; ++k) {
      f.a[k] = scale * v[k];
      f.b[k] = scale * v[n + k];
    }
    f.c = tcoef;
    return f;
  };

  EuclideanJet e;
  {
    std::vector<double> px(n), py(n);
    for (std::size_t k = 0; k < n; ++k) {
      px[k] = c.x * omega[k];
      py[k] = c.x * omega[n + k];
    }
    e.point = Point(px, py, c.t);
  }
  e.first.push_back(horizontal(omega, c.dx, c.dt));
  for (const auto& uj : u) e.first.push_back(horizontal(uj, c.x, 0.0));
  e.second.assign(m, std::vector<FrameVector>(m, FrameVector::zero(n)));
  e.second[0][0] = horizontal(omega, c.ddx, c.ddt);
  for (std::size_t j = 1; j < m; ++j) {
    e.second[0][j] = horizontal(u[j - 1], c.dx, 0.0);
    e.second[j][0] = e.second[0][j];
    e.second[j][j] = horizontal(omega, -c.x, 0.0);
  }
  return jet_from_euclidean(e, rotational_normal(c, omega));
}

/// |D_Z Z - 2 H nu_H| at parameter u0 of a surface patch in H^1, with D_Z Z
/// obtained from central differences of nu_H along Z (Z = G(nu_H) is linear
/// in nu_H with constant coefficients). `patch` maps std::array<double, 2>
/// to an ImmersionJet with a consistently oriented normal.
template <class Patch>
double chmy_identity_residual(const Patch& patch, std::array<double, 2> u0, double rel_step = 1e-5) {
  const ImmersionJet jet0 = patch(u0);
  if (jet0.dim() != 1) fail(ErrorKind::DimensionMismatch, "chmy_identity_residual requires n = 1");
  const double h_mc = mean_curvature_general(jet0);
  const FrameVector nu0 = horizontal_unit_normal(jet0.normal);
  const FrameVector z = g_operator(nu0);
  const Eigen::VectorXd dir = tangent_coordinates(jet0, z);
  const double step = rel_step * std::max(1.0, std::hypot(u0[0], u0[1]));
  const std::array<double, 2> up{u0[0] + step * dir(0), u0[1] + step * dir(1)};
  const std::array<double, 2> um{u0[0] - step * dir(0), u0[1] - step * dir(1)};
  const FrameVector nu_p = horizontal_unit_normal(patch(up).normal);
  const FrameVector nu_m = horizontal_unit_normal(patch(um).normal);
  const FrameVector dnu = (1.0 / (2.0 * step)) * (nu_p - nu_m);
  const FrameVector dzz = g_operator(dnu) + connection_constant(z, z);
  return norm(dzz - 2.0 * h_mc * nu0);
}

}  // namespace ccd
