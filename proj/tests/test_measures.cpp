#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ccd/closed_forms.hpp"
#include "ccd/measures.hpp"
#include "ccd/profile_ode.hpp"

using namespace ccd;

namespace {

constexpr double kPi = std::numbers::pi;

template <class Fn>
ErrorKind error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::Io;
}

// smooth bump on (a, b), C^2 at the ends
ProfileFunction bump(double a, double b) {
  return {[a, b](double s) { return s > a && s < b ? std::pow((s - a) * (b - s), 3) : 0.0; },
          [a, b](double s) {
            if (!(s > a && s < b)) return 0.0;
            const double q = (s - a) * (b - s);
            return 3.0 * q * q * (a + b - 2.0 * s);
          }};
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Densities, HorizontalNormal) {
  EXPECT_DOUBLE_EQ(horizontal_normal_density(0.7, 0.0, 1.0), 1.0);
  for (double x : {0.1, 1.0, 3.0}) EXPECT_NEAR(horizontal_normal_density(x, 1.0, 0.0), x / std::sqrt(1 + x * x), 1e-15);
  EXPECT_EQ(error_of([] { horizontal_normal_density(0.0, 1.0, 0.0); }), ErrorKind::AxisPoint);
  EXPECT_EQ(error_of([] { horizontal_normal_density(1.0, 0.0, 0.0); }), ErrorKind::InvalidArgument);
}

TEST(Densities, HorizontalNormalFromTheRotationalNormal) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> X(0.1, 3.0), A(0.0, 2 * kPi);
  for (int k = 0; k < 50; ++k) {
    const double x = X(rng), phi = A(rng);
    const FrameVector nrm = rotational_normal({x, 0.0, std::sin(phi), std::cos(phi), 0.0, 0.0}, {1.0, 0.0});
    EXPECT_NEAR(norm(horizontal_part(nrm)) / norm(nrm), horizontal_normal_density(x, std::sin(phi), std::cos(phi)), 1e-14);
  }
}

TEST(Densities, GramDeterminantAgreesWithTheClosedForm) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> X(0.05, 4.0), A(0.0, 2 * kPi);
  for (int n = 1; n <= 4; ++n)
    for (int k = 0; k < 40; ++k) {
      const double x = X(rng), phi = A(rng);
      const double g = gram_perimeter_density(n, x, std::sin(phi), std::cos(phi));
      const double f = perimeter_density(n, x, std::sin(phi), std::cos(phi));
      EXPECT_NEAR(g, f, 1e-12 * std::max(1.0, f)) << n << " " << x << " " << phi;
    }
}

TEST(Densities, UnitSphereAndBall) {
  EXPECT_NEAR(unit_sphere_area(1), 2 * kPi, 1e-14);
  EXPECT_NEAR(unit_sphere_area(3), 2 * kPi * kPi, 1e-13);
  EXPECT_NEAR(unit_ball_volume(2), kPi, 1e-14);
  EXPECT_NEAR(unit_ball_volume(4), kPi * kPi / 2, 1e-14);
}

TEST(Perimeter, CylinderBand) {
  EXPECT_NEAR(perimeter(RotationalProfile::cylinder_band(1, 1.0, 1.0)).value, 2 * kPi, 1e-12);
  for (int n = 1; n <= 3; ++n)
    for (double r : {0.5, 2.0})
      EXPECT_NEAR(perimeter(RotationalProfile::cylinder_band(n, r, 3.0)).value,
                  3.0 * unit_sphere_area(2 * n - 1) * std::pow(r, 2 * n - 1), 1e-11);
}

TEST(Perimeter, ZeroLengthProfile) {
  EXPECT_EQ(perimeter(RotationalProfile::cylinder_band(2, 1.0, 0.0)).value, 0.0);
  EXPECT_EQ(perimeter(RotationalProfile::hyperplane_piece(1, 0.5, 0.5)).value, 0.0);
}

TEST(Perimeter, OpenProfileNeedsAClosureTag) {
  const auto p = RotationalProfile::cylinder_band(1, 1.0, 1.0).with_closure(Closure::Unspecified);
  EXPECT_EQ(error_of([&] { perimeter(p); }), ErrorKind::OpenProfile);
}

TEST(Perimeter, HyperplaneDiscMatchesPolarIntegral) {
  // sigma_{2n-1} * integral of x^{2n} over [0, R]
  for (int n = 1; n <= 3; ++n)
    EXPECT_NEAR(perimeter(RotationalProfile::hyperplane_piece(n, 0.0, 1.5)).value,
                unit_sphere_area(2 * n - 1) * std::pow(1.5, 2 * n + 1) / (2 * n + 1), 1e-11);
}

TEST(Perimeter, SphereClosedFormAgainstTrace) {
  for (int n = 1; n <= 2; ++n) {
    const double h = 1.0;
    const double pc = perimeter(RotationalProfile::sphere(n, h)).value;
    const auto cs = canonical_start(n, h, 0.0);
    SolveConfig cfg;
    cfg.axis_epsilon = trace_axis_epsilon(cs.family, n, h, cfg.axis_epsilon, cfg.rel_tol);
    const auto tr = reflect_continue(integrate(cs.state, n, h, cfg), 1);
    const double po = perimeter(RotationalProfile::from_trajectory(tr, Closure::Closed)).value;
    EXPECT_LE(rel(po, pc), 1e-5) << n;
  }
}

TEST(Perimeter, AdditiveOverConcatenation) {
  const auto a = RotationalProfile::cylinder_band(1, 1.0, 1.0);
  const auto b = RotationalProfile::cylinder_band(1, 1.0, 1.5, 1.0);
  const auto ab = concatenate(a, b, Closure::Truncated);
  EXPECT_NEAR(perimeter(ab).value, perimeter(a).value + perimeter(b).value, 1e-10);
  EXPECT_NEAR(perimeter(ab).value, perimeter(RotationalProfile::cylinder_band(1, 1.0, 2.5)).value, 1e-10);

  const auto s = RotationalProfile::sphere(2, 1.3);
  const auto lower = RotationalProfile::from_function(2, [](double phi) { return sphere_param(1.3, phi); }, 0.0, 1.0,
                                                      Closure::Truncated);
  const auto upper = RotationalProfile::from_function(2, [](double phi) { return sphere_param(1.3, phi); }, 1.0, kPi,
                                                      Closure::Truncated, {kPi / 2});
  EXPECT_NEAR(perimeter(concatenate(lower, upper, Closure::Closed)).value, perimeter(s).value, 1e-10);
  EXPECT_GT(perimeter(lower).value, 0.0);
  EXPECT_EQ(error_of([&] { concatenate(lower, a, Closure::Truncated); }), ErrorKind::DimensionMismatch);
}

TEST(Perimeter, PartitionIndependence) {
  const auto s = RotationalProfile::sphere(2, 0.8);
  MeasureOptions fine;
  fine.panels_per_piece = 2;
  const auto a = perimeter(s), b = perimeter(s, fine);
  EXPECT_LE(std::abs(a.value - b.value), a.error_estimate + b.error_estimate);
  const auto va = enclosed_volume(s), vb = enclosed_volume(s, fine);
  EXPECT_LE(std::abs(va.value - vb.value), va.error_estimate + vb.error_estimate);
}

TEST(Perimeter, RadialDerivativeOfTheCylinder) {
  for (int n = 1; n <= 3; ++n) {
    const double r = 0.9, d = 1e-5;
    auto P = [&](double rr) { return perimeter(RotationalProfile::cylinder_band(n, rr, 1.0)).value; };
    const double fd = (P(r + d) - P(r - d)) / (2 * d);
    EXPECT_NEAR(fd, (2 * n - 1) * unit_sphere_area(2 * n - 1) * std::pow(r, 2 * n - 2), 1e-6);
  }
}

TEST(Volume, SolidCylinder) {
  EXPECT_NEAR(enclosed_volume(RotationalProfile::solid_cylinder(1, 1.0, 1.0)).value, kPi, 1e-12);
  EXPECT_NEAR(enclosed_volume(RotationalProfile::solid_cylinder(2, 2.0, 0.5)).value, unit_ball_volume(4) * 16.0 * 0.5,
              1e-11);
}

TEST(Volume, SphereLineIntegralAgainstSlicing) {
  // slices: R(t) solves sphere_profile(H, R) = |t|
  for (int n = 1; n <= 2; ++n) {
    const double h = 1.0;
    auto radius_at = [h](double t) {
      double lo = 0.0, hi = 1.0 / h;
      for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (sphere_profile(h, mid) > t ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    };
    QuadratureOptions opt;
    opt.abs_tol = 1e-11;
    opt.rel_tol = 1e-10;
    const double half = integrate_adaptive([&](double t) { return std::pow(radius_at(t), 2 * n); }, 0.0,
                                           sphere_profile(h, 0.0), opt)
                            .value;
    const double slicing = 2.0 * unit_ball_volume(2 * n) * half;
    EXPECT_NEAR(enclosed_volume(RotationalProfile::sphere(n, h)).value, slicing, 1e-6) << n;
  }
  EXPECT_NEAR(enclosed_volume(RotationalProfile::sphere(1, 1.0)).value, 3 * kPi * kPi / 8, 1e-12);
}

TEST(Volume, ReversalFlipsTheSign) {
  const auto s = RotationalProfile::sphere(1, 2.0);
  EXPECT_NEAR(enclosed_volume(s.reversed()).value, -enclosed_volume(s).value, 1e-14);
  const auto c = RotationalProfile::solid_cylinder(1, 1.0, 1.0);
  EXPECT_NEAR(enclosed_volume(c.reversed()).value, -kPi, 1e-12);
  EXPECT_NEAR(perimeter(s.reversed()).value, perimeter(s).value, 1e-13);
}

TEST(Volume, OpenProfileRejected) {
  EXPECT_EQ(error_of([] { enclosed_volume(RotationalProfile::cylinder_band(1, 1.0, 1.0)); }), ErrorKind::OpenProfile);
}

TEST(FirstVariation, HyperplaneIsStationary) {
  const auto p = RotationalProfile::hyperplane_piece(1, 0.2, 2.0);
  const auto fv = first_variation_check(p, bump(0.5, 1.5));
  EXPECT_EQ(fv.formula, 0.0);
  EXPECT_LE(std::abs(fv.numeric), 1e-6);
}

TEST(FirstVariation, CylinderConstantField) {
  for (int n = 1; n <= 2; ++n) {
    const auto band = RotationalProfile::cylinder_band(n, 1.0, 1.0);
    const auto fv = first_variation_check(band, {[](double) { return 1.0; }, [](double) { return 0.0; }});
    EXPECT_LE(rel(fv.numeric, fv.formula), 1e-3) << n;
    EXPECT_NE(fv.formula, 0.0);
  }
}

TEST(FirstVariation, SphereBumpAwayFromThePoles) {
  for (int n = 1; n <= 2; ++n) {
    const auto fv = first_variation_check(RotationalProfile::sphere(n, 1.0), bump(0.5, 2.5));
    EXPECT_LE(rel(fv.numeric, fv.formula), 1e-3) << n;
  }
}

TEST(FirstVariation, SupportMustAvoidTheAxis) {
  const auto p = RotationalProfile::sphere(1, 1.0);
  EXPECT_EQ(error_of([&] { first_variation_check(p, {[](double) { return 1.0; }, [](double) { return 0.0; }}); }),
            ErrorKind::InvalidArgument);
}

TEST(FromTrajectory, PeriodicProfileWithCaps) {
  SolveConfig cfg;
  cfg.stop_at = {{EventKind::CriticalRadius, 1}};
  const auto half = integrate(canonical_start(1, 1.0, 0.1).state, 1, 1.0, cfg);
  const auto prof = RotationalProfile::from_trajectory(reflect_continue(half, 1), Closure::Capped);
  EXPECT_GT(perimeter(prof).value, 0.0);
  EXPECT_GT(enclosed_volume(prof).value, 0.0);
}
