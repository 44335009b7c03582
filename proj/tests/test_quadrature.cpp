#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ccd/quadrature.hpp"

using namespace ccd;

namespace {
const SingularMethod kMethods[] = {SingularMethod::Substitution, SingularMethod::DoubleExponential};
}

TEST(Adaptive, Polynomials) {
  auto r = integrate_adaptive([](double x) { return x * x * x - 2.0 * x + 1.0; }, -1.0, 2.0);
  EXPECT_NEAR(r.value, 3.75 - 3.0 + 3.0, 1e-13);
  EXPECT_GT(r.evaluations, 0);
  EXPECT_LE(r.error_estimate, 1e-12);
}

TEST(Adaptive, SmoothTranscendental) {
  auto r = integrate_adaptive([](double x) { return std::exp(-x * x); }, -6.0, 6.0);
  EXPECT_NEAR(r.value, std::sqrt(std::numbers::pi), 1e-13);
  r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  EXPECT_NEAR(r.value, 2.0, 1e-13);
}

TEST(Adaptive, EmptyInterval) { EXPECT_EQ(integrate_adaptive([](double) { return 1.0; }, 1.0, 1.0).value, 0.0); }

TEST(TanhSinh, SmoothAndSingular) {
  EXPECT_NEAR(tanh_sinh([](double x) { return std::exp(x); }, 0.0, 1.0).value, std::exp(1.0) - 1.0, 1e-13);
  EXPECT_NEAR(tanh_sinh([](double x) { return std::log(x); }, 0.0, 1.0).value, -1.0, 1e-11);
}

TEST(TanhSinh, OffsetsAvoidCancellationNearEndpoints) {
  // 1/sqrt((x - a)(b - x)) with a, b far from 0: the offsets give the exact gaps
  const double a = 1e4, b = a + 1e-3;
  auto g = [](double, double da, double db) { return 1.0 / std::sqrt(da * db); };
  EXPECT_NEAR(tanh_sinh_offsets(g, a, b).value, std::numbers::pi, 1e-10);
}

TEST(Singular, InverseSqrtLeft) {
  for (auto m : kMethods) {
    const auto r = singular_quadrature([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {true, false}, m);
    EXPECT_NEAR(r.value, 2.0, 1e-10);
  }
}

TEST(Singular, BothEnds) {
  for (auto m : kMethods) {
    const auto r =
        singular_quadrature([](double x) { return 1.0 / std::sqrt(x * (1.0 - x)); }, 0.0, 1.0, {true, true}, m);
    EXPECT_NEAR(r.value, std::numbers::pi, 1e-10);
  }
}

TEST(Singular, RightEndOnly) {
  for (auto m : kMethods) {
    const auto r =
        singular_quadrature([](double x) { return 1.0 / std::sqrt(2.0 - x); }, 1.0, 2.0, {false, true}, m);
    EXPECT_NEAR(r.value, 2.0, 1e-10);
  }
}

TEST(Singular, SphereHalfHeight) {
  // integral of H x^2 / sqrt(1 - H^2 x^2) over [0, 1/H] is pi / (4 H^2)
  for (double h : {0.5, 1.0, 2.0})
    for (auto m : kMethods) {
      auto f = [h](double x) { return h * x * x / std::sqrt((1.0 - h * x) * (1.0 + h * x)); };
      const auto r = singular_quadrature(f, 0.0, 1.0 / h, {false, true}, m);
      EXPECT_NEAR(r.value, std::numbers::pi / (4.0 * h * h), 1e-10) << h;
    }
}

TEST(Singular, RejectsReversedInterval) {
  try {
    singular_quadrature([](double) { return 1.0; }, 1.0, 0.0, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

TEST(Singular, ErrorEstimateIsReported) {
  const auto r = singular_quadrature([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {true, false});
  EXPECT_GE(r.error_estimate, 0.0);
  EXPECT_LT(r.error_estimate, 1e-8);
}
