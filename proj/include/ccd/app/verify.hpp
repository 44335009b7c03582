#pragma once

// Self-check suites behind `ccd verify`.

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ccd/app/report.hpp"
#include "ccd/classify.hpp"
#include "ccd/closed_forms.hpp"
#include "ccd/curvature.hpp"
#include "ccd/measures.hpp"
#include "ccd/profile_ode.hpp"

namespace ccd::app {

struct Check {
  std::string suite;
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"energy", "closed-forms", "curvature", "classification", "measures"};
  return names;
}

namespace detail {

struct Recorder {
  std::string suite;
  std::vector<Check>& out;

  // passes when measured <= tol
  void le(const std::string& name, double measured, double tol) {
    out.push_back({suite, name, std::isfinite(measured) && measured <= tol, measured, tol, ""});
  }
  void ok(const std::string& name, bool cond, const std::string& detail = "") {
    out.push_back({suite, name, cond, cond ? 1.0 : 0.0, 1.0, detail});
  }
  template <class Fn>
  void guard(const std::string& name, Fn&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      out.push_back({suite, name, false, 0.0, 0.0, e.what()});
    }
  }
};

// E for a grid cell: alpha in [-1, 1] scales the cylinder energy (H != 0) or is E itself (H = 0).
inline double grid_energy(int n, double h, double alpha) {
  if (h == 0.0) return alpha;
  const double ec = ccd::cylinder_energy(n, std::abs(h));
  return (h > 0.0 ? 1.0 : -1.0) * alpha * ec;
}

}  // namespace detail

inline void verify_energy(std::vector<Check>& out) {
  detail::Recorder rec{"energy", out};
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (double h : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      for (double alpha : {-1.0, -0.3, 0.0, 0.5, 1.0}) {
        const double e = detail::grid_energy(n, h, alpha);
        rec.guard("trace n=" + std::to_string(n), [&] {
          const auto cs = canonical_start(n, h, e);
          SolveConfig cfg;
          cfg.max_arclength = 50.0;
          cfg.axis_epsilon = trace_axis_epsilon(cs.family, n, cs.params.h, cfg.axis_epsilon, cfg.rel_tol);
          const Trajectory tr = integrate(cs.state, n, cs.params.h, cfg);
          const double rel = tr.max_energy_drift / (1.0 + std::abs(tr.e));
          worst = std::max(worst, rel);
        });
      }
    }
  }
  rec.le("max relative energy drift over the (n, H, E) grid", worst, 1e-9);
}

inline void verify_closed_forms(std::vector<Check>& out) {
  detail::Recorder rec{"closed-forms", out};
  rec.guard("sphere trace", [&] {
    for (double h : {0.5, 1.0, 2.0}) {
      SolveConfig cfg;
      const Trajectory tr = integrate({0.0, 1.0 / h, 0.0, 0.0}, 1, h, cfg);
      double sup = 0.0;
      for (const auto& p : tr.samples) sup = std::max(sup, std::abs(p.t - sphere_profile(h, std::min(p.x, 1.0 / h))));
      rec.le("sphere n=1 H=" + fmt17(h) + " sup |t - t_closed|", sup, 1e-6);
      rec.le("sphere n=1 H=" + fmt17(h) + " 1 - |sin sigma| at the axis", 1.0 - std::abs(std::sin(tr.back().sigma)), 1e-3);
    }
  });
  rec.guard("catenoid trace", [&] {
    for (double e : {0.5, 1.0, 2.0}) {
      SolveConfig cfg;
      cfg.max_arclength = 30.0;
      const Trajectory tr = reflect_continue(integrate({0.0, e, 0.0, 0.0}, 1, 0.0, cfg), 1);
      double sup = 0.0;
      for (const auto& p : tr.samples)
        if (std::abs(p.t) <= 10.0) sup = std::max(sup, std::abs(p.x - catenoid_profile_h1(e, p.t)));
      rec.le("catenoid n=1 E=" + fmt17(e) + " sup |x - x_closed|", sup, 1e-6);
    }
  });
  rec.guard("half-periods", [&] {
    struct P {
      int n;
      double h, e;
    };
    for (const P& p : {P{1, 1.0, -0.1}, P{2, 1.0, -0.3}, P{3, 0.7, -2.0}, P{1, 1.0, 0.1}, P{2, 1.0, 0.1}}) {
      const auto cs = canonical_start(p.n, p.h, p.e);
      const Trajectory tr = trace_family(cs, {});
      const auto q = periodic_halfperiod(p.n, p.h, p.e);
      rec.le(std::string(to_string(cs.family)) + " n=" + std::to_string(p.n) + " |t2 - t(s2)|", std::abs(q.value - tr.back().t),
             1e-6);
      if (cs.family == FamilyLabel::Nodoid) {
        const auto f = nodoid_halfperiod_forms(p.n, p.h, p.e);
        rec.le("nodoid n=" + std::to_string(p.n) + " |raw - regularized|", std::abs(f.raw.value - f.regularized.value), 1e-8);
        rec.ok("nodoid n=" + std::to_string(p.n) + " t2 > 0", q.value > 0.0);
      }
    }
  });
  rec.guard("slab", [&] {
    const auto a = catenoid_slab_halfwidth(2, 1.0, SingularMethod::Substitution);
    const auto b = catenoid_slab_halfwidth(2, 1.0, SingularMethod::DoubleExponential);
    rec.le("t_inf n=2 E=1, substitution vs double exponential", std::abs(a.value - b.value), 1e-6);
    bool diverged = false;
    try {
      catenoid_slab_halfwidth(1, 1.0);
    } catch (const Error& e) {
      diverged = e.kind() == ErrorKind::Divergent;
    }
    rec.ok("t_inf n=1 reported divergent", diverged);
  });
  rec.guard("sphere derivative", [&] {
    double worst = 0.0;
    for (double x = 0.05; x < 0.9; x += 0.05) {
      const double d = 1e-5;
      const double fd = (sphere_profile(1.0, x + d) - sphere_profile(1.0, x - d)) / (2 * d);
      worst = std::max(worst, std::abs(fd - sphere_profile_derivative(1.0, x)));
    }
    rec.le("sphere dt/dx vs central differences", worst, 1e-6);
  });
}

inline void verify_curvature(std::vector<Check>& out) {
  detail::Recorder rec{"curvature", out};
  rec.guard("cylinder", [&] {
    double worst = 0.0;
    for (int n = 1; n <= 4; ++n)
      for (double r : {0.25, 0.5, 1.0, 2.0, 5.0}) {
        const double hc = mean_curvature_rotational({r, 0.0, 0.0, 1.0, 0.0, 0.0}, n);
        worst = std::max(worst, std::abs(hc - (2.0 * n - 1.0) / (2.0 * n * r)));
      }
    rec.le("cylinder H = (2n-1)/(2nr)", worst, 1e-12);
  });
  rec.guard("rotational vs general", [&] {
    double worst = 0.0;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int n = 1; n <= 3; ++n)
      for (int k = 0; k < 10; ++k) {
        const double phi = 3.0 * U(rng);
        const CurveJet c{1.0 + 0.5 * U(rng), U(rng), std::sin(phi), std::cos(phi), U(rng), U(rng)};
        std::vector<double> w(2 * static_cast<std::size_t>(n));
        double len = 0;
        for (auto& v : w) {
          v = U(rng);
          len += v * v;
        }
        for (auto& v : w) v /= std::sqrt(len);
        worst = std::max(worst, std::abs(mean_curvature_general(rotational_jet(c, w)) - mean_curvature_rotational(c, n)));
      }
    rec.le("rotational formula vs second fundamental form", worst, 1e-8);
  });
  rec.guard("graphs", [&] {
    double worst = 0.0;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.3, 1.5), A(0.0, 2.0 * std::numbers::pi);
    for (int k = 0; k < 100; ++k) {
      const double rho = U(rng), th = A(rng);
      const double x = rho * std::cos(th), y = rho * std::sin(th);
      // t = rho^3 / 3 - rho
      const auto g = radial_graph_jet(rho * rho * rho / 3.0 - rho, rho * rho - 1.0, 2.0 * rho, x, y);
      try {
        worst = std::max(worst, std::abs(mean_curvature_graph_h1(g, x, y) - mean_curvature_general(graph_jet_h1(g, x, y))));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularPoint) throw;
      }
    }
    rec.le("graph formula vs general pipeline (100 points)", worst, 1e-8);
  });
  rec.guard("chmy", [&] {
    auto plane = [](std::array<double, 2> u) { return graph_jet_h1(GraphJet2{}, u[0], u[1]); };
    // (t, theta) on the unit cylinder
    auto cylinder = [](std::array<double, 2> u) {
      const double c = std::cos(u[1]), s = std::sin(u[1]);
      EuclideanJet e;
      e.point = Point({c}, {s}, u[0]);
      e.first = {FrameVector({0.0}, {0.0}, 1.0), FrameVector({-s}, {c}, 0.0)};
      e.second = {{FrameVector::zero(1), FrameVector::zero(1)}, {FrameVector::zero(1), FrameVector({-c}, {-s}, 0.0)}};
      return jet_from_euclidean(e, rotational_normal({1.0, u[0], 0.0, 1.0, 0.0, 0.0}, {c, s}));
    };
    // t = sqrt(r^2 - 1), E = 1
    auto catenoid = [](std::array<double, 2> u) {
      const double r2 = u[0] * u[0] + u[1] * u[1], r = std::sqrt(r2);
      const double f = std::sqrt(r2 - 1.0);
      return graph_jet_h1(radial_graph_jet(f, r / f, 1.0 / f - r2 / (f * f * f), u[0], u[1]), u[0], u[1]);
    };
    rec.le("CHMY identity on the plane", chmy_identity_residual(plane, {1.0, 2.0}), 1e-6);
    rec.le("CHMY identity on the cylinder", chmy_identity_residual(cylinder, {0.3, 0.7}), 1e-6);
    rec.le("CHMY identity on the catenoid", chmy_identity_residual(catenoid, {1.5, 0.8}), 1e-6);
  });
}

inline void verify_classification(std::vector<Check>& out) {
  detail::Recorder rec{"classification", out};
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> N(1, 4);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  std::uniform_int_distribution<int> kind(0, 5);
  int mismatches = 0, invariance = 0;
  for (int i = 0; i < 1000; ++i) {
    const int n = N(rng);
    const int k = kind(rng);
    double h = k == 0 ? 0.0 : U(rng);
    double e = U(rng);
    if (k == 1) e = 0.0;
    if (k == 2 && h != 0.0) e = (h > 0 ? 1.0 : -1.0) * ccd::cylinder_energy(n, std::abs(h));
    if (k == 3 && h != 0.0) e = (h > 0 ? 1.0 : -1.0) * 0.5 * ccd::cylinder_energy(n, std::abs(h)) * std::abs(U(rng));
    // expected label from the sign table, with E_cyl = r^{2n-1} / (2n), r = (2n-1)/(2n|H|)
    std::string expect;
    if (h == 0.0) {
      expect = e == 0.0 ? "Hyperplane" : "Catenoid";
    } else if (e == 0.0) {
      expect = "Sphere";
    } else if (e * h < 0.0) {
      expect = "Nodoid";
    } else {
      const double r = (2.0 * n - 1.0) / (2.0 * n * std::abs(h));
      const double ec = std::pow(r, 2 * n - 1) / (2.0 * n);
      const double rel = (std::abs(e) - ec) / ec;
      expect = std::abs(rel) <= 1e-12 ? "Cylinder" : (rel > 0 ? "none" : "Unduloid");
    }
    auto label = [&](double hh, double ee) -> std::string {
      try {
        return std::string(to_string(classify(n, hh, ee)));
      } catch (const Error& er) {
        return er.kind() == ErrorKind::NoAdmissibleRadius ? "none" : "error";
      }
    };
    if (label(h, e) != expect) ++mismatches;
    if (label(-h, -e) != label(h, e)) ++invariance;
  }
  rec.le("truth table mismatches (1000 samples)", mismatches, 0);
  rec.le("(H, E) -> (-H, -E) label changes", invariance, 0);
}

inline void verify_measures(std::vector<Check>& out) {
  detail::Recorder rec{"measures", out};
  rec.guard("sphere", [&] {
    for (int n = 1; n <= 2; ++n) {
      const double h = 1.0;
      const auto closed = RotationalProfile::sphere(n, h);
      const auto cs = canonical_start(n, h, 0.0);
      const Trajectory tr = reflect_continue(trace_family(cs, {}), 1);
      const auto ode = RotationalProfile::from_trajectory(tr, Closure::Closed);
      const double pc = perimeter(closed).value, po = perimeter(ode).value;
      rec.le("sphere n=" + std::to_string(n) + " perimeter closed form vs trace", std::abs(pc - po) / pc, 1e-5);
    }
  });
  rec.guard("cylinder", [&] {
    const double p = perimeter(RotationalProfile::cylinder_band(1, 1.0, 1.0)).value;
    rec.le("cylinder band n=1 r=1 height 1: |P - 2 pi|", std::abs(p - 2 * std::numbers::pi), 1e-10);
    const double v = enclosed_volume(RotationalProfile::solid_cylinder(1, 1.0, 1.0)).value;
    rec.le("solid cylinder n=1 r=1 height 1: |V - pi|", std::abs(v - std::numbers::pi), 1e-10);
  });
  rec.guard("first variation", [&] {
    const auto band = RotationalProfile::cylinder_band(1, 1.0, 1.0);
    const auto fv = first_variation_check(band, {[](double) { return 1.0; }, [](double) { return 0.0; }});
    rec.le("cylinder first variation relative error", std::abs(fv.numeric - fv.formula) / std::abs(fv.formula), 1e-3);
  });
  rec.guard("gram", [&] {
    double worst = 0.0;
    for (int n = 1; n <= 3; ++n)
      for (double phi = 0.1; phi < 6.2; phi += 0.4) {
        const double x = 0.7, dx = std::sin(phi), dt = std::cos(phi);
        worst = std::max(worst, std::abs(gram_perimeter_density(n, x, dx, dt) - perimeter_density(n, x, dx, dt)));
      }
    rec.le("sqrt(det Gram) |N_H| vs x^{2n-1} sqrt(x^2 x'^2 + t'^2)", worst, 1e-12);
  });
}

/// Runs the named suite ("all" runs every suite).
inline std::vector<Check> run_verify(const std::string& suite) {
  std::vector<Check> out;
  const std::vector<std::pair<std::string, std::function<void(std::vector<Check>&)>>> suites{
      {"energy", verify_energy},
      {"closed-forms", verify_closed_forms},
      {"curvature", verify_curvature},
      {"classification", verify_classification},
      {"measures", verify_measures}};
  bool found = false;
  for (const auto& [name, fn] : suites) {
    if (suite == "all" || suite == name) {
      fn(out);
      found = true;
    }
  }
  if (!found) fail(ErrorKind::InvalidArgument, "unknown suite '" + suite + "'");
  return out;
}

inline json verify_json(const std::string& suite, const std::vector<Check>& checks) {
  json j;
  j["suite"] = suite;
  bool all = true;
  json arr = json::array();
  for (const auto& c : checks) {
    all = all && c.passed;
    arr.push_back({{"suite", c.suite},
                   {"name", c.name},
                   {"passed", c.passed},
                   {"measured", c.measured},
                   {"tolerance", c.tolerance},
                   {"detail", c.detail}});
  }
  j["passed"] = all;
  j["checks"] = arr;
  return j;
}

}  // namespace ccd::app
