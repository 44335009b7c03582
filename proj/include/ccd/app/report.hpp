#pragma once

// Run reports (family, radii, per-family geometry summary, diagnostics) and
// their CSV / JSON encodings.

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ccd/classify.hpp"
#include "ccd/closed_forms.hpp"
#include "ccd/measures.hpp"
#include "ccd/profile_ode.hpp"
#include "json.hpp"

namespace ccd::app {

using json = nlohmann::ordered_json;

struct Quantity {
  double value = 0.0;
  std::optional<double> error_estimate;
};

inline Quantity quantity(const QuadratureResult& r) { return {r.value, r.error_estimate}; }

/// Geometry of one period (unduloid, nodoid), of unit height (cylinder) or
/// of the whole hypersurface (sphere).
struct GeometrySummary {
  std::optional<Quantity> t1;
  std::optional<Quantity> t2;     // half-period
  std::optional<Quantity> t_inf;  // slab half-width of a catenoid, n >= 2
  std::optional<Quantity> period;
  std::optional<Quantity> perimeter;
  std::optional<Quantity> volume;
};

struct RunReport {
  std::string command;
  int n = 1;
  double h = 0.0;
  double e = 0.0;
  NormalizedParams normalized;
  FamilyLabel family = FamilyLabel::Hyperplane;
  std::optional<StructuralRadii> radii;
  std::optional<double> cylinder_energy;
  std::optional<std::string> closed_form;
  GeometrySummary summary;
  double energy_drift = 0.0;
  std::vector<ProfileEvent> events;
  std::vector<std::string> messages;
  std::optional<Trajectory> trajectory;
};

inline std::optional<std::string> closed_form_hint(FamilyLabel f, int n) {
  if (f == FamilyLabel::Sphere) return "t = (H x sqrt(1 - H^2 x^2) + arccos(H x)) / (2 H^2), 0 <= x <= 1/H";
  if (f == FamilyLabel::Catenoid && n == 1) return "x = sqrt(t^2 + E^4) / E";
  if (f == FamilyLabel::Catenoid) return "t_inf = integral of E x / sqrt(x^{4n-2} - E^2) over [E^{1/(2n-1)}, inf)";
  if (f == FamilyLabel::Hyperplane) return "t = const";
  return std::nullopt;
}

/// Family, radii and cylinder energy only.
inline RunReport classify_report(int n, double h, double e) {
  RunReport r;
  r.command = "classify";
  r.n = n;
  r.h = h;
  r.e = e;
  r.normalized = normalize_params(n, h, e);
  r.family = classify(n, h, e);
  const auto& p = r.normalized;
  if (p.h > 0.0) r.cylinder_energy = ccd::cylinder_energy(n, p.h);
  if (p.h != 0.0 && p.e != 0.0) r.radii = structural_radii(n, p.h, p.e);
  if (r.family == FamilyLabel::Cylinder) r.radii = StructuralRadii{cylinder_radius(n, p.h), cylinder_radius(n, p.h), std::nullopt};
  r.closed_form = closed_form_hint(r.family, n);
  if (p.flipped) r.messages.push_back("(H, E) normalized to (-H, -E)");
  return r;
}

/// Traces the canonical profile of (n, H, E) with the family's stop rule.
inline Trajectory trace_family(const CanonicalStart& cs, SolveConfig cfg, std::vector<std::string>* messages = nullptr) {
  const int n = cs.params.n;
  const double eps = trace_axis_epsilon(cs.family, n, cs.params.h, cfg.axis_epsilon, cfg.rel_tol);
  if (eps != cfg.axis_epsilon && messages) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "axis_epsilon raised to %.3g for a sphere with n = %d", eps, n);
    messages->push_back(buf);
  }
  cfg.axis_epsilon = eps;
  if (cfg.stop_at.empty()) cfg.stop_at = half_period_stop(cs.family);
  return integrate(cs.state, n, cs.params.h, cfg);
}

/// Classification plus the geometry summary, computed from quadrature and a traced profile.
inline RunReport full_report(int n, double h, double e, const SolveConfig& cfg = {}, bool keep_trajectory = false) {
  RunReport r = classify_report(n, h, e);
  r.command = "trace";
  const auto cs = canonical_start(n, h, e);
  const double hh = cs.params.h, ee = cs.params.e;
  Trajectory tr = trace_family(cs, cfg, &r.messages);
  r.energy_drift = tr.max_energy_drift;
  r.events = tr.events;
  auto& s = r.summary;
  switch (r.family) {
    case FamilyLabel::Hyperplane: break;
    case FamilyLabel::Catenoid:
      if (n >= 2) s.t_inf = quantity(catenoid_slab_halfwidth(n, ee));
      break;
    case FamilyLabel::Sphere: {
      const auto prof = RotationalProfile::sphere(n, hh);
      s.perimeter = quantity(perimeter(prof));
      s.volume = quantity(enclosed_volume(prof));
      break;
    }
    case FamilyLabel::Cylinder: {
      const double rad = cylinder_radius(n, hh);
      s.perimeter = Quantity{unit_sphere_area(2 * n - 1) * ipow(rad, 2 * n - 1), 0.0};
      s.volume = Quantity{unit_ball_volume(2 * n) * ipow(rad, 2 * n), 0.0};
      break;
    }
    case FamilyLabel::Unduloid:
    case FamilyLabel::Nodoid: {
      s.t1 = quantity(periodic_t1(n, hh, ee));
      const auto half = periodic_halfperiod(n, hh, ee);
      s.t2 = quantity(half);
      s.period = Quantity{2.0 * half.value, 2.0 * half.error_estimate};
      const Trajectory full = reflect_continue(tr, 1);
      const auto prof = RotationalProfile::from_trajectory(full, Closure::Capped);
      s.perimeter = quantity(perimeter(prof));
      if (r.family == FamilyLabel::Unduloid) s.volume = quantity(enclosed_volume(prof));
      break;
    }
  }
  if (keep_trajectory) r.trajectory = std::move(tr);
  return r;
}

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json quantity_json(const std::optional<Quantity>& q) {
  if (!q) return nullptr;
  json j;
  j["value"] = q->value;
  j["error_estimate"] = q->error_estimate ? json(*q->error_estimate) : json(nullptr);
  return j;
}

inline json state_json(const ProfileState& s) { return json{{"s", s.s}, {"x", s.x}, {"t", s.t}, {"sigma", s.sigma}}; }

inline json report_json(const RunReport& r) {
  json j;
  j["command"] = r.command;
  j["params"] = {{"n", r.n}, {"h", r.h}, {"e", r.e}};
  j["normalized"] = {{"h", r.normalized.h}, {"e", r.normalized.e}, {"flipped", r.normalized.flipped}};
  j["family"] = std::string(to_string(r.family));
  if (r.radii) {
    j["radii"] = {{"x1", r.radii->x1}, {"x2", r.radii->x2}, {"x0", r.radii->x0 ? json(*r.radii->x0) : json(nullptr)}};
  } else {
    j["radii"] = {{"x1", nullptr}, {"x2", nullptr}, {"x0", nullptr}};
  }
  j["cylinder_energy"] = r.cylinder_energy ? json(*r.cylinder_energy) : json(nullptr);
  j["closed_form"] = r.closed_form ? json(*r.closed_form) : json(nullptr);
  const auto& s = r.summary;
  j["summary"] = {{"t1", quantity_json(s.t1)},         {"t2", quantity_json(s.t2)},
                  {"t_inf", quantity_json(s.t_inf)},   {"period", quantity_json(s.period)},
                  {"perimeter", quantity_json(s.perimeter)}, {"volume", quantity_json(s.volume)}};
  json events = json::array();
  for (const auto& ev : r.events) {
    json e = state_json(ev.state);
    e["kind"] = std::string(to_string(ev.kind));
    events.push_back(e);
  }
  j["diagnostics"] = {{"energy_drift", r.energy_drift}, {"events", events}, {"messages", r.messages}};
  if (r.trajectory) {
    json samples = json::array();
    for (const auto& p : r.trajectory->samples) {
      samples.push_back({p.s, p.x, p.t, p.sigma, p.x > 0.0 ? energy(p, r.trajectory->n, r.trajectory->h) : r.trajectory->e});
    }
    j["trajectory"] = {{"columns", {"s", "x", "t", "sigma", "energy"}},
                       {"termination", std::string(to_string(r.trajectory->termination))},
                       {"samples", samples}};
  }
  return j;
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  os << "s,x,t,sigma,energy\n";
  for (const auto& p : tr.samples) {
    const double en = p.x > 0.0 ? energy(p, tr.n, tr.h) : tr.e;
    os << fmt17(p.s) << ',' << fmt17(p.x) << ',' << fmt17(p.t) << ',' << fmt17(p.sigma) << ',' << fmt17(en) << '\n';
  }
}

}  // namespace ccd::app
