#pragma once

// Generating curves gamma(s) = (x(s), t(s)) of rotationally invariant CMC
// hypersurfaces, parameterized by arclength with sigma the angle between
// gamma' and d/dt:
//   x' = sin(sigma),  t' = cos(sigma),
//   sigma' = (2n-1) cos^3/x^3 + 2(n-1) sin^2 cos/x - 2nH (x^2 sin^2 + cos^2)^{3/2}/x^2.
// Integrated with Dormand-Prince 5(4), PI step control, cubic Hermite dense
// output for event bracketing, and a monitored first integral.

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccd/classify.hpp"
#include "ccd/error.hpp"

namespace ccd {

struct ProfileState {
  double s = 0.0;
  double x = 0.0;
  double t = 0.0;
  double sigma = 0.0;
};

struct ProfileDerivative {
  double dx = 0.0;
  double dt = 0.0;
  double dsigma = 0.0;
};

enum class EventKind { CriticalRadius, VerticalTangent, AxisContact, EnergyDrift };

inline std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::CriticalRadius: return "CriticalRadius";
    case EventKind::VerticalTangent: return "VerticalTangent";
    case EventKind::AxisContact: return "AxisContact";
    case EventKind::EnergyDrift: return "EnergyDrift";
  }
  return "Unknown";
}

struct ProfileEvent {
  EventKind kind;
  ProfileState state;
};

/// Stop when the `occurrence`-th event of `kind` is reached.
struct StopRule {
  EventKind kind = EventKind::CriticalRadius;
  int occurrence = 1;
};

struct SolveConfig {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  double max_step = 0.05;
  double initial_step = 1e-4;
  double axis_epsilon = 1e-6;
  double max_arclength = 50.0;
  std::vector<StopRule> stop_at;
  double energy_drift_tol = 1e-8;  // relative: |E - E0| <= tol * (1 + |E0|)
  double output_step = 0.0;        // 0: every accepted step; > 0: uniform grid in s
  long max_steps = 5'000'000;
};

enum class Termination { MaxArclength, AxisContact, StopEvent };

inline std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::MaxArclength: return "MaxArclength";
    case Termination::AxisContact: return "AxisContact";
    case Termination::StopEvent: return "StopEvent";
  }
  return "Unknown";
}

struct Trajectory {
  int n = 1;
  double h = 0.0;
  double e = 0.0;
  std::vector<ProfileState> samples;
  std::vector<ProfileEvent> events;
  Termination termination = Termination::MaxArclength;
  double max_energy_drift = 0.0;
  long accepted_steps = 0;
  long rejected_steps = 0;
  std::vector<std::string> diagnostics;

  const ProfileState& front() const { return samples.front(); }
  const ProfileState& back() const { return samples.back(); }
  double arclength() const { return samples.empty() ? 0.0 : samples.back().s - samples.front().s; }

  std::vector<ProfileEvent> events_of(EventKind k) const {
    std::vector<ProfileEvent> out;
    for (const auto& ev : events)
      if (ev.kind == k) out.push_back(ev);
    return out;
  }
};

class EnergyDriftError : public Error {
 public:
  EnergyDriftError(const std::string& what, Trajectory partial)
      : Error(ErrorKind::EnergyDrift, what), partial_(std::move(partial)) {}
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  Trajectory partial_;
};

namespace detail {

inline double sigma_prime_sc(int n, double h, double x, double s, double c) {
  const double w = std::sqrt(x * x * s * s + c * c);
  const double nn = static_cast<double>(n);
#ifdef CCD_MUTATE_CURVATURE_SIGN
  const double curv = +2.0 * nn * h * w * w * w / (x * x);
#else
  const double curv = -2.0 * nn * h * w * w * w / (x * x);
#endif
  return (2.0 * nn - 1.0) * c * c * c / (x * x * x) + 2.0 * (nn - 1.0) * s * s * c / x + curv;
}

inline double sigma_prime(int n, double h, double x, double sigma) {
  return sigma_prime_sc(n, h, x, std::sin(sigma), std::cos(sigma));
}

inline double energy_sc(int n, double h, double x, double s, double c) {
  return ipow(x, 2 * n - 1) * c / std::sqrt(x * x * s * s + c * c) - h * ipow(x, 2 * n);
}

inline double energy_unchecked(int n, double h, double x, double sigma) {
  return energy_sc(n, h, x, std::sin(sigma), std::cos(sigma));
}

// sigma = k pi/2 + tau with |tau| <= pi/4 (up to renormalization lag), so that
// sin and cos keep full relative precision next to their zeros.
inline constexpr double kHalfPiHi = 1.5707963267948966;
inline constexpr double kHalfPiLo = 6.123233995736766e-17;

struct Angle {
  long k = 0;
  double tau = 0.0;
};

inline Angle split_angle(double sigma) {
  const double k = std::nearbyint(sigma / kHalfPiHi);
  return {static_cast<long>(k), (sigma - k * kHalfPiHi) - k * kHalfPiLo};
}

inline double join_angle(long k, double tau) {
  const double kd = static_cast<double>(k);
  return kd * kHalfPiHi + (tau + kd * kHalfPiLo);
}

// (sin sigma, cos sigma)
inline std::pair<double, double> sincos_q(long k, double tau) {
  const double st = std::sin(tau), ct = std::cos(tau);
  switch (((k % 4) + 4) % 4) {
    case 0: return {st, ct};
    case 1: return {ct, -st};
    case 2: return {-st, -ct};
    default: return {-ct, st};
  }
}

}  // namespace detail

inline ProfileDerivative rhs(const ProfileState& st, int n, double h, double axis_epsilon = 0.0) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "n must be >= 1");
  if (!(st.x > axis_epsilon) || !(st.x > 0.0)) {
    fail(ErrorKind::AxisSingularity, "profile system evaluated at x = " + std::to_string(st.x));
  }
  return {std::sin(st.sigma), std::cos(st.sigma), detail::sigma_prime(n, h, st.x, st.sigma)};
}

inline double energy(const ProfileState& st, int n, double h) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "n must be >= 1");
  if (!(st.x > 0.0)) fail(ErrorKind::AxisSingularity, "energy evaluated at x = " + std::to_string(st.x));
  return detail::energy_unchecked(n, h, st.x, st.sigma);
}

namespace detail {

using Vec3 = std::array<double, 3>;  // x, t, tau

// Dormand-Prince 5(4) tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                        e7 = -1.0 / 40;

struct Field {
  int n;
  double h;
  long k = 0;  // quadrant of sigma
  // false when the stage left the half-plane x > 0
  bool operator()(const Vec3& y, Vec3& dy) const {
    if (!(y[0] > 0.0) || !std::isfinite(y[2])) return false;
    const auto [sn, cs] = sincos_q(k, y[2]);
    dy = {sn, cs, sigma_prime_sc(n, h, y[0], sn, cs)};
    return std::isfinite(dy[2]);
  }
};

struct StepResult {
  bool ok = false;
  Vec3 y{};
  Vec3 f{};    // derivative at y (FSAL)
  Vec3 err{};
};

inline Vec3 axpy(const Vec3& y, double h, std::initializer_list<std::pair<double, const Vec3*>> terms) {
  Vec3 r = y;
  for (const auto& [c, k] : terms)
    for (int i = 0; i < 3; ++i) r[i] += h * c * (*k)[i];
  return r;
}

inline StepResult dp_step(const Field& f, const Vec3& y, const Vec3& k1, double h) {
  StepResult out;
  Vec3 k2, k3, k4, k5, k6, k7;
  if (!f(axpy(y, h, {{a21, &k1}}), k2)) return out;
  if (!f(axpy(y, h, {{a31, &k1}, {a32, &k2}}), k3)) return out;
  if (!f(axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}), k4)) return out;
  if (!f(axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}), k5)) return out;
  if (!f(axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}), k6)) return out;
  const Vec3 yn = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
  if (!f(yn, k7)) return out;
  for (int i = 0; i < 3; ++i) {
    out.err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
  }
  out.ok = true;
  out.y = yn;
  out.f = k7;
  return out;
}

inline Vec3 hermite(const Vec3& y0, const Vec3& f0, const Vec3& y1, const Vec3& f1, double h, double theta) {
  const double t2 = theta * theta, t3 = t2 * theta;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + theta, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  Vec3 r;
  for (int i = 0; i < 3; ++i) r[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
  return r;
}

inline double event_value(EventKind k, long q, const Vec3& y, double eps) {
  switch (k) {
    case EventKind::CriticalRadius: return sincos_q(q, y[2]).first;
    case EventKind::VerticalTangent: return sincos_q(q, y[2]).second;
    case EventKind::AxisContact: return y[0] - eps;
    default: return 0.0;
  }
}

inline double event_rate(EventKind k, long q, const Vec3& y, const Vec3& f) {
  switch (k) {
    case EventKind::CriticalRadius: return sincos_q(q, y[2]).second * f[2];
    case EventKind::VerticalTangent: return -sincos_q(q, y[2]).first * f[2];
    case EventKind::AxisContact: return f[0];
    default: return 0.0;
  }
}

// Below this magnitude on both sides of a step the event function is treated
// as identically zero (no crossing), so that fixed points produce no events.
inline constexpr double kEventFloor = 1e-13;

}  // namespace detail

/// Adaptive integration of the profile system from `initial`.
inline Trajectory integrate(const ProfileState& initial, int n, double h, const SolveConfig& cfg = {}) {
  using namespace detail;
  if (n < 1) fail(ErrorKind::InvalidArgument, "n must be >= 1");
  if (!std::isfinite(h)) fail(ErrorKind::InvalidArgument, "H must be finite");
  if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0)) fail(ErrorKind::InvalidArgument, "tolerances must be > 0");
  if (!(cfg.max_step > 0.0) || !(cfg.max_arclength >= 0.0) || !(cfg.axis_epsilon >= 0.0) || cfg.output_step < 0.0) {
    fail(ErrorKind::InvalidArgument, "invalid solver configuration");
  }
  if (!(initial.x > cfg.axis_epsilon)) {
    fail(ErrorKind::AxisSingularity, "initial radius " + std::to_string(initial.x) + " is not beyond axis_epsilon");
  }
  for (const auto& r : cfg.stop_at)
    if (r.occurrence < 1) fail(ErrorKind::InvalidArgument, "stop occurrence must be >= 1");

  const Angle a0 = split_angle(initial.sigma);
  Field field{n, h, a0.k};
  const auto [sn0, cs0] = sincos_q(a0.k, a0.tau);
  const double e0 = energy_sc(n, h, initial.x, sn0, cs0);
  const double drift_limit = cfg.energy_drift_tol * (1.0 + std::abs(e0));

  Trajectory tr;
  tr.n = n;
  tr.h = h;
  tr.e = e0;
  tr.samples.push_back(initial);

  double s = initial.s;
  const double s_end = initial.s + cfg.max_arclength;
  Vec3 y{initial.x, initial.t, a0.tau};
  Vec3 fy;
  field(y, fy);

  const std::array<EventKind, 3> kinds{EventKind::CriticalRadius, EventKind::VerticalTangent, EventKind::AxisContact};
  std::array<int, 3> counts{0, 0, 0};

  auto scale = [&](int i, const Vec3& a, const Vec3& b) {
    if (i == 1) return cfg.abs_tol + cfg.rel_tol;  // independent of the height offset
    if (i == 0) return cfg.abs_tol + cfg.rel_tol * std::max(std::abs(a[0]), std::abs(b[0]));
    const double kq = std::abs(static_cast<double>(field.k)) * kHalfPiHi;
    return cfg.abs_tol + cfg.rel_tol * std::max({1.0, kq + std::abs(a[2]), kq + std::abs(b[2])});
  };

  auto make_state = [&](double ss, const Vec3& v) { return ProfileState{ss, v[0], v[1], join_angle(field.k, v[2])}; };

  auto check_energy = [&](double ss, const Vec3& v) {
    const auto [sn, cs] = sincos_q(field.k, v[2]);
    const double drift = std::abs(energy_sc(n, h, v[0], sn, cs) - e0);
    tr.max_energy_drift = std::max(tr.max_energy_drift, drift);
    if (!(drift <= drift_limit)) {
      tr.events.push_back({EventKind::EnergyDrift, make_state(ss, v)});
      tr.diagnostics.push_back("energy drift " + std::to_string(drift) + " exceeds " + std::to_string(drift_limit) +
                               " at s = " + std::to_string(ss));
      throw EnergyDriftError("energy drift " + std::to_string(drift) + " exceeds tolerance at s = " + std::to_string(ss),
                             tr);
    }
  };

  double step = std::min({cfg.initial_step, cfg.max_step, std::max(cfg.max_arclength, 1e-300)});
  double err_prev = 1.0;
  double next_out = cfg.output_step > 0.0 ? initial.s + cfg.output_step : 0.0;
  long out_index = 1;
  bool done = cfg.max_arclength == 0.0;
  if (done) tr.termination = Termination::MaxArclength;

  while (!done) {
    if (tr.accepted_steps + tr.rejected_steps > cfg.max_steps) {
      fail(ErrorKind::NonConvergence, "step budget exhausted at s = " + std::to_string(s));
    }
    double hstep = std::min(step, cfg.max_step);
    bool hits_end = false, hits_out = false;
    if (s + hstep >= s_end) {
      hstep = s_end - s;
      hits_end = true;
    }
    if (cfg.output_step > 0.0 && s + hstep >= next_out) {
      hstep = next_out - s;
      hits_out = true;
      hits_end = hits_end && next_out >= s_end;
    }
    if (!(hstep > 1e-15 * std::max(1.0, std::abs(s)))) {
      if (y[0] < 1e-3) {
        fail(ErrorKind::AxisSingularity, "step size underflow next to the axis at s = " + std::to_string(s) +
                                             ", x = " + std::to_string(y[0]));
      }
      fail(ErrorKind::NonConvergence, "step size underflow at s = " + std::to_string(s) + ", x = " + std::to_string(y[0]));
    }

    const StepResult res = dp_step(field, y, fy, hstep);
    double errn = 0.0;
    if (res.ok) {
      for (int i = 0; i < 3; ++i) {
        const double q = res.err[i] / scale(i, y, res.y);
        errn += q * q;
      }
      errn = std::sqrt(errn / 3.0);
    }
    if (!res.ok || !(errn <= 1.0)) {
      ++tr.rejected_steps;
      step = res.ok && std::isfinite(errn) ? hstep * std::max(0.2, 0.9 * std::pow(errn, -0.2)) : hstep * 0.25;
      continue;
    }
    ++tr.accepted_steps;

    // events inside (s, s + hstep]
    const double s_new = hits_out ? next_out : (hits_end ? s_end : s + hstep);
    std::optional<ProfileEvent> terminal;
    Vec3 terminal_y{};
    struct Crossing {
      double s;
      Vec3 y;
      Vec3 f;
      int kind_index;
    };
    std::vector<Crossing> crossings;
    for (int ki = 0; ki < 3; ++ki) {
      const EventKind k = kinds[static_cast<std::size_t>(ki)];
      const double g0 = event_value(k, field.k, y, cfg.axis_epsilon);
      const double g1 = event_value(k, field.k, res.y, cfg.axis_epsilon);
      if (g0 == 0.0) continue;
      if (std::max(std::abs(g0), std::abs(g1)) < kEventFloor) continue;
      if ((g0 > 0.0) == (g1 > 0.0) && g1 != 0.0) continue;
      // bracket on the Hermite interpolant
      double lo = 0.0, hi = 1.0;
      const bool pos0 = g0 > 0.0;
      while ((hi - lo) * hstep > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double gm = event_value(k, field.k, hermite(y, fy, res.y, res.f, hstep, mid), cfg.axis_epsilon);
        if ((gm > 0.0) == pos0 && gm != 0.0)
          lo = mid;
        else
          hi = mid;
      }
      double ds = 0.5 * (lo + hi) * hstep;
      // polish with true integrator steps from the accepted left state
      StepResult at;
      for (int it = 0; it < 4; ++it) {
        at = dp_step(field, y, fy, ds);
        if (!at.ok) break;
        const double g = event_value(k, field.k, at.y, cfg.axis_epsilon);
        const double r = event_rate(k, field.k, at.y, at.f);
        if (r == 0.0 || !std::isfinite(r)) break;
        const double nds = std::clamp(ds - g / r, 0.0, hstep);
        const bool small = std::abs(nds - ds) <= 1e-14 * std::max(1.0, std::abs(s));
        ds = nds;
        if (small) break;
      }
      at = dp_step(field, y, fy, ds);
      if (!at.ok) at = {true, hermite(y, fy, res.y, res.f, hstep, ds / hstep), res.f, {}};
      crossings.push_back({s + ds, at.y, at.f, ki});
    }
    std::sort(crossings.begin(), crossings.end(), [](const Crossing& a, const Crossing& b) { return a.s < b.s; });
    for (const auto& c : crossings) {
      const EventKind k = kinds[static_cast<std::size_t>(c.kind_index)];
      ++counts[static_cast<std::size_t>(c.kind_index)];
      ProfileEvent ev{k, make_state(c.s, c.y)};
      tr.events.push_back(ev);
      bool stop = k == EventKind::AxisContact;
      for (const auto& r : cfg.stop_at)
        if (r.kind == k && r.occurrence == counts[static_cast<std::size_t>(c.kind_index)]) stop = true;
      if (stop) {
        terminal = ev;
        terminal_y = c.y;
        break;
      }
    }

    if (terminal) {
      const auto& st = terminal->state;
      if (st.s > tr.samples.back().s) {
        if (st.x > 0.0) check_energy(st.s, terminal_y);
        tr.samples.push_back(st);
      } else {
        tr.samples.back() = st;
      }
      tr.termination = terminal->kind == EventKind::AxisContact ? Termination::AxisContact : Termination::StopEvent;
      done = true;
      break;
    }

    check_energy(s_new, res.y);
    s = s_new;
    y = res.y;
    fy = res.f;
    if (std::abs(y[2]) > 0.5 * kHalfPiHi) {
      const long dk = y[2] > 0.0 ? 1 : -1;
      y[2] = (y[2] - static_cast<double>(dk) * kHalfPiHi) - static_cast<double>(dk) * kHalfPiLo;
      field.k += dk;
    }
    if (cfg.output_step <= 0.0 || hits_out || hits_end) tr.samples.push_back(make_state(s, y));
    if (hits_out) {
      ++out_index;
      next_out = initial.s + static_cast<double>(out_index) * cfg.output_step;
    }
    if (hits_end || s >= s_end) {
      tr.termination = Termination::MaxArclength;
      done = true;
      break;
    }

    // PI control
    const double e = std::max(errn, 1e-10);
    double fac = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
    fac = std::clamp(fac, 0.2, 5.0);
    err_prev = e;
    if (!(hits_out || hits_end)) step = hstep * fac;
    else step = std::max(step, hstep * fac);
  }
  return tr;
}

namespace detail {

inline constexpr double kCriticalTolerance = 1e-9;

inline bool is_critical(const ProfileState& s) { return std::abs(std::sin(s.sigma)) <= kCriticalTolerance; }

inline ProfileState mirror(const ProfileState& p, const ProfileState& pivot) {
  return {2.0 * pivot.s - p.s, p.x, 2.0 * pivot.t - p.t, 2.0 * pivot.sigma - p.sigma};
}

}  // namespace detail

/// Extends a trajectory by reflection across horizontal lines {t = const}
/// through critical radii (x' = 0). A trajectory ending at a critical radius
/// is reflected across its end `copies` times (copies > 1 needs a critical
/// start as well, making the curve periodic); one that only starts at a
/// critical radius (sphere, catenoid) is reflected across its start.
inline Trajectory reflect_continue(const Trajectory& traj, int copies = 1) {
  using detail::is_critical;
  using detail::mirror;
  if (copies < 0) fail(ErrorKind::InvalidArgument, "copies must be >= 0");
  if (traj.samples.size() < 2) fail(ErrorKind::NoCriticalPoint, "trajectory has fewer than two samples");
  Trajectory out = traj;
  if (copies == 0) return out;

  bool degenerate = true;
  for (const auto& p : traj.samples)
    if (!is_critical(p)) degenerate = false;
  if (degenerate) {
    out.diagnostics.push_back("degenerate profile: x' = 0 everywhere, returned unchanged");
    return out;
  }

  const bool end_critical = traj.termination == Termination::StopEvent && !traj.events.empty() &&
                            traj.events.back().kind == EventKind::CriticalRadius && is_critical(traj.back());
  const bool start_critical = is_critical(traj.front());

  if (end_critical) {
    if (copies > 1 && !start_critical) {
      fail(ErrorKind::NoCriticalPoint, "repeated reflection needs critical radii at both ends");
    }
    std::vector<ProfileState> segment = traj.samples;
    std::vector<ProfileEvent> seg_events;
    for (const auto& ev : traj.events)
      if (ev.state.s < traj.back().s) seg_events.push_back(ev);
    for (int c = 0; c < copies; ++c) {
      const ProfileState pivot = segment.back();
      std::vector<ProfileState> next{pivot};
      for (auto it = segment.rbegin() + 1; it != segment.rend(); ++it) next.push_back(mirror(*it, pivot));
      std::vector<ProfileEvent> next_events;
      for (auto it = seg_events.rbegin(); it != seg_events.rend(); ++it) {
        next_events.push_back({it->kind, mirror(it->state, pivot)});
      }
      out.samples.insert(out.samples.end(), next.begin() + 1, next.end());
      out.events.insert(out.events.end(), next_events.begin(), next_events.end());
      if (is_critical(next.back())) out.events.push_back({EventKind::CriticalRadius, next.back()});
      segment = std::move(next);
      seg_events.clear();
      for (const auto& ev : next_events) seg_events.push_back(ev);
    }
    return out;
  }

  if (start_critical) {
    if (copies > 1) fail(ErrorKind::NoCriticalPoint, "trajectory does not end at a critical radius");
    const ProfileState pivot = traj.front();
    std::vector<ProfileState> samples;
    for (auto it = traj.samples.rbegin(); it + 1 != traj.samples.rend(); ++it) samples.push_back(mirror(*it, pivot));
    samples.insert(samples.end(), traj.samples.begin(), traj.samples.end());
    std::vector<ProfileEvent> events;
    for (auto it = traj.events.rbegin(); it != traj.events.rend(); ++it) {
      events.push_back({it->kind, mirror(it->state, pivot)});
    }
    events.insert(events.end(), traj.events.begin(), traj.events.end());
    const double shift = pivot.s - samples.front().s;
    for (auto& p : samples) p.s += shift;
    for (auto& ev : events) ev.state.s += shift;
    out.samples = std::move(samples);
    out.events = std::move(events);
    return out;
  }

  fail(ErrorKind::NoCriticalPoint, "trajectory has no terminal critical radius (x' = 0)");
}

/// Starting state and normalized parameters for tracing the family of (n, H, E).
struct CanonicalStart {
  NormalizedParams params;
  FamilyLabel family;
  ProfileState state;
};

inline CanonicalStart canonical_start(int n, double h, double e) {
  const auto p = normalize_params(n, h, e);
  const FamilyLabel fam = classify(n, p.h, p.e);
  ProfileState st;
  switch (fam) {
    case FamilyLabel::Hyperplane: st = {0.0, 1.0, 0.0, std::numbers::pi / 2}; break;
    case FamilyLabel::Catenoid: st = {0.0, std::pow(p.e, 1.0 / (2.0 * n - 1.0)), 0.0, 0.0}; break;
    case FamilyLabel::Sphere: st = {0.0, 1.0 / p.h, 0.0, 0.0}; break;
    case FamilyLabel::Cylinder: st = {0.0, cylinder_radius(n, p.h), 0.0, 0.0}; break;
    case FamilyLabel::Unduloid: st = {0.0, radius_bounds(n, p.h, p.e).x1, 0.0, 0.0}; break;
    case FamilyLabel::Nodoid: st = {0.0, radius_bounds(n, p.h, p.e).x2, 0.0, 0.0}; break;
  }
  return {p, fam, st};
}

/// For n >= 2 an energy error dE turns the sphere profile away from the axis
/// near x ~ dE^{1/(2n-1)}; sphere traces then stop at a radius scaled from
/// the tolerance, 3 rel_tol^{1/(2n-1)} / H, and never below `requested`.
inline double trace_axis_epsilon(FamilyLabel f, int n, double h, double requested, double rel_tol) {
  if (f != FamilyLabel::Sphere || n < 2 || !(h > 0.0)) return requested;
  return std::max(requested, 3.0 * std::pow(rel_tol, 1.0 / (2.0 * n - 1.0)) / h);
}

/// Stop rule that ends a trace after half a period (unduloid, nodoid).
inline std::vector<StopRule> half_period_stop(FamilyLabel f) {
  if (f == FamilyLabel::Unduloid || f == FamilyLabel::Nodoid) return {{EventKind::CriticalRadius, 1}};
  return {};
}

}  // namespace ccd
