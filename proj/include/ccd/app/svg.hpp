#pragma once

// SVG rendering of generating curves in the half-plane {x >= 0}: x to the
// right, t upwards, the t-axis drawn at x = 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "ccd/app/report.hpp"
#include "ccd/classify.hpp"
#include "ccd/closed_forms.hpp"
#include "ccd/profile_ode.hpp"

namespace ccd::app {

struct Polyline {
  std::vector<std::array<double, 2>> pts;  // (x, t)
};

struct Panel {
  std::string title;
  std::vector<Polyline> curves;
};

inline constexpr int kPanelWidth = 800;
inline constexpr int kPanelHeight = 600;

inline Polyline polyline_from(const Trajectory& tr) {
  Polyline p;
  p.pts.reserve(tr.samples.size());
  for (const auto& s : tr.samples) p.pts.push_back({s.x, s.t});
  return p;
}

/// Resample to points at most `ds` apart in arclength (linear between samples).
inline Polyline thin(const Polyline& in, double ds) {
  if (in.pts.size() < 3) return in;
  Polyline out;
  out.pts.push_back(in.pts.front());
  double acc = 0.0;
  for (std::size_t i = 1; i + 1 < in.pts.size(); ++i) {
    acc += std::hypot(in.pts[i][0] - in.pts[i - 1][0], in.pts[i][1] - in.pts[i - 1][1]);
    if (acc >= ds) {
      out.pts.push_back(in.pts[i]);
      acc = 0.0;
    }
  }
  out.pts.push_back(in.pts.back());
  return out;
}

namespace detail {

inline bool segments_cross(const std::array<double, 2>& a, const std::array<double, 2>& b, const std::array<double, 2>& c,
                           const std::array<double, 2>& d) {
  auto orient = [](const std::array<double, 2>& p, const std::array<double, 2>& q, const std::array<double, 2>& r) {
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
  };
  const double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

}  // namespace detail

/// Number of proper crossings between non-adjacent segments of the polyline.
inline int self_intersections(const Polyline& p) {
  int count = 0;
  const std::size_t m = p.pts.size();
  for (std::size_t i = 0; i + 1 < m; ++i)
    for (std::size_t j = i + 2; j + 1 < m; ++j)
      if (detail::segments_cross(p.pts[i], p.pts[i + 1], p.pts[j], p.pts[j + 1])) ++count;
  return count;
}

/// Curves of the six families for dimension n, scaled to comparable size.
inline Panel family_panel(FamilyLabel f, int n) {
  Panel panel;
  panel.title = std::string(to_string(f));
  SolveConfig cfg;
  cfg.max_arclength = 6.0;
  auto add = [&](Trajectory tr) { panel.curves.push_back(thin(polyline_from(tr), 0.01)); };
  switch (f) {
    case FamilyLabel::Hyperplane: {
      cfg.max_arclength = 3.0;
      add(integrate({0.0, 1e-3, 0.0, std::numbers::pi / 2}, n, 0.0, cfg));
      break;
    }
    case FamilyLabel::Catenoid: {
      const auto cs = canonical_start(n, 0.0, 1.0);
      cfg.max_arclength = 3.0;
      add(reflect_continue(integrate(cs.state, n, 0.0, cfg), 1));
      break;
    }
    case FamilyLabel::Sphere: {
      const auto cs = canonical_start(n, 1.0, 0.0);
      add(reflect_continue(trace_family(cs, cfg), 1));
      break;
    }
    case FamilyLabel::Cylinder: {
      const double h = 1.0;
      cfg.max_arclength = 3.0;
      Trajectory tr = integrate({-1.5, cylinder_radius(n, h), -1.5, 0.0}, n, h, cfg);
      add(tr);
      break;
    }
    case FamilyLabel::Unduloid:
    case FamilyLabel::Nodoid: {
      const double h = 1.0;
      const double e = f == FamilyLabel::Unduloid ? 0.4 * ccd::cylinder_energy(n, h) : -0.6 * ccd::cylinder_energy(n, h);
      const auto cs = canonical_start(n, h, e);
      Trajectory half = trace_family(cs, cfg);
      add(reflect_continue(half, 3));
      break;
    }
  }
  return panel;
}

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

}  // namespace detail

/// One panel as an <svg> element with an 800 x 600 viewBox, placed at (ox, oy).
inline std::string panel_svg(const Panel& p, double ox = 0.0, double oy = 0.0) {
  double xmax = 0.0, tmin = 0.0, tmax = 0.0;
  bool first = true;
  for (const auto& c : p.curves)
    for (const auto& q : c.pts) {
      xmax = std::max(xmax, q[0]);
      if (first) {
        tmin = tmax = q[1];
        first = false;
      }
      tmin = std::min(tmin, q[1]);
      tmax = std::max(tmax, q[1]);
    }
  if (xmax <= 0.0) xmax = 1.0;
  if (tmax - tmin <= 0.0) {
    tmin -= 1.0;
    tmax += 1.0;
  }
  const double margin = 50.0, top = 60.0;
  const double w = kPanelWidth - 2 * margin, hgt = kPanelHeight - top - margin;
  const double scale = std::min(w / (1.1 * xmax), hgt / (1.1 * (tmax - tmin)));
  const double tmid = 0.5 * (tmin + tmax);
  auto sx = [&](double x) { return margin + 20.0 + x * scale; };
  auto sy = [&](double t) { return top + 0.5 * hgt - (t - tmid) * scale; };

  std::ostringstream os;
  os << "<svg x=\"" << detail::num(ox) << "\" y=\"" << detail::num(oy) << "\" width=\"" << kPanelWidth << "\" height=\""
     << kPanelHeight << "\" viewBox=\"0 0 " << kPanelWidth << ' ' << kPanelHeight << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << kPanelWidth << "\" height=\"" << kPanelHeight
     << "\" fill=\"white\" stroke=\"#888\"/>\n";
  os << "<text x=\"" << kPanelWidth / 2 << "\" y=\"35\" text-anchor=\"middle\" font-family=\"serif\" font-size=\"26\">"
     << p.title << "</text>\n";
  // t-axis
  os << "<line x1=\"" << detail::num(sx(0)) << "\" y1=\"" << top << "\" x2=\"" << detail::num(sx(0)) << "\" y2=\""
     << kPanelHeight - margin / 2 << "\" stroke=\"#444\" stroke-dasharray=\"6 4\"/>\n";
  for (const auto& c : p.curves) {
    if (c.pts.empty()) continue;
    os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2.5\" points=\"";
    for (std::size_t i = 0; i < c.pts.size(); ++i) {
      if (i) os << ' ';
      os << detail::num(sx(c.pts[i][0])) << ',' << detail::num(sy(c.pts[i][1]));
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

inline std::string svg_document(const std::vector<Panel>& panels, int columns) {
  columns = std::max(1, std::min(columns, static_cast<int>(std::max<std::size_t>(1, panels.size()))));
  const int rows = static_cast<int>((panels.size() + static_cast<std::size_t>(columns) - 1) / static_cast<std::size_t>(columns));
  const int width = columns * kPanelWidth, height = std::max(1, rows) * kPanelHeight;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const int c = static_cast<int>(i) % columns, r = static_cast<int>(i) / columns;
    os << panel_svg(panels[i], c * kPanelWidth, r * kPanelHeight);
  }
  os << "</svg>\n";
  return os.str();
}

inline std::vector<Panel> all_panels(int n) {
  std::vector<Panel> out;
  for (auto f : {FamilyLabel::Hyperplane, FamilyLabel::Catenoid, FamilyLabel::Sphere, FamilyLabel::Cylinder,
                 FamilyLabel::Unduloid, FamilyLabel::Nodoid}) {
    out.push_back(family_panel(f, n));
  }
  return out;
}

}  // namespace ccd::app
