#pragma once

// Parameter sweeps over (n, H, E) grids. Rows come out in grid order no
// matter how many threads evaluate them.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ccd/app/report.hpp"

namespace ccd::app {

/// "a:b:count" (count evenly spaced values, endpoints included) or a comma
/// separated list. "" and "a:b:0" are empty axes.
inline std::vector<double> parse_axis(const std::string& spec) {
  std::vector<double> out;
  if (spec.empty()) return out;
  auto num = [&](const std::string& tok) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != tok.size() || !std::isfinite(v)) fail(ErrorKind::InvalidArgument, "bad grid value '" + tok + "' in '" + spec + "'");
    return v;
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) fail(ErrorKind::InvalidArgument, "range must be a:b:count, got '" + spec + "'");
    const double a = num(parts[0]), b = num(parts[1]), c = num(parts[2]);
    if (c < 0 || c != std::floor(c)) fail(ErrorKind::InvalidArgument, "range count must be a non-negative integer");
    const auto count = static_cast<std::size_t>(c);
    for (std::size_t i = 0; i < count; ++i)
      out.push_back(count == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    return out;
  }
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ',');) out.push_back(num(p));
  return out;
}

struct SweepGrid {
  std::vector<int> n;
  std::vector<double> h;
  std::vector<double> e;

  std::size_t size() const { return n.size() * h.size() * e.size(); }
};

inline SweepGrid parse_grid(const std::string& n_spec, const std::string& h_spec, const std::string& e_spec) {
  SweepGrid g;
  for (double v : parse_axis(n_spec)) {
    if (v < 1 || v != std::floor(v)) fail(ErrorKind::InvalidArgument, "n values must be integers >= 1");
    g.n.push_back(static_cast<int>(v));
  }
  g.h = parse_axis(h_spec);
  g.e = parse_axis(e_spec);
  return g;
}

struct SweepRow {
  std::size_t index = 0;
  int n = 1;
  double h = 0.0, e = 0.0;
  std::optional<FamilyLabel> family;
  std::optional<double> x1, x2, x0, t2, perimeter, volume;
  std::string status = "ok";
};

inline SweepRow sweep_point(std::size_t index, int n, double h, double e, const SolveConfig& cfg) {
  SweepRow row;
  row.index = index;
  row.n = n;
  row.h = h;
  row.e = e;
  try {
    const RunReport r = full_report(n, h, e, cfg);
    row.family = r.family;
    if (r.radii) {
      row.x1 = r.radii->x1;
      row.x2 = r.radii->x2;
      row.x0 = r.radii->x0;
    }
    if (r.summary.t2) row.t2 = r.summary.t2->value;
    if (r.summary.perimeter) row.perimeter = r.summary.perimeter->value;
    if (r.summary.volume) row.volume = r.summary.volume->value;
  } catch (const Error& err) {
    row.status = std::string(to_string(err.kind()));
  }
  return row;
}

/// Worker count: hardware concurrency, capped by CC_DELAUNAY_THREADS when set.
inline unsigned sweep_threads() {
  unsigned t = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CC_DELAUNAY_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) t = std::min(t, static_cast<unsigned>(cap));
  }
  return t;
}

inline std::vector<SweepRow> run_sweep(const SweepGrid& g, const SolveConfig& cfg = {}, unsigned threads = 0) {
  const std::size_t total = g.size();
  std::vector<SweepRow> rows(total);
  if (total == 0) return rows;
  if (threads == 0) threads = sweep_threads();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const std::size_t ie = i % g.e.size();
      const std::size_t ih = (i / g.e.size()) % g.h.size();
      const std::size_t in = i / (g.e.size() * g.h.size());
      rows[i] = sweep_point(i, g.n[in], g.h[ih], g.e[ie], cfg);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return rows;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "index,n,h,e,family,x1,x2,x0,t2,perimeter,volume,status\n";
  auto opt = [](const std::optional<double>& v) { return v ? fmt17(*v) : std::string(); };
  for (const auto& r : rows) {
    os << r.index << ',' << r.n << ',' << fmt17(r.h) << ',' << fmt17(r.e) << ','
       << (r.family ? std::string(to_string(*r.family)) : std::string()) << ',' << opt(r.x1) << ',' << opt(r.x2) << ','
       << opt(r.x0) << ',' << opt(r.t2) << ',' << opt(r.perimeter) << ',' << opt(r.volume) << ',' << r.status << '\n';
  }
}

inline json sweep_json(const std::vector<SweepRow>& rows) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"index", r.index},
                   {"params", {{"n", r.n}, {"h", r.h}, {"e", r.e}}},
                   {"family", r.family ? json(std::string(to_string(*r.family))) : json(nullptr)},
                   {"radii", {{"x1", opt(r.x1)}, {"x2", opt(r.x2)}, {"x0", opt(r.x0)}}},
                   {"t2", opt(r.t2)},
                   {"perimeter", opt(r.perimeter)},
                   {"volume", opt(r.volume)},
                   {"status", r.status}});
  }
  return json{{"command", "sweep"}, {"rows", arr}};
}

}  // namespace ccd::app
