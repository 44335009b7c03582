// ccd: classify, trace, render, verify and sweep rotationally invariant CMC
// hypersurfaces of the Heisenberg group.
//
// exit codes: 0 ok, 1 usage, 2 invalid parameters, 3 numerical failure

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ccd/app/report.hpp"
#include "ccd/app/svg.hpp"
#include "ccd/app/sweep.hpp"
#include "ccd/app/verify.hpp"
#include "ccd/ccd.hpp"

namespace {

using namespace ccd;
using namespace ccd::app;

constexpr int kExitOk = 0, kExitUsage = 1, kExitParams = 2, kExitNumeric = 3;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NoAdmissibleRadius:
    case ErrorKind::Io: return kExitParams;
    default: return kExitNumeric;
  }
}

struct Params {
  int n = 1;
  double h = 0.0;
  double e = 0.0;
};

struct Tolerances {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double axis_epsilon = SolveConfig{}.axis_epsilon;
  double max_arclength = 50.0;

  SolveConfig config() const {
    SolveConfig c;
    c.rel_tol = rel_tol;
    c.abs_tol = abs_tol;
    c.axis_epsilon = axis_epsilon;
    c.max_arclength = max_arclength;
    return c;
  }
};

void add_params(CLI::App* cmd, Params& p) {
  cmd->add_option("--n", p.n, "half-dimension n >= 1")->check(CLI::Range(1, 64));
  cmd->add_option("--h", p.h, "mean curvature H");
  cmd->add_option("--e", p.e, "energy E");
}

void add_tolerances(CLI::App* cmd, Tolerances& t) {
  cmd->add_option("--rel-tol", t.rel_tol, "relative tolerance")->capture_default_str();
  cmd->add_option("--abs-tol", t.abs_tol, "absolute tolerance")->capture_default_str();
  cmd->add_option("--axis-epsilon", t.axis_epsilon, "stop when x reaches this radius")->capture_default_str();
  cmd->add_option("--max-arclength", t.max_arclength, "arclength cap")->capture_default_str();
}

// writes to `path`, or stdout for "" / "-"
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot open '" + path + "' for writing");
  f << text;
  if (!f) fail(ErrorKind::Io, "write to '" + path + "' failed");
}

std::string opt_num(const std::optional<double>& v) { return v ? fmt17(*v) : "-"; }

std::string classify_text(const RunReport& r) {
  std::ostringstream os;
  os << "family: " << to_string(r.family) << '\n';
  os << "normalized: H = " << fmt17(r.normalized.h) << ", E = " << fmt17(r.normalized.e)
     << (r.normalized.flipped ? " (flipped)" : "") << '\n';
  if (r.radii) {
    os << "x1: " << fmt17(r.radii->x1) << '\n';
    os << "x2: " << fmt17(r.radii->x2) << '\n';
    os << "x0: " << opt_num(r.radii->x0) << '\n';
  }
  os << "cylinder energy: " << opt_num(r.cylinder_energy) << '\n';
  if (r.closed_form) os << "closed form: " << *r.closed_form << '\n';
  return os.str();
}

Polyline read_trajectory_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::Io, "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(f, line)) fail(ErrorKind::Io, "'" + path + "' is empty");
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
  }
  const auto xi = std::find(cols.begin(), cols.end(), "x"), ti = std::find(cols.begin(), cols.end(), "t");
  if (xi == cols.end() || ti == cols.end()) fail(ErrorKind::Io, "'" + path + "' has no x and t columns");
  const auto ix = static_cast<std::size_t>(xi - cols.begin()), it = static_cast<std::size_t>(ti - cols.begin());
  Polyline p;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> v;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) v.push_back(c);
    if (v.size() <= std::max(ix, it)) fail(ErrorKind::Io, path + ":" + std::to_string(lineno) + ": short row");
    try {
      p.pts.push_back({std::stod(v[ix]), std::stod(v[it])});
    } catch (const std::exception&) {
      fail(ErrorKind::Io, path + ":" + std::to_string(lineno) + ": bad number");
    }
  }
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotationally invariant constant mean curvature hypersurfaces in the Heisenberg group"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");

  Params p;
  Tolerances tol;

  auto* classify_cmd = app.add_subcommand("classify", "family, structural radii and cylinder energy");
  add_params(classify_cmd, p);
  bool classify_json = false;
  classify_cmd->add_flag("--json", classify_json, "JSON output");

  auto* trace_cmd = app.add_subcommand("trace", "integrate the canonical profile");
  add_params(trace_cmd, p);
  add_tolerances(trace_cmd, tol);
  int reflect = 0;
  std::string trace_format = "csv", trace_out;
  std::optional<double> x0, t0, sigma0;
  trace_cmd->add_option("--reflect", reflect, "reflect across critical radii k times")->check(CLI::NonNegativeNumber);
  trace_cmd->add_option("--format", trace_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  trace_cmd->add_option("-o,--output", trace_out, "output file (default stdout)");
  trace_cmd->add_option("--x0", x0, "start radius (instead of the canonical start)");
  trace_cmd->add_option("--t0", t0, "start height");
  trace_cmd->add_option("--sigma0", sigma0, "start angle");

  auto* render_cmd = app.add_subcommand("render", "SVG of generating curves");
  std::string panel = "all", render_input, render_out;
  int render_n = 1;
  render_cmd->add_option("--panel", panel, "all or a family name")->capture_default_str();
  render_cmd->add_option("--n", render_n, "half-dimension n")->check(CLI::Range(1, 64));
  render_cmd->add_option("--input", render_input, "trajectory CSV (columns x, t) to render instead");
  render_cmd->add_option("-o,--output", render_out, "output file (default stdout)");

  auto* verify_cmd = app.add_subcommand("verify", "run self-check suites");
  std::string suite = "all", verify_out;
  verify_cmd->add_option("suite", suite, "energy, closed-forms, curvature, classification, measures or all")
      ->capture_default_str();
  verify_cmd->add_option("-o,--output", verify_out, "JSON report file (default stdout)");

  auto* sweep_cmd = app.add_subcommand("sweep", "tabulate a grid of parameters");
  std::string sn = "1", sh = "1", se;
  std::string sweep_format = "csv", sweep_out;
  unsigned threads = 0;
  sweep_cmd->add_option("--n", sn, "n values: list or a:b:count")->capture_default_str();
  sweep_cmd->add_option("--h", sh, "H values: list or a:b:count")->capture_default_str();
  sweep_cmd->add_option("--e", se, "E values: list or a:b:count");
  sweep_cmd->add_option("--format", sweep_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sweep_cmd->add_option("--threads", threads, "worker threads (0: automatic)");
  sweep_cmd->add_option("-o,--output", sweep_out, "output file (default stdout)");
  add_tolerances(sweep_cmd, tol);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*classify_cmd) {
      const RunReport r = classify_report(p.n, p.h, p.e);
      emit("", classify_json ? report_json(r).dump(2) + "\n" : classify_text(r));
      return kExitOk;
    }

    if (*trace_cmd) {
      Trajectory tr;
      std::optional<RunReport> report;
      const SolveConfig cfg = tol.config();
      if (x0) {
        tr = integrate({0.0, *x0, t0.value_or(0.0), sigma0.value_or(0.0)}, p.n, p.h, cfg);
      } else {
        report = full_report(p.n, p.h, p.e, cfg, true);
        tr = std::move(*report->trajectory);
      }
      if (reflect > 0) tr = reflect_continue(tr, reflect);
      for (const auto& d : tr.diagnostics) std::cerr << "note: " << d << '\n';
      if (trace_format == "csv") {
        std::ostringstream os;
        write_trajectory_csv(os, tr);
        emit(trace_out, os.str());
      } else {
        RunReport r;
        if (report) {
          r = std::move(*report);
        } else {
          r.command = "trace";
          r.n = p.n;
          r.h = p.h;
          r.e = tr.e;
          r.normalized = normalize_params(p.n, p.h, tr.e);
          r.family = classify(p.n, p.h, tr.e);
          r.energy_drift = tr.max_energy_drift;
          r.events = tr.events;
        }
        r.events = tr.events;
        r.trajectory = std::move(tr);
        emit(trace_out, report_json(r).dump(2) + "\n");
      }
      return kExitOk;
    }

    if (*render_cmd) {
      std::vector<Panel> panels;
      if (!render_input.empty()) {
        panels.push_back({std::filesystem::path(render_input).stem().string(), {read_trajectory_csv(render_input)}});
      } else if (panel == "all") {
        panels = all_panels(render_n);
      } else {
        const auto f = family_from_string(panel);
        if (!f) fail(ErrorKind::InvalidArgument, "unknown panel '" + panel + "'");
        panels.push_back(family_panel(*f, render_n));
      }
      emit(render_out, svg_document(panels, panels.size() >= 3 ? 3 : static_cast<int>(panels.size())));
      return kExitOk;
    }

    if (*verify_cmd) {
      const auto checks = run_verify(suite);
      const json j = verify_json(suite, checks);
      emit(verify_out, j.dump(2) + "\n");
      std::size_t failed = 0;
      for (const auto& c : checks) {
        if (c.passed) continue;
        ++failed;
        std::cerr << "FAIL " << c.suite << ": " << c.name << " (measured " << fmt17(c.measured) << ", tolerance "
                  << fmt17(c.tolerance) << ")" << (c.detail.empty() ? "" : " " + c.detail) << '\n';
      }
      std::cerr << checks.size() - failed << "/" << checks.size() << " checks passed\n";
      return failed ? kExitNumeric : kExitOk;
    }

    if (*sweep_cmd) {
      const SweepGrid g = parse_grid(sn, sh, se);
      const auto rows = run_sweep(g, tol.config(), threads);
      std::ostringstream os;
      if (sweep_format == "csv")
        write_sweep_csv(os, rows);
      else
        os << sweep_json(rows).dump(2) << '\n';
      emit(sweep_out, os.str());
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}
