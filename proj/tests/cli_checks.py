#!/usr/bin/env python3
"""CLI checks: python3 cli_checks.py CASE CCD_BINARY [SCHEMA]"""

import csv
import io
import json
import math
import os
import subprocess
import sys
import tempfile

CASE, BIN = sys.argv[1], sys.argv[2]
SCHEMA = sys.argv[3] if len(sys.argv) > 3 else None


def run(*args, env=None):
    e = dict(os.environ)
    if env:
        e.update(env)
    p = subprocess.run([BIN, *map(str, args)], capture_output=True, text=True, env=e, timeout=280)
    return p.returncode, p.stdout, p.stderr


def expect(cond, msg):
    if not cond:
        print("check failed:", msg, file=sys.stderr)
        sys.exit(1)


def ok(*args, **kw):
    code, out, err = run(*args, **kw)
    expect(code == 0, f"{args}: exit {code}, stderr: {err}")
    return out


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def validate(doc):
    import jsonschema

    with open(SCHEMA) as f:
        jsonschema.validate(doc, json.load(f))


def sphere_t(h, x):
    hx = min(h * x, 1.0)
    return (hx * math.sqrt(1 - hx * hx) + math.acos(hx)) / (2 * h * h)


def case_classify_sphere():
    out = ok("classify", "--n", 1, "--h", 1, "--e", 0)
    expect("family: Sphere" in out, out)
    expect("closed form:" in out, out)


def case_classify_hyperplane():
    expect("family: Hyperplane" in ok("classify", "--n", 1, "--h", 0, "--e", 0), "hyperplane")


def case_classify_no_radius():
    code, _, err = run("classify", "--n", 1, "--h", 0.5, "--e", 0.6)
    expect(code == 2, f"exit {code}")
    expect("NoAdmissibleRadius" in err, err)


def case_classify_bad_n():
    code, _, _ = run("classify", "--n", 0, "--h", 1, "--e", 0)
    expect(code == 1, f"exit {code}")


def case_usage_error():
    expect(run()[0] == 1, "no subcommand")
    expect(run("frobnicate")[0] == 1, "unknown subcommand")
    expect(run("classify", "--h", "abc")[0] == 1, "non-numeric flag")


def case_trace_sphere():
    for h in (0.5, 1.0, 2.0):
        data = rows(ok("trace", "--n", 1, "--h", h, "--e", 0))
        expect(list(data[0].keys()) == ["s", "x", "t", "sigma", "energy"], "columns")
        worst = max(abs(float(r["t"]) - sphere_t(h, float(r["x"]))) for r in data)
        expect(worst <= 1e-6, f"H={h}: sup error {worst}")
        expect(abs(math.sin(float(data[-1]["sigma"]))) >= 1 - 1e-3, "orthogonal axis contact")


def case_trace_cylinder():
    data = rows(ok("trace", "--n", 2, "--h", 0.75, "--e", 0.25, "--max-arclength", 5))
    expect(len(data) > 2, "samples")
    expect(max(abs(float(r["x"]) - 1.0) for r in data) <= 1e-9, "constant x")


def case_trace_catenoid():
    data = rows(ok("trace", "--n", 1, "--h", 0, "--e", 1, "--max-arclength", 30, "--reflect", 1))
    pts = [(float(r["x"]), float(r["t"])) for r in data]
    expect(min(t for _, t in pts) < -10 and max(t for _, t in pts) > 10, "covers [-10, 10]")
    worst = max(abs(x - math.sqrt(t * t + 1)) for x, t in pts if abs(t) <= 10)
    expect(worst <= 1e-6, f"sup error {worst}")


def case_trace_reflect():
    half = rows(ok("trace", "--n", 1, "--h", 1, "--e", 0.1))
    full = rows(ok("trace", "--n", 1, "--h", 1, "--e", 0.1, "--reflect", 3))
    t_half = float(half[-1]["t"]) - float(half[0]["t"])
    t_full = float(full[-1]["t"]) - float(full[0]["t"])
    expect(abs(t_full - 4 * t_half) <= 1e-9, f"{t_full} vs 4 x {t_half}")
    s = [float(r["s"]) for r in full]
    expect(all(b > a for a, b in zip(s, s[1:])), "s increasing")


def case_trace_json_schema():
    for args in (("--h", 1, "--e", -0.1), ("--h", 1, "--e", 0.1), ("--h", 0, "--e", 1), ("--h", 1, "--e", 0),
                 ("--h", 0.5, "--e", 0.5), ("--h", 0, "--e", 0)):
        doc = json.loads(ok("trace", "--n", 2, *args, "--format", "json", "--max-arclength", 10))
        validate(doc)
        expect(doc["trajectory"]["samples"], "samples present")
    doc = json.loads(ok("trace", "--n", 1, "--h", 1, "--e", -0.1, "--format", "json"))
    expect(doc["family"] == "Nodoid" and doc["summary"]["t2"]["value"] > 0, "nodoid t2 > 0")
    expect(doc["summary"]["t2"]["error_estimate"] is not None, "error estimate")


def case_classify_json_schema():
    for h, e in ((1, 0), (0, 0), (0, 1), (0.5, 0.5), (0.5, 0.3), (1, -0.1), (-1, 0.1)):
        doc = json.loads(ok("classify", "--n", 1, "--h", h, "--e", e, "--json"))
        validate(doc)
    doc = json.loads(ok("classify", "--n", 1, "--h", 0.5, "--e", 0.3, "--json"))
    x1, x2 = doc["radii"]["x1"], doc["radii"]["x2"]
    expect(abs(x1 - (1 - math.sqrt(0.4))) < 1e-12 and abs(x2 - (1 + math.sqrt(0.4))) < 1e-12, "radii")


def case_render_all():
    svg = ok("render", "--panel", "all", "--n", 1)
    expect(svg.startswith("<?xml"), "xml header")
    expect(svg.count('viewBox="0 0 800 600"') == 6, "six 800x600 panels")
    for name in ("Hyperplane", "Catenoid", "Sphere", "Cylinder", "Unduloid", "Nodoid"):
        expect(f">{name}</text>" in svg, name)
    import xml.dom.minidom

    xml.dom.minidom.parseString(svg)


def case_render_deterministic():
    a = ok("render", "--panel", "all", "--n", 2)
    b = ok("render", "--panel", "all", "--n", 2)
    expect(a == b, "byte-identical")
    with tempfile.TemporaryDirectory() as d:
        f1, f2 = os.path.join(d, "a.svg"), os.path.join(d, "b.svg")
        ok("render", "--panel", "nodoid", "-o", f1)
        ok("render", "--panel", "nodoid", "-o", f2)
        expect(open(f1, "rb").read() == open(f2, "rb").read(), "files identical")


def case_render_input():
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "sphere.csv")
        ok("trace", "--n", 1, "--h", 1, "--e", 0, "--reflect", 1, "-o", path)
        svg = ok("render", "--input", path)
        expect(">sphere</text>" in svg and "<polyline" in svg, "rendered trace")
        code, _, _ = run("render", "--input", os.path.join(d, "missing.csv"))
        expect(code == 2, f"missing file exit {code}")


def case_render_bad_panel():
    code, _, _ = run("render", "--panel", "torus")
    expect(code == 2, f"exit {code}")


def case_verify_energy():
    code, out, err = run("verify", "energy")
    expect(code == 0, err)
    doc = json.loads(out)
    expect(doc["passed"] and doc["checks"], "energy suite")
    drift = [c for c in doc["checks"] if "drift" in c["name"]]
    expect(drift and drift[0]["measured"] <= 1e-9, "max drift reported")


def case_verify_classification():
    doc = json.loads(ok("verify", "classification"))
    expect(doc["passed"], "classification suite")
    expect(any("1000" in c["name"] for c in doc["checks"]), "truth table")


def case_verify_unknown_suite():
    code, _, _ = run("verify", "nonsense")
    expect(code == 2, f"exit {code}")


def case_verify_all():
    code, out, err = run("verify", "all")
    expect(code == 0, err)
    doc = json.loads(out)
    suites = {c["suite"] for c in doc["checks"]}
    expect(suites == {"energy", "closed-forms", "curvature", "classification", "measures"}, str(suites))


def case_verify_all_mutant():
    code, out, err = run("verify", "all")
    expect(code == 3, f"mutant exit {code}")
    doc = json.loads(out)
    expect(not doc["passed"], "mutant report must fail")
    expect("FAIL" in err, err)


def sweep(*args, env=None):
    return rows(ok("sweep", *args, env=env))


def case_sweep_unduloid_transition():
    data = sweep("--n", 1, "--h", 0.5, "--e", "0:0.5:11")
    fam = [r["family"] for r in data]
    expect(fam[0] == "Sphere" and fam[-1] == "Cylinder", str(fam))
    expect(all(f == "Unduloid" for f in fam[1:-1]), str(fam))
    expect(all(r["status"] == "ok" for r in data), "status")


def case_sweep_nodoid():
    data = sweep("--n", "1,2,3", "--h", 1, "--e", "-2:-0.05:8")
    expect(len(data) == 24, "rows")
    for r in data:
        expect(r["family"] == "Nodoid" and float(r["t2"]) > 0, str(r))


def case_sweep_empty():
    for args in (("--e", ""), ("--e", "0:1:0")):
        out = ok("sweep", "--n", 1, "--h", 1, *args)
        expect(out == "index,n,h,e,family,x1,x2,x0,t2,perimeter,volume,status\n", repr(out))


def case_sweep_order():
    grid = ("--n", "1,2", "--h", "-1,0,0.5,1", "--e", "-0.3:0.3:5")
    one = ok("sweep", *grid, env={"CC_DELAUNAY_THREADS": "1"})
    many = ok("sweep", *grid, "--threads", 8)
    expect(one == many, "thread count changes output")
    idx = [int(r["index"]) for r in rows(one)]
    expect(idx == list(range(40)), "grid order")
    data = rows(one)
    expect(any(r["status"] == "NoAdmissibleRadius" for r in data), "invalid points reported per row")


def case_sweep_bad_grid():
    code, _, _ = run("sweep", "--n", "1.5", "--h", 1, "--e", 0)
    expect(code == 2, f"exit {code}")
    code, _, _ = run("sweep", "--n", 1, "--h", "a:b", "--e", 0)
    expect(code == 2, f"exit {code}")


globals()["case_" + CASE]()
print("ok", CASE)
