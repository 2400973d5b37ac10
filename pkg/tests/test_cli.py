"""End-to-end runs of every subcommand: exit codes, file layout, byte stability."""

import json
import math

import numpy as np
import pytest

from lorentzmaj import model as M
from lorentzmaj.cli import CHECK_HEADER, main
from lorentzmaj.causet import SURVEY_HEADER

DENTED = [[0, 0], [1, 0.6], [1.6, 0.3], [4, 0]]
REGION = {"K": 0, "region": {"kind": "diamond", "corners": [[0, 0], [2, 0]]}, "density": 60}


def run(tmp_path, *args, files=None):
    for name, text in (files or {}).items():
        (tmp_path / name).write_text(text if isinstance(text, str) else json.dumps(text))
    argv = [a.replace("@", str(tmp_path) + "/") for a in args]
    return main(argv)


def body(path):
    return [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]


def minkowski_gauges(rng, n):
    """Six separations of random chronological 4-chains in the flat plane."""
    g = M.curvature_gauge(0)
    out = []
    while len(out) < n:
        t = np.sort(rng.uniform(0, 4, 4))
        x = rng.uniform(-0.5, 0.5, 4)
        pts = [M.ModelPoint((float(a), float(b))) for a, b in zip(t, x)]
        T = [M.tau(g, pts[i], pts[j]) for i, j in ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))]
        if min(T) > 0.05:
            out.append(",".join("%.17g" % v for v in T))
    return "\n".join(out) + "\n"


# check-fourpoint ------------------------------------------------------------

def test_check_collinear_flat(tmp_path):
    lines = "1,2,3,1,2,1\n0.5,1.5,2,1,1.5,0.5\n"
    assert run(tmp_path, "check-fourpoint", "--k", "0", "--in", "@g.csv", "--out", "@o.csv",
               files={"g.csv": lines}) == 0
    rows = body(tmp_path / "o.csv")
    assert rows[0] == CHECK_HEADER and len(rows) == 3
    for r in rows[1:]:
        f = r.split(",")
        assert f[1] == f[4] == f[7] == "1"
        assert abs(float(f[2])) < 1e-12 and abs(float(f[5])) < 1e-12


def test_check_empty_file(tmp_path):
    assert run(tmp_path, "check-fourpoint", "--k", "1", "--in", "@g.csv", "--out", "@o.csv",
               files={"g.csv": ""}) == 0
    assert body(tmp_path / "o.csv") == [CHECK_HEADER]


def test_check_minkowski_gauges_direction(tmp_path):
    # flat gauges satisfy the bound at K=-1 and violate it somewhere at K=+1
    text = minkowski_gauges(np.random.default_rng(5), 200)
    assert run(tmp_path, "check-fourpoint", "--k", "-1", "--in", "@g.csv", "--out", "@m.csv",
               files={"g.csv": text}) == 0
    assert run(tmp_path, "check-fourpoint", "--k", "1", "--in", "@g.csv", "--out", "@p.csv") == 1
    fails = [r for r in body(tmp_path / "p.csv")[1:] if "0" in (r.split(",")[1], r.split(",")[4])]
    assert fails


@pytest.mark.parametrize("line", ["1,2,3", "1,2,3,1,2,x", "1,2,3,1,2,-1", "1,2,3,1,2,1,maybe"])
def test_check_malformed_line(tmp_path, capsys, line):
    code = run(tmp_path, "check-fourpoint", "--k", "0", "--in", "@g.csv", "--out", "@o.csv",
               files={"g.csv": "1,2,3,1,2,1\n" + line + "\n"})
    assert code == 2
    assert "line 2" in capsys.readouterr().err


def test_check_strict_flag_column(tmp_path):
    assert run(tmp_path, "check-fourpoint", "--k", "0", "--in", "@g.csv", "--out", "@o.csv",
               files={"g.csv": "1,2,3,1,2,1,le23\n"}) == 0
    assert body(tmp_path / "o.csv")[1].endswith(",1")


# majorize -------------------------------------------------------------------

def test_majorize_convex_is_identity(tmp_path):
    loop = {"K": 0, "alpha": [[0, 0], [1, 0.6], [3, 0.5], [4, 0]], "beta": [[0, 0], [2, -0.5], [4, 0]]}
    assert run(tmp_path, "majorize", "--in", "@l.json", "--out", "@o.json", files={"l.json": loop}) == 0
    doc = json.loads((tmp_path / "o.json").read_text())
    assert doc["output"] == doc["input"]
    assert doc["report"]["violations"] == [] and doc["report"]["pairs"] == 0


def test_majorize_dented_quad(tmp_path):
    loop = {"K": 0, "alpha": DENTED, "beta": [[0, 0], [4, 0]]}
    assert run(tmp_path, "majorize", "--in", "@l.json", "--out", "@o.json", "--svg", "@o.svg",
               files={"l.json": loop}) == 0
    doc = json.loads((tmp_path / "o.json").read_text())
    a = doc["output"]["alpha"]["corner_sides"]
    want = [0.8, math.sqrt(0.6 ** 2 - 0.3 ** 2) + math.sqrt(2.4 ** 2 - 0.3 ** 2)]
    assert a == pytest.approx(want, abs=1e-9)
    assert doc["output"]["beta"]["corner_sides"] == pytest.approx([4.0])
    assert doc["report"]["pairs"] > 0 and doc["report"]["max_defect"] <= 1e-7
    assert (tmp_path / "o.svg").read_text().count("<polygon") == 2


def test_majorize_stage_certificates_shrink(tmp_path):
    t = np.linspace(0, 1, 65)
    loop = {"K": 0, "alpha": [[2 * s, 0.3 * math.sin(math.pi * s)] for s in t], "beta": [[0, 0], [2, 0]]}
    reps = []
    for n in (3, 4):
        assert run(tmp_path, "majorize", "--in", "@l.json", "--out", f"@s{n}.json", "--level", str(n),
                   "--samples", "80", files={"l.json": loop}) == 0
        reps.append(json.loads((tmp_path / f"s{n}.json").read_text())["report"])
    assert reps[0]["pairs"] == reps[1]["pairs"] > 0
    assert reps[1]["max_certificate"] < reps[0]["max_certificate"]
    assert all(r["min_slack"] >= 0 for r in reps)


@pytest.mark.parametrize("beta", [[[0, 0], [4, 5]], [[0, 0], [1, 2], [4, 0]]])
def test_majorize_non_timelike(tmp_path, beta):
    loop = {"K": 0, "alpha": DENTED, "beta": beta}
    assert run(tmp_path, "majorize", "--in", "@l.json", "--out", "@o.json", files={"l.json": loop}) == 2


def test_majorize_bad_json(tmp_path):
    assert run(tmp_path, "majorize", "--in", "@l.json", files={"l.json": "{nope"}) == 2
    assert run(tmp_path, "majorize", "--in", "@missing.json") == 2


# sprinkle / survey ----------------------------------------------------------

def test_sprinkle_and_survey(tmp_path):
    assert run(tmp_path, "sprinkle", "--in", "@r.json", "--out", "@c.json", "--seed", "7",
               files={"r.json": REGION}) == 0
    doc = json.loads((tmp_path / "c.json").read_text())
    assert doc["config"]["seed"] == 7 and len(doc["points"]) > 50
    assert run(tmp_path, "survey", "--in", "@c.json", "--out", "@s.csv", "--k=-1,0",
               "--samples", "100", "--seed", "3") == 0
    text = (tmp_path / "s.csv").read_text()
    assert text.startswith("# config: ") and "# shortfall" in text
    rows = body(tmp_path / "s.csv")
    assert rows[0] == SURVEY_HEADER
    for r in rows[1:]:
        f = r.split(",")
        assert int(f[1]) > 0 and f[1] == f[4]


def test_survey_empty_causet(tmp_path):
    rec = {"K": 0, "points": []}
    assert run(tmp_path, "survey", "--in", "@c.json", "--out", "@s.csv", "--k", "0,1",
               files={"c.json": rec}) == 0
    rows = body(tmp_path / "s.csv")[1:]
    assert len(rows) == 2 and all(r.split(",")[1] == "0" and "nan" in r for r in rows)


@pytest.mark.parametrize("region", [
    {"kind": "diamond", "corners": [[0, 0], [1, 1]]},
    {"kind": "diamond", "corners": [[0, 0]]},
    {"kind": "blob"},
])
def test_sprinkle_bad_region(tmp_path, region):
    assert run(tmp_path, "sprinkle", "--in", "@r.json", files={"r.json": dict(REGION, region=region)}) == 2


# render / loc-solve ---------------------------------------------------------

def test_render_triangle(tmp_path):
    tri = {"K": 0, "triangle": [[0, 0], [1, 0.5], [3, 0]]}
    assert run(tmp_path, "render", "--in", "@t.json", "--out", "@t.svg", files={"t.json": tri}) == 0
    svg = (tmp_path / "t.svg").read_text()
    assert svg.count("<polyline") == 3 and svg.count("<text") == 3
    assert "projection: minkowski" in svg and "config:" in svg


def test_render_decomposition(tmp_path):
    assert run(tmp_path, "render", "--in", "@q.json", "--out", "@q.svg",
               files={"q.json": {"K": 0, "quadrilateral": DENTED}}) == 0
    svg = (tmp_path / "q.svg").read_text()
    assert svg.count("<polygon") == 2 and svg.count("<polyline") == 3


@pytest.mark.parametrize("K", [-1, 1])
def test_render_curved_declares_projection(tmp_path, K):
    g = M.curvature_gauge(K)
    o = M.origin(g)
    e = M.reference_direction(g, o)
    pts = [o, M.exp_point(g, o, M.boost(g, o, e, 0.3), 1.0), M.exp_point(g, o, e, 2.0)]
    tri = {"K": K, "triangle": [list(p.coords) for p in pts]}
    assert run(tmp_path, "render", "--in", "@t.json", "--out", "@t.svg", files={"t.json": tri}) == 0
    assert "orthographic, drop" in (tmp_path / "t.svg").read_text()


def test_render_unsupported(tmp_path):
    assert run(tmp_path, "render", "--in", "@x.json", files={"x.json": {"K": 0, "hexagon": []}}) == 2


def test_loc_solve(tmp_path):
    assert run(tmp_path, "loc-solve", "--k", "0", "--out", "@a.json", "1", "2", "3") == 0
    doc = json.loads((tmp_path / "a.json").read_text())
    assert doc["sigma"] == 1 and doc["value"] == pytest.approx(1.0)
    assert run(tmp_path, "loc-solve", "--k", "-1", "--side", "--out", "@b.json", "1", "1", "1.5") == 0
    c = json.loads((tmp_path / "b.json").read_text())["c"]
    # round trip through the angle solver
    assert run(tmp_path, "loc-solve", "--k", "-1", "--out", "@c.json", "1", "1", repr(c)) == 0
    assert json.loads((tmp_path / "c.json").read_text())["value"] == pytest.approx(1.5, rel=1e-9)


def test_usage_errors(tmp_path):
    assert main([]) == 2
    assert main(["nosuch"]) == 2
    assert run(tmp_path, "loc-solve", "--k", "0", "1", "2", "2.5") == 2


# determinism ----------------------------------------------------------------

def test_every_command_byte_identical(tmp_path):
    files = {"g.csv": "1,2,3,1,2,1\n0.5,0.6,2,0.1,1.2,0.7\n", "r.json": REGION,
             "l.json": {"K": 0, "alpha": DENTED, "beta": [[0, 0], [4, 0]]},
             "q.json": {"K": 0, "quadrilateral": DENTED}}
    runs = [
        ("check-fourpoint", "--k", "1", "--in", "@g.csv", "--out", "@c.csv"),
        ("majorize", "--in", "@l.json", "--out", "@m.json", "--svg", "@m.svg"),
        ("majorize", "--in", "@l.json", "--level", "3", "--samples", "40", "--out", "@n.json"),
        ("sprinkle", "--in", "@r.json", "--seed", "7", "--out", "@s.json"),
        ("survey", "--in", "@s.json", "--k", "0,1", "--samples", "50", "--out", "@v.csv"),
        ("render", "--in", "@q.json", "--out", "@r.svg"),
        ("loc-solve", "--k", "1", "--out", "@l.json.out", "1", "2", "3.2"),
    ]
    outs = [a[1:] for args in runs for a, prev in zip(args, ("",) + args) if prev in ("--out", "--svg")]
    run(tmp_path, "loc-solve", "--k", "0", "1", "1", "2", files=files)
    snaps = []
    for rep in range(2):
        for args in runs:
            assert run(tmp_path, *args) == 0, args
        snaps.append({n: (tmp_path / n).read_bytes() for n in outs})
    assert snaps[0] == snaps[1]
