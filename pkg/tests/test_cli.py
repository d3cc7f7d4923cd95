import json
import warnings

import pytest

from heckegor import cli
from heckegor.cli import (
    HeckeCache,
    MalformedLine,
    NonPrimeLevel,
    SlowLevel,
    analyze,
    bundled_curves,
    check_level,
    main,
    parse_cremona,
    parse_table,
    render_markdown,
    strip_volatile,
    verdict_fields,
)
from heckegor.galois2 import ap
from heckegor.intersect import rational_eigen_lattices
from heckegor.modsym import hecke_matrix

from conftest import algebra, space


def test_parse_line():
    r = parse_cremona("431 a 1 [1,0,0,0,-1] 1 1")
    assert (r.conductor, r.iso_class, r.number, r.coeffs, r.rank, r.torsion) == \
        (431, "a", 1, (1, 0, 0, 0, -1), 1, 1)
    assert r.label == "431a1"
    r = parse_cremona("  11 a 1 [0,-1,1,-10,-20]")
    assert r.rank is None and r.curve().disc == -161051


@pytest.mark.parametrize("line, column", [
    ("431 a 1 [1,0,0,x,-1] 1 1", 15),
    ("431 a 1 [1,0,0,-1] 1 1", 8),
    ("43x a 1 [1,0,0,0,-1]", 0),
    ("431 7 1 [1,0,0,0,-1]", 4),
    ("431 a 1 [1,0,0,0,-1] 1 1 9", 25),
    ("431 a", 5),
])
def test_malformed_lines(line, column):
    with pytest.raises(MalformedLine) as exc:
        parse_cremona(line)
    assert exc.value.column == column
    assert str(exc.value).splitlines()[-1].index("^") - 2 == column


def test_table_comments():
    recs = parse_table("# header\n\n11 a 1 [0,-1,1,-10,-20] 0 5  # optimal\n")
    assert [r.label for r in recs] == ["11a1"]


@pytest.mark.parametrize("N", [11, 37, 431, 503])
def test_bundled_curves_match_eigenforms(N):
    lats = rational_eigen_lattices(space(N), algebra(N))
    recs = bundled_curves(N)
    assert len(recs) == len(lats)
    for r in recs:
        E = r.curve()
        hits = [L for L in lats if all(ap(E, p) == a for p, a in L.eigenvalues.items())]
        assert len(hits) == 1


def test_level_checks():
    with pytest.raises(NonPrimeLevel):
        check_level(12)
    with pytest.raises(SlowLevel):
        check_level(2089)
    check_level(2089, slow=True)


def test_cache_roundtrip(tmp_path):
    S = space(43)
    c = HeckeCache(tmp_path)
    M = c.hecke(S, 5)
    assert (c.hits, c.misses) == (0, 1)
    c2 = HeckeCache(tmp_path)
    assert c2.hecke(S, 5) == M and (c2.hits, c2.misses) == (1, 0)
    assert M == hecke_matrix(S, 5).matrix
    assert not list(tmp_path.glob("*.tmp"))


def test_corrupt_cache_entry_recomputed(tmp_path):
    S = space(43)
    c = HeckeCache(tmp_path)
    M = c.hecke(S, 3)
    path = c.path(43, 3)
    blob = json.loads(path.read_text())
    blob["matrix"][0][0] += 1
    path.write_text(json.dumps(blob))
    c2 = HeckeCache(tmp_path)
    with pytest.warns(UserWarning, match="corrupt"):
        M2 = c2.hecke(S, 3)
    assert M2 == M and c2.misses == 1
    path.write_text("{not json")
    with pytest.warns(UserWarning):
        assert HeckeCache(tmp_path).hecke(S, 3) == M
    # the recomputed entry replaced the bad one
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert HeckeCache(tmp_path).hecke(S, 3) == M


def test_no_cache_writes_nothing(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path / "env"))
    assert cli.default_cache_dir() == tmp_path / "env"
    out = tmp_path / "h.json"
    assert main(["hecke", "--level", "37", "--n", "2", "--no-cache", "-o", str(out)]) == 0
    assert not (tmp_path / "env").exists()
    data = json.loads(out.read_text())
    assert data["charpoly"] == [0, 0, 4, 4, 1]
    assert main(["hecke", "--level", "37", "--n", "2", "-o", str(out)]) == 0
    assert len(list((tmp_path / "env").glob("*.json"))) == 1


def test_report_deterministic(tmp_path):
    a = analyze(431, cache=HeckeCache(tmp_path))
    b = analyze(431, cache=HeckeCache(tmp_path))
    assert b["cache"]["misses"] == 0
    assert json.dumps(strip_volatile(a), sort_keys=True) == json.dumps(strip_volatile(b), sort_keys=True)
    assert render_markdown(a) == render_markdown(json.loads(json.dumps(a)))
    c = analyze(431, precision=128)
    v64, v128 = verdict_fields(a), verdict_fields(c)
    assert v64 == v128


def test_report_contents_431():
    rep = analyze(431)
    (t,) = rep["targets"]
    assert sorted(t["curves"]) == ["431a1", "431b1"]
    assert t["local_rank"] == 4 and t["socle_dim"] == 3 and not t["gorenstein"]
    assert t["etale"]["fields"] == ["Q2", "Q2", "Q2(sqrt(10))"]
    assert all(t["socle_witness"].values())
    assert "error" in t["reference_witness"]
    md = render_markdown(rep)
    assert "not Gorenstein" in md and "Q2(sqrt(10))" in md


def test_report_contents_503():
    rep = analyze(503)
    (t,) = rep["targets"]
    assert t["etale"]["lattice_hnf"] == [[1, 1, 1, 1], [0, 2, 0, 0], [0, 0, 2, 2], [0, 0, 0, 4]]
    assert all(t["reference_witness"].values())
    assert {x["verdict"] for x in rep["intersections"]} == {"multiplicity one FAILS"}


def test_exit_codes(tmp_path, capsys):
    assert main(["analyze", "--level", "12", "--no-cache"]) == 2
    assert "not prime" in capsys.readouterr().err
    assert main(["analyze", "--level", "2089", "--no-cache"]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("431 a 1 [1,0,0,0] 1 1\n")
    assert main(["screen", "--curves", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "^" in err and "column 9" in err
    assert main(["screen", "--curves", str(tmp_path / "missing.txt")]) == 2


def test_precision_exit_code(monkeypatch, capsys):
    def boom(*a, **k):
        raise cli.PrecisionLoss("ran out")
    monkeypatch.setattr(cli, "analyze", boom)
    assert main(["analyze", "--level", "431", "--no-cache"]) == 3
    assert "ran out" in capsys.readouterr().err


def test_intersect_and_screen_commands(tmp_path):
    out = tmp_path / "i.json"
    assert main(["intersect", "--level", "37", "--pair", "A,B", "--no-cache", "-o", str(out)]) == 0
    (row,) = json.loads(out.read_text())["intersections"]
    assert row["invariants"] == [2, 2]
    assert main(["intersect", "--level", "37", "--pair", "a,b", "--no-cache", "-o", str(out)]) == 0
    assert json.loads(out.read_text())["intersections"][0]["invariants"] == [2, 2]
    assert main(["intersect", "--level", "37", "--pair", "A,Z", "--no-cache", "-o", str(out)]) == 2
    assert main(["screen", "-o", str(out)]) == 0
    scr = {c["label"]: c for c in json.loads(out.read_text())["curves"]}
    assert scr["431a1"]["irreducible"] and scr["431a1"]["splits_at_2"]
    assert not scr["2089b1"]["irreducible"]


def test_markdown_output(tmp_path):
    out = tmp_path / "r.md"
    assert main(["analyze", "--level", "11", "--no-cache", "--markdown", "-o", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("# Level 11") and "**Gorenstein**" in text
