"""Command line front end: curve tables, the analysis pipeline, a Hecke
matrix cache and report rendering.

    heckegor analyze --level 431 [--curves FILE] [--precision K] [--no-cache] [--json|--markdown]
    heckegor hecke --level 431 --n 3
    heckegor intersect --level 2089 --pair A,E --slow
    heckegor screen --curves FILE

Exit codes: 0 success, 2 bad input, 3 precision failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import re
import sys
import tempfile
import time
import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from sympy import isprime, primerange

from . import gorenstein as gor
from .galois2 import (
    BadReduction,
    CurveModel,
    ap,
    frob_profile,
    mod2_irreducible_and_s3,
    mod2_traces,
    splits_completely_at_two,
)
from .heckealg import (
    Ambiguous,
    NoMatch,
    build_algebra,
    complete_at,
    ideal_from_curve_traces,
    mod2_maximal_ideals,
    sturm_bound,
)
from .intersect import (
    intersection_group,
    format_group,
    homology_lattice,
    multiplicity_one_verdict,
    rational_eigen_lattices,
)
from .linalg import charpoly
from .modsym import PRESENTATION_VERSION, build_space, genus_x0, hecke_matrix
from .padic import PrecisionLoss, square_class

log = logging.getLogger("heckegor")

SCHEMA_VERSION = 1
SLOW_LEVEL = 1000
CACHE_ENV = "HECKEGOR_CACHE_DIR"
EXIT_OK, EXIT_INPUT, EXIT_PRECISION = 0, 2, 3


class InputError(ValueError):
    pass


class MalformedLine(InputError):
    def __init__(self, message: str, line: str, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{message} at column {column + 1}\n  {line}\n  {' ' * column}^")


class NonPrimeLevel(InputError):
    pass


class SlowLevel(InputError):
    pass


# --------------------------------------------------------------------------
# Curve tables
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveRecord:
    conductor: int
    iso_class: str
    number: int
    coeffs: tuple[int, int, int, int, int]
    rank: int | None = None
    torsion: int | None = None

    @property
    def label(self) -> str:
        return f"{self.conductor}{self.iso_class}{self.number}"

    def curve(self) -> CurveModel:
        return CurveModel.from_list(self.coeffs, self.label)


_TOKEN = re.compile(r"\[[^\]]*\]?|\S+")
_INT = re.compile(r"[+-]?\d+$")


def parse_cremona(line: str) -> CurveRecord:
    """One allcurves line: 'N class num [a1,a2,a3,a4,a6] rank torsion'."""
    toks = [(m.group(), m.start()) for m in _TOKEN.finditer(line)]
    if len(toks) < 4:
        raise MalformedLine(f"expected at least 4 fields, found {len(toks)}", line, len(line.rstrip()))

    def integer(i, what):
        tok, col = toks[i]
        if not _INT.match(tok):
            raise MalformedLine(f"{what} must be an integer, got {tok!r}", line, col)
        return int(tok)

    N = integer(0, "conductor")
    if N < 11:
        raise MalformedLine(f"conductor {N} is below 11", line, toks[0][1])
    cls, col = toks[1]
    if not cls.isalpha():
        raise MalformedLine(f"isogeny class must be letters, got {cls!r}", line, col)
    num = integer(2, "curve number")
    lst, col = toks[3]
    if not (lst.startswith("[") and lst.endswith("]")):
        raise MalformedLine("coefficient list must be bracketed", line, col)
    parts = lst[1:-1].split(",")
    if len(parts) != 5:
        raise MalformedLine(f"expected 5 coefficients, found {len(parts)}", line, col)
    coeffs = []
    pos = col + 1
    for part in parts:
        if not _INT.match(part.strip()):
            raise MalformedLine(f"bad coefficient {part.strip()!r}", line, pos + len(part) - len(part.lstrip()))
        coeffs.append(int(part))
        pos += len(part) + 1
    rank = integer(4, "rank") if len(toks) > 4 else None
    torsion = integer(5, "torsion") if len(toks) > 5 else None
    if len(toks) > 6:
        raise MalformedLine("unexpected trailing field", line, toks[6][1])
    return CurveRecord(N, cls, num, tuple(coeffs), rank, torsion)


def parse_table(text: str) -> list[CurveRecord]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0]
        if line.strip():
            out.append(parse_cremona(line))
    return out


def bundled_curves(level: int | None = None) -> list[CurveRecord]:
    text = resources.files("heckegor").joinpath("data/curves.txt").read_text()
    recs = parse_table(text)
    return [r for r in recs if level is None or r.conductor == level]


def load_curves(path) -> list[CurveRecord]:
    return parse_table(Path(path).read_text())


# --------------------------------------------------------------------------
# Hecke matrix cache
# --------------------------------------------------------------------------

def default_cache_dir() -> Path:
    if os.environ.get(CACHE_ENV):
        return Path(os.environ[CACHE_ENV])
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "heckegor"


class HeckeCache:
    """Content-addressed store of T_n matrices keyed by (level, n, presentation version).

    With directory None nothing is read or written.
    """

    def __init__(self, directory=None):
        self.dir = Path(directory) if directory is not None else None
        self.hits = 0
        self.misses = 0

    @staticmethod
    def key(level: int, n: int) -> str:
        raw = f"hecke:{level}:{n}:{PRESENTATION_VERSION}"
        return hashlib.sha256(raw.encode()).hexdigest()[:40]

    def path(self, level: int, n: int) -> Path:
        return self.dir / f"{self.key(level, n)}.json"

    @staticmethod
    def _checksum(matrix) -> str:
        return hashlib.sha256(json.dumps(matrix, separators=(",", ":")).encode()).hexdigest()

    def load(self, level: int, n: int):
        if self.dir is None:
            return None
        p = self.path(level, n)
        if not p.exists():
            return None
        try:
            blob = json.loads(p.read_text())
            M = blob["matrix"]
            ok = (blob["level"], blob["n"], blob["version"]) == (level, n, PRESENTATION_VERSION) \
                and blob["checksum"] == self._checksum(M)
        except (ValueError, KeyError, TypeError):
            ok = False
        if not ok:
            warnings.warn(f"corrupt cache entry {p.name} for T_{n} at level {level}; recomputing")
            return None
        return M

    def store(self, level: int, n: int, M) -> None:
        if self.dir is None:
            return
        self.dir.mkdir(parents=True, exist_ok=True)
        M = [[int(x) for x in row] for row in M]
        blob = {"level": level, "n": n, "version": PRESENTATION_VERSION,
                "checksum": self._checksum(M), "matrix": M}
        fd, tmp = tempfile.mkstemp(dir=self.dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(blob, fh, separators=(",", ":"))
            os.replace(tmp, self.path(level, n))
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise

    def hecke(self, S, n: int):
        M = self.load(S.level, n)
        if M is not None:
            self.hits += 1
            return M
        self.misses += 1
        M = [[int(x) for x in row] for row in hecke_matrix(S, n).matrix]
        self.store(S.level, n, M)
        return M

    def source(self, S):
        return lambda n: self.hecke(S, n)


# --------------------------------------------------------------------------
# Analysis pipeline
# --------------------------------------------------------------------------

# Reducible parameter ideals quoted for the two levels, written in the etale
# presentation (431: coefficient lists in the generator's image theta).
REFERENCE_WITNESSES = {
    431: dict(theta=True, generator=3,
              ideal=[[[2], [2], [1, 1]]],
              ideal1=[[[2], [0], [0]], [[0], [2], [1, 1]]],
              ideal2=[[[0], [2], [0]], [[2], [0], [1, 1]]]),
    503: dict(theta=False, generator=None,
              ideal=[[2, 2, 2, 2]],
              ideal1=[[0, 2, 2, 2], [2, 0, 0, 0]],
              ideal2=[[2, 0, 2, 2], [0, 2, 0, 0]]),
}


def check_level(level: int, slow: bool = False) -> None:
    if not isprime(level):
        raise NonPrimeLevel(f"level {level} is not prime; only prime levels are supported")
    if level > SLOW_LEVEL and not slow:
        raise SlowLevel(f"level {level} is large; pass --slow to run it")


def _timed(timings, name):
    class _T:
        def __enter__(self):
            self.t = time.perf_counter()

        def __exit__(self, *exc):
            timings[name] = round(time.perf_counter() - self.t, 3)
    return _T()


def screen_curve(E: CurveModel) -> dict:
    irr, s3 = mod2_irreducible_and_s3(E)
    out = {"label": E.label, "coeffs": list(E.coeffs), "disc": E.disc,
           "irreducible": irr, "s3": s3}
    try:
        out["a2"] = ap(E, 2)
    except BadReduction:
        out["a2"] = None
    out["splits_at_2"] = splits_completely_at_two(E) if E.disc % 2 else False
    if E.disc % 3:
        f3 = frob_profile(E, 3)
        out["frob3"] = {"order": f3.order, "trace": f3.trace}
    else:
        out["frob3"] = None
    # the search criterion: S_3 image and 2 split completely in Q(E[2])
    out["candidate"] = bool(s3 and out["splits_at_2"])
    return out


def _component_fields(pres) -> list[str]:
    out = []
    for c in pres.components:
        if c.degree == 1:
            out.append("Q2")
        elif c.degree == 2:
            c0, b, _ = c.minpoly
            D = (b * b - 4 * c0) % pres.modulus
            if D >= pres.modulus // 2:
                D -= pres.modulus
            out.append(f"Q2(sqrt({square_class(D)}))")
        else:
            out.append(f"degree {c.degree} (e={c.e}, f={c.f})")
    return out


def _analyze_ideal(T, m, k: int, level: int) -> dict:
    A = complete_at(T, m, k)
    B = gor.reduce_mod2(A)
    sdim = gor.socle_dim(B)
    res = {"ideal": m.index, "residue_degree": m.residue_degree, "local_rank": A.rank,
           "t2_in_m": m.trace_data.get(2) == 0 if level != 2 else None,
           "socle_dim": sdim, "nilpotency_index": gor.nilpotency_index(B),
           "gorenstein": sdim == 1}
    w = gor.socle_witness(A)
    res["socle_witness"] = None if w is None else gor.witness_checks(A, w)
    try:
        ref = REFERENCE_WITNESSES.get(level)
        gen = A.hecke_image(ref["generator"]) if ref and ref["generator"] else None
        pres = gor.etale_presentation(A, generator=gen)
    except (gor.NoPrimitiveElement, NotImplementedError) as exc:
        res["etale"] = {"error": str(exc)}
        return res
    res["etale"] = {
        "signature": [list(s) for s in pres.signature],
        "fields": _component_fields(pres),
        "maximal_order_index": pres.maximal_order_index,
        "lattice_hnf": pres.lattice_basis,
        "precision": pres.precision,
        # minimal polynomials of the generator's image, low to high, mod 2^precision
        "minpolys": [[c % pres.modulus for c in comp.minpoly] for comp in pres.components],
    }
    width = len(pres.components) if ref and ref["theta"] else A.rank
    if ref and len(ref["ideal"][0]) == width:
        try:
            rw = gor.witness_from_components(pres, ref["ideal"], ref["ideal1"], ref["ideal2"],
                                             theta=ref["theta"])
            res["reference_witness"] = gor.witness_checks(A, rw)
        except gor.ElementOutsideAlgebra as exc:
            res["reference_witness"] = {"error": f"generator {list(exc.args[0])} is not in the completion"}
    return res


def _match_labels(lattices, curves, primes) -> dict[str, str]:
    """Eigen-lattice label -> isogeny-class letter (upper case) by comparing a_p."""
    out = {}
    for L in lattices:
        for r in curves:
            E = r.curve()
            if all(ap(E, p) == L.eigenvalues[p] for p in primes if p in L.eigenvalues and E.disc % p):
                out[L.label] = f"{r.conductor}{r.iso_class.upper()}"
                break
    return out


def newform_table(S, hecke=None, curves=(), verify_bound=None):
    lattices = rational_eigen_lattices(S, verify_bound=verify_bound, hecke=hecke)
    N = S.level
    primes = [p for p in primerange(2, 60) if p != N]
    names = _match_labels(lattices, curves, primes)
    rows = []
    for L in lattices:
        odd = [p for p in L.eigenvalues if p != 2 and p != N]
        rows.append({"label": L.label, "curve": names.get(L.label),
                     "fingerprint": {str(p): L.eigenvalues[p] for p in primes[:8]},
                     "reducible_mod2": all(L.eigenvalues[p] % 2 == 0 for p in odd)})
    return lattices, rows


def _congruent(L1, L2, N) -> bool:
    ps = [p for p in primerange(2, sturm_bound(N) + 1) if p != N]
    return all((L1.eigenvalues[p] - L2.eigenvalues[p]) % 2 == 0 for p in ps)


def intersection_table(S, lattices, rows) -> list[dict]:
    H = homology_lattice(S)
    byname = {r["label"]: r for r in rows}
    out = []
    for i, L1 in enumerate(lattices):
        for L2 in lattices[i + 1:]:
            inv = intersection_group(H, L1, L2)
            irred = not (byname[L1.label]["reducible_mod2"] or byname[L2.label]["reducible_mod2"])
            cong = irred and _congruent(L1, L2, S.level)
            out.append({"pair": [L1.label, L2.label],
                        "curves": [byname[L1.label]["curve"], byname[L2.label]["curve"]],
                        "congruent_mod2": cong, "invariants": inv, "group": format_group(inv),
                        "verdict": multiplicity_one_verdict(inv, cong)})
    return out


def analyze(level: int, curves=None, precision: int = 64, cache: HeckeCache | None = None,
            slow: bool = False, seed: int = 0) -> dict:
    """Full pipeline at a prime level; returns a JSON-ready report."""
    check_level(level, slow)
    cache = cache or HeckeCache(None)
    timings = {}
    if curves is None:
        curves = bundled_curves(level)
    curves = [r for r in curves if r.conductor == level]
    with _timed(timings, "modular_symbols"):
        S = build_space(level)
    g = S.cuspidal_dim // 2
    report = {"schema_version": SCHEMA_VERSION, "level": level, "genus": g,
              "genus_formula": genus_x0(level), "cuspidal_dim": S.cuspidal_dim,
              "sturm": sturm_bound(level), "precision": precision, "seed": seed}
    if g == 0:
        report.update(maximal_ideals=[], curves=[], targets=[], newforms=[], intersections=[],
                      timings=timings)
        return report
    with _timed(timings, "hecke_algebra"):
        T = build_algebra(S, hecke=cache.source(S))
        ideals = mod2_maximal_ideals(T)
    report["hecke_rank"] = T.rank
    report["maximal_ideals"] = [
        {"index": m.index, "residue_degree": m.residue_degree, "local_dim": m.local_dim,
         "eisenstein": m.eisenstein} for m in ideals]

    screened = []
    targets: dict[int, list[str]] = {}
    bound_primes = list(primerange(2, T.sturm + 1))
    for r in curves:
        E = r.curve()
        info = screen_curve(E)
        if info["irreducible"]:
            try:
                m = ideal_from_curve_traces(T, mod2_traces(E, bound_primes), irreducible=True)
                info["ideal"] = m.index
                targets.setdefault(m.index, []).append(r.label)
            except (NoMatch, Ambiguous) as exc:
                info["ideal"] = None
                info["ideal_error"] = str(exc)
        screened.append(info)
    report["curves"] = screened
    if not targets:
        for m in ideals:
            if m.residue_degree == 1 and not m.eisenstein:
                targets[m.index] = []

    out = []
    with _timed(timings, "completion"):
        for idx in sorted(targets):
            m = ideals[idx]
            if m.residue_degree != 1:
                out.append({"ideal": idx, "skipped": "residue degree > 1"})
                continue
            res = _analyze_ideal(T, m, precision, level)
            res["curves"] = targets[idx]
            out.append(res)
    report["targets"] = out

    with _timed(timings, "intersections"):
        lattices, rows = newform_table(S, hecke=cache.source(S), curves=curves)
        report["newforms"] = rows
        report["intersections"] = intersection_table(S, lattices, rows)
    report["cache"] = {"hits": cache.hits, "misses": cache.misses}
    report["timings"] = timings
    return report


def strip_volatile(report: dict) -> dict:
    """Report without timings and cache statistics (for determinism checks)."""
    return {k: v for k, v in report.items() if k not in ("timings", "cache")}


def verdict_fields(report: dict) -> list:
    keep = ("ideal", "local_rank", "socle_dim", "gorenstein", "socle_witness", "reference_witness")
    out = []
    for t in report["targets"]:
        row = {k: t.get(k) for k in keep}
        row["signature"] = t.get("etale", {}).get("signature")
        row["fields"] = t.get("etale", {}).get("fields")
        out.append(row)
    return out


# --------------------------------------------------------------------------
# Rendering
# --------------------------------------------------------------------------

def _checks(d) -> str:
    if d is None:
        return "none"
    if "error" in d:
        return d["error"]
    return ("verified" if all(d.values()) else "FAILED") + " (" + \
        ", ".join(f"{k}={'yes' if v else 'no'}" for k, v in d.items()) + ")"


def render_markdown(report: dict) -> str:
    """Markdown view; a pure function of the JSON report."""
    L = [f"# Level {report['level']}", ""]
    L.append(f"- genus {report['genus']} (formula {report['genus_formula']}), "
             f"cuspidal modular symbols of dimension {report['cuspidal_dim']}")
    L.append(f"- Sturm bound {report['sturm']}, working precision 2^{report['precision']}")
    if "hecke_rank" in report:
        L.append(f"- Hecke algebra of rank {report['hecke_rank']}, "
                 f"{len(report['maximal_ideals'])} maximal ideals above 2")
    if report["curves"]:
        L += ["", "## Curves", "", "| curve | coefficients | disc | irreducible | S3 | 2 splits | a2 | Frob3 | ideal |",
              "|---|---|---|---|---|---|---|---|---|"]
        for c in report["curves"]:
            f3 = c["frob3"]
            f3s = f"order {f3['order']}, trace {f3['trace']}" if f3 else "-"
            L.append(f"| {c['label']} | {c['coeffs']} | {c['disc']} | {c['irreducible']} | {c['s3']} "
                     f"| {c['splits_at_2']} | {c['a2']} | {f3s} | {c.get('ideal')} |")
    for t in report["targets"]:
        L += ["", f"## Maximal ideal {t['ideal']}", ""]
        if "skipped" in t:
            L.append(f"skipped: {t['skipped']}")
            continue
        if t["curves"]:
            L.append(f"- attached to {', '.join(t['curves'])}")
        L.append(f"- residue degree {t['residue_degree']}, local rank {t['local_rank']}")
        et = t.get("etale", {})
        if "signature" in et:
            L.append(f"- etale components: {', '.join(et['fields'])} (signature {et['signature']})")
            L.append(f"- index in the maximal order: {et['maximal_order_index']}, "
                     f"coordinates known mod 2^{et['precision']}")
            L.append(f"- lattice HNF: {et['lattice_hnf']}")
            for f, mp in zip(et["fields"], et["minpolys"]):
                if len(mp) > 2:
                    low = [c % 2 ** 16 for c in mp]
                    L.append(f"- generator over {f}: minimal polynomial {low} mod 2^16 (low degree first)")
        elif et:
            L.append(f"- etale presentation unavailable: {et['error']}")
        L.append(f"- socle dimension {t['socle_dim']}, nilpotency index {t['nilpotency_index']}: "
                 f"**{'Gorenstein' if t['gorenstein'] else 'not Gorenstein'}**")
        L.append(f"- socle witness: {_checks(t['socle_witness'])}")
        if "reference_witness" in t:
            L.append(f"- reference witness: {_checks(t['reference_witness'])}")
    if report.get("newforms"):
        L += ["", "## Rational newforms", "", "| label | curve | a_p (p = 2, 3, 5, ...) | reducible mod 2 |",
              "|---|---|---|---|"]
        for r in report["newforms"]:
            L.append(f"| {r['label']} | {r['curve'] or '-'} | {list(r['fingerprint'].values())} "
                     f"| {r['reducible_mod2']} |")
        L += ["", "| pair | curves | congruent mod 2 | intersection | verdict |", "|---|---|---|---|---|"]
        for x in report["intersections"]:
            names = "/".join(c or "-" for c in x["curves"])
            L.append(f"| {x['pair'][0]}, {x['pair'][1]} | {names} | {x['congruent_mod2']} "
                     f"| {x['group']} | {x['verdict']} |")
    return "\n".join(L) + "\n"


# --------------------------------------------------------------------------
# Entry point
# --------------------------------------------------------------------------

def _emit(obj, args, markdown=None):
    text = markdown(obj) if args.markdown and markdown else json.dumps(obj, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _cache_from(args) -> HeckeCache:
    if args.no_cache:
        return HeckeCache(None)
    return HeckeCache(args.cache_dir or default_cache_dir())


def _resolve(label: str, rows) -> str:
    """Pair token -> eigen-lattice label: upper case names a curve class, lower case a synthetic label."""
    for r in rows:
        cur = r["curve"]
        if label == r["label"] or (cur and label in (cur, cur.lstrip("0123456789"))):
            return r["label"]
    raise InputError(f"no rational newform labelled {label!r}")


def cmd_analyze(args):
    curves = load_curves(args.curves) if args.curves else None
    rep = analyze(args.level, curves, args.precision, _cache_from(args), args.slow, args.seed)
    _emit(rep, args, render_markdown)


def cmd_hecke(args):
    check_level(args.level, args.slow)
    S = build_space(args.level)
    M = _cache_from(args).hecke(S, args.n)
    _emit({"schema_version": SCHEMA_VERSION, "level": args.level, "n": args.n,
           "matrix": M, "charpoly": charpoly(M)}, args)


def cmd_intersect(args):
    check_level(args.level, args.slow)
    cache = _cache_from(args)
    S = build_space(args.level)
    curves = load_curves(args.curves) if args.curves else bundled_curves(args.level)
    lattices, rows = newform_table(S, hecke=cache.source(S), curves=curves)
    table = intersection_table(S, lattices, rows)
    if args.pair:
        toks = [t.strip() for t in args.pair.split(",")]
        if len(toks) != 2:
            raise InputError("--pair expects two labels separated by a comma")
        want = sorted(_resolve(t, rows) for t in toks)
        table = [x for x in table if sorted(x["pair"]) == want]
    _emit({"schema_version": SCHEMA_VERSION, "level": args.level, "newforms": rows,
           "intersections": table}, args)


def cmd_screen(args):
    curves = load_curves(args.curves) if args.curves else bundled_curves()
    _emit({"schema_version": SCHEMA_VERSION,
           "curves": [screen_curve(r.curve()) for r in curves]}, args)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="heckegor", description=__doc__.split("\n\n")[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, level=True):
        if level:
            sp.add_argument("--level", type=int, required=True)
        sp.add_argument("--no-cache", action="store_true")
        sp.add_argument("--cache-dir")
        sp.add_argument("--slow", action="store_true", help=f"allow levels above {SLOW_LEVEL}")
        sp.add_argument("-o", "--output")
        fmt = sp.add_mutually_exclusive_group()
        fmt.add_argument("--json", action="store_true", help="JSON output (default)")
        fmt.add_argument("--markdown", action="store_true")

    a = sub.add_parser("analyze")
    common(a)
    a.add_argument("--curves")
    a.add_argument("--precision", type=int, default=64)
    a.add_argument("--seed", type=int, default=0)
    a.set_defaults(func=cmd_analyze)

    h = sub.add_parser("hecke")
    common(h)
    h.add_argument("--n", type=int, required=True)
    h.set_defaults(func=cmd_hecke)

    i = sub.add_parser("intersect")
    common(i)
    i.add_argument("--pair")
    i.add_argument("--curves")
    i.set_defaults(func=cmd_intersect)

    s = sub.add_parser("screen")
    common(s, level=False)
    s.add_argument("--curves")
    s.set_defaults(func=cmd_screen)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        args.func(args)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PrecisionLoss as exc:
        print(f"precision failure: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
