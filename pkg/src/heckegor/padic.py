"""Factoring integer polynomials over the 2-adic numbers to finite precision.

Polynomials are coefficient lists in increasing degree.  A polynomial is
"known mod 2^p" when only its coefficients' residues mod 2^p are meaningful;
every routine here tracks that working precision and refuses to answer
when it runs out rather than guessing.

The factorization strategy is the usual one for small degrees:

* split off coprime pieces of the reduction mod 2 by Hensel lifting;
* inside a piece congruent to (x - c)^m, look at the Newton polygon of
  f(x + c): a single segment of slope h/m in lowest terms is totally
  ramified, an integral slope s is removed by x -> 2^s x, anything else
  is attacked by extracting 2-adic roots and deflating;
* quadratics are classified directly by the square class of their
  discriminant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from sympy import Poly, symbols

_X = symbols("x")

MIN_PRECISION = 8


class PrecisionLoss(ArithmeticError):
    """A 2-adic computation could not reach the requested precision."""


class NotSquarefree(ValueError):
    pass


@dataclass(frozen=True)
class Q2Factor:
    """A monic factor known mod 2^precision, irreducible over Q_2.

    e and f are the ramification index and residue degree of the field it
    generates.
    """

    poly: tuple[int, ...]
    e: int
    f: int
    precision: int

    @property
    def degree(self) -> int:
        return len(self.poly) - 1


def v2(n: int) -> int:
    """2-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    return (n & -n).bit_length() - 1


# -- small polynomial helpers -------------------------------------------------

def _trim(f):
    f = list(f)
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    return f


def poly_mul(f, g, mod=None):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    if mod is not None:
        out = [c % mod for c in out]
    return out


def poly_eval(f, x, mod=None):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
        if mod is not None:
            acc %= mod
    return acc


def taylor_shift(f, c):
    """Coefficients of f(x + c)."""
    out = list(f)
    n = len(out)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] += c * out[j + 1]
    return out


def _scale_down(f, s):
    """2^(-n s) f(2^s x) for monic f of degree n; exact division assumed."""
    n = len(f) - 1
    return [c >> ((n - i) * s) for i, c in enumerate(f)]


def _scale_up(f, s):
    """Inverse of _scale_down: 2^(n s) f(x / 2^s)."""
    n = len(f) - 1
    return [c << ((n - i) * s) for i, c in enumerate(f)]


def _divmod_monic(f, g, mod):
    f = [c % mod for c in f]
    dg = len(g) - 1
    q = [0] * max(len(f) - dg, 1)
    for i in range(len(f) - 1 - dg, -1, -1):
        c = f[i + dg]
        q[i] = c
        if c:
            for j in range(dg + 1):
                f[i + j] = (f[i + j] - c * g[j]) % mod
    return q, _trim(f[:dg] or [0])


def is_square_q2(a) -> bool:
    """Whether a nonzero rational is a square in Q_2."""
    a = Fraction(a)
    if a == 0:
        raise ValueError("0 has no square class")
    num, den = a.numerator, a.denominator
    v = v2(num) - v2(den)
    if v % 2:
        return False
    u = (num >> v2(num)) * (den >> v2(den))
    return u % 8 == 1


def square_class(a) -> int:
    """Representative of a's class in Q_2^* / (Q_2^*)^2 among +-1, +-2, +-5, +-10."""
    a = Fraction(a)
    if a == 0:
        raise ValueError("0 has no square class")
    num, den = a.numerator, a.denominator
    v = v2(num) - v2(den)
    u = ((num >> v2(num)) * (den >> v2(den))) % 8
    rep = {1: 1, 3: -5, 5: 5, 7: -1}[u]
    return 2 * rep if v % 2 else rep


# -- arithmetic over F_2 via sympy --------------------------------------------

def _f2(f):
    return Poly(list(reversed([c % 2 for c in f])), _X, modulus=2)


def _from_f2(P):
    return [int(c) % 2 for c in reversed(P.all_coeffs())]


def _f2_factor(f):
    """[(g, m), ...] with g monic irreducible over F_2, sorted canonically."""
    _, facs = _f2(f).factor_list()
    out = [(_from_f2(g), m) for g, m in facs]
    out.sort(key=lambda gm: (len(gm[0]), gm[0][::-1], gm[1]))
    return out


def _f2_pow(g, m):
    out = [1]
    for _ in range(m):
        out = poly_mul(out, g, 2)
    return out


def hensel_split(f, g0, h0, prec):
    """Lift f = g0 h0 (mod 2, coprime, g0 monic) to f = g h mod 2^prec.

    f need not be monic: when its leading coefficients are even, h picks up
    the extra degree (roots of negative valuation).
    """
    G, H = _f2(g0), _f2(h0)
    s, t, one = G.gcdex(H)
    if one.degree() != 0:
        raise ValueError("factors are not coprime mod 2")
    t = _from_f2(t)
    g = list(g0)
    h = list(h0)
    mod = 2
    for _ in range(1, prec):
        err = [(a - b) for a, b in zip(_pad(f, len(f)), _pad(poly_mul(g, h), len(f)))]
        if any(c % mod for c in err):
            raise AssertionError("Hensel invariant broken")
        e = [(c // mod) % 2 for c in err]
        dg = _from_f2(_f2(poly_mul(e, t, 2)).rem(_f2(g0)))
        rest = _f2(e) - _f2(dg) * _f2(h0)
        dh, r = rest.div(_f2(g0))
        if not r.is_zero:
            raise AssertionError("Hensel step did not divide")
        dh = _from_f2(dh)
        g = [a + mod * b for a, b in zip(_pad(g, len(g)), _pad(dg, len(g)))]
        n = max(len(h), len(dh))
        h = [a + mod * b for a, b in zip(_pad(h, n), _pad(dh, n))]
        mod *= 2
    return [c % mod for c in g], [c % mod for c in h]


def _pad(f, n):
    return list(f) + [0] * (n - len(f))


# -- Newton polygons and roots ------------------------------------------------

def newton_polygon(f, prec):
    """Lower convex hull of (i, v(f_i)) as a list of vertices.

    Coefficients divisible by 2^prec count as unknown (infinite).  Returns
    None when the constant term vanishes to working precision.
    """
    pts = [(i, v2(c % (1 << prec))) for i, c in enumerate(f) if c % (1 << prec)]
    if not pts or pts[0][0] != 0:
        return None
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def z2_roots(f, prec):
    """Roots in Z_2 of monic f known mod 2^prec, as (root, digits) pairs.

    Panayi's recursion: at each node keep g(y) = f(r + 2^j y) / 2^v; the
    degree of g mod 2 bounds the number of roots in that disc.  A disc with
    one root is followed digit by digit; a disc with several roots whose
    precision runs out raises PrecisionLoss.
    """
    out = []
    stack = [(list(f), prec, 0, 0, len(f) - 1)]
    while stack:
        g, p, r, j, count = stack.pop()
        mod = 1 << max(p, 0)
        g = [c % mod for c in g]
        nz = [c for c in g if c]
        v = min(v2(c) for c in nz) if nz else p
        if p - v <= 0:
            if count != 1:
                raise PrecisionLoss("cluster of roots not separated")
            out.append((r, j))
            continue
        g = [c >> v for c in g]
        p -= v
        red = _trim([c % 2 for c in g])
        for b in (0, 1):
            mult = _root_multiplicity(red, b)
            if mult:
                h = taylor_shift(g, b)
                h = [c << i for i, c in enumerate(h)]
                stack.append((h, p, r + (b << j), j + 1, mult))
    out.sort()
    return out


def _root_multiplicity(red, b):
    m = 0
    g = list(red)
    while len(g) > 1 and poly_eval(g, b) % 2 == 0:
        g, _ = _divmod_monic(g, [b, 1], 2)
        m += 1
    return m


def _quadratic_class(f, prec):
    """(e, f) of monic x^2 + b x + c if irreducible over Q_2, else None."""
    c, b, _ = f
    D = (b * b - 4 * c) % (1 << prec)
    if D == 0:
        raise PrecisionLoss("discriminant vanishes to working precision")
    if D >= (1 << (prec - 1)):
        D -= 1 << prec
    v = v2(D)
    if v + 3 > prec:
        raise PrecisionLoss("discriminant square class undetermined")
    u = (D >> v) % 8
    if v % 2 or u in (3, 7):
        return 2, 1
    if u == 5:
        return 1, 2
    return None


# -- main entry point ---------------------------------------------------------

def factor_over_q2(f, k: int = 64, check_squarefree: bool = True) -> list[Q2Factor]:
    """Factor a monic integer polynomial over Q_2 to precision 2^k."""
    f = _trim([int(c) for c in f])
    if f[-1] != 1:
        raise ValueError("factor_over_q2 expects a monic polynomial")
    if len(f) == 1:
        return []
    if check_squarefree:
        P = Poly(list(reversed(f)), _X)
        if P.gcd(P.diff(_X)).degree() > 0:
            raise NotSquarefree(f)
    out = _factor(f, k)
    out.sort(key=lambda F: (F.e, F.f, F.degree, [c % (1 << min(F.precision, 16)) for c in F.poly]))
    return out


def _factor(f, prec) -> list[Q2Factor]:
    if prec < MIN_PRECISION:
        raise PrecisionLoss(f"working precision dropped to {prec} bits")
    mod = 1 << prec
    f = [c % mod for c in f]
    n = len(f) - 1
    if n == 1:
        return [Q2Factor(tuple(f), 1, 1, prec)]
    facs = _f2_factor(f)
    if len(facs) > 1:
        g0 = _f2_pow(*facs[0])
        h0 = [1]
        for gm in facs[1:]:
            h0 = poly_mul(h0, _f2_pow(*gm), 2)
        g, h = hensel_split(f, g0, h0, prec)
        return _factor(g, prec) + _factor(h, prec)
    g, m = facs[0]
    if m == 1:
        return [Q2Factor(tuple(f), 1, n, prec)]
    if len(g) != 2:
        raise NotImplementedError("repeated irreducible factor of degree > 1 mod 2")
    c = g[0]
    G = taylor_shift(f, c)
    hull = newton_polygon(G, prec)
    if hull is not None and len(hull) == 2:
        (_, h), _ = hull[0], hull[1]
        if gcd(h, n) == 1:
            return [Q2Factor(tuple(f), n, 1, prec)]
        if h % n == 0:
            s = h // n
            inner = _factor(_scale_down(G, s), prec - n * s)
            return [_unscale(F, s, c) for F in inner]
    if n == 2 and (cls := _quadratic_class(f, prec)) is not None:
        return [Q2Factor(tuple(f), *cls, prec)]
    if hull is not None and len(hull) > 2 and (split := _slope_split(G, hull, prec)):
        g, q, p = split
        return _factor(taylor_shift(g, -c), p) + _factor(taylor_shift(q, -c), p)
    roots = z2_roots(f, prec)
    if not roots:
        raise NotImplementedError("no 2-adic roots and no integral slope to split at")
    out = []
    cur, p = f, prec
    for r, digits in roots:
        p = min(p, digits)
        if p < MIN_PRECISION:
            raise PrecisionLoss("root known to too few digits")
        q, rem = _divmod_monic(cur, [-r, 1], 1 << p)
        if any(rem):
            raise PrecisionLoss("deflation left a remainder")
        out.append(Q2Factor(((-r) % (1 << p), 1), 1, 1, p))
        cur = q
    if len(cur) > 1:
        out.extend(_factor(cur, p))
    return out


def _slope_split(G, hull, prec):
    """Split G by root valuation at an integer t with min slope < t <= max slope.

    With F(y) = G(2^t y) / 2^c, roots of valuation >= t give the reduction
    of F mod 2 and the rest have negative valuation, so Hensel lifting F
    against (F mod 2, 1) separates them.  Returns (g, G / g, precision) or
    None when no integer separates the slopes.
    """
    slopes = [Fraction(y1 - y2, x2 - x1) for (x1, y1), (x2, y2) in zip(hull, hull[1:])]
    t = max(slopes).numerator // max(slopes).denominator
    if t <= min(slopes) or t < 0:
        return None
    mod = 1 << prec
    F = [(a % mod) << (t * j) for j, a in enumerate(G)]
    c = min(v2(a) for a in F if a)
    p = prec - c
    if p < MIN_PRECISION:
        raise PrecisionLoss("slope splitting exhausted the working precision")
    F = [(a >> c) % (1 << p) for a in F]
    g0 = _trim([a % 2 for a in F])
    d = len(g0) - 1
    if d in (0, len(G) - 1):
        return None
    g, _ = hensel_split(F, g0, [1], p)
    gx = [a << (t * (d - i)) for i, a in enumerate(g)]
    q, r = _divmod_monic(G, gx, 1 << p)
    if any(r):
        raise PrecisionLoss("slope factor does not divide to working precision")
    return [a % (1 << p) for a in gx], q, p


def _unscale(F: Q2Factor, s: int, c: int) -> Q2Factor:
    poly = taylor_shift(_scale_up(list(F.poly), s), -c)
    p = F.precision + s
    return Q2Factor(tuple(x % (1 << p) for x in poly), F.e, F.f, p)


def product_mod(factors, prec):
    out = [1]
    for F in factors:
        out = poly_mul(out, list(F.poly), 1 << prec)
    return out
