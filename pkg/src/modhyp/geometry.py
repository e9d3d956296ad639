"""Line-incidence census over a hyperbola point set.

The census hashes every point pair by the canonical key of the line through
it and recovers each line's point count t from its pair count t*(t-1)/2.
For moduli where the packed key fits in int64 the pair loop is vectorized
with numpy (exact integer ops only); a pure-Python path with the identical
algorithm serves both as fallback and as the oracle in tests.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .hyperbola import HyperbolaSpec, PointSet, enumerate_points, partition_classes
from .ntcore import PrimePower

_PAIR_BLOCK = 1 << 21


class DegeneratePair(ValueError):
    """Two equal points do not determine a line."""


class TooFewPoints(ValueError):
    """Census needs at least two points."""


class OutOfScope(ValueError):
    """Modulus outside the range the check is defined for."""


@dataclass(frozen=True, order=True)
class LineKey:
    """Canonical primitive triple (A, B, C) of the line A*x + B*y + C = 0.

    gcd(A, B, C) = 1 and the first nonzero of (A, B) is positive, so any two
    point pairs on one Euclidean line produce the same key.
    """

    A: int
    B: int
    C: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.A, self.B, self.C)


def _line_triple(x1: int, y1: int, x2: int, y2: int) -> tuple[int, int, int]:
    dx, dy = x2 - x1, y2 - y1
    a, b, c = dy, -dx, dx * y1 - dy * x1
    g = math.gcd(math.gcd(a, b), c)
    a, b, c = a // g, b // g, c // g
    if a < 0 or (a == 0 and b < 0):
        a, b, c = -a, -b, -c
    return a, b, c


def line_through(p: tuple[int, int], q: tuple[int, int]) -> LineKey:
    """Canonical line through two distinct points."""
    if p == q:
        raise DegeneratePair(f"identical points {p}")
    return LineKey(*_line_triple(p[0], p[1], q[0], q[1]))


def _packable(n: int) -> bool:
    # packed key range must fit in int64
    return (2 * n + 1) ** 2 * (4 * n * n + 1) < 2**63


def _pack_consts(n: int) -> tuple[int, int, int]:
    return 2 * n + 1, 4 * n * n + 1, 2 * n * n


class IncidenceCensus:
    """Exact per-line point counts with the derived ordinary-line statistics."""

    def __init__(self, n: int, a: int, point_count: int, keys, tvals, packed: bool):
        self.n = n
        self.a = a
        self.point_count = point_count
        self._packed = packed
        self._keys = keys
        self._t = tvals
        self._line_counts: dict[LineKey, int] | None = None
        hist: dict[int, int] = {}
        if packed:
            uniq, cnt = np.unique(tvals, return_counts=True)
            hist = {int(u): int(c) for u, c in zip(uniq, cnt)}
        else:
            for t in tvals:
                hist[t] = hist.get(t, 0) + 1
        self.histogram = dict(sorted(hist.items()))
        self.ordinary_count = self.histogram.get(2, 0)
        self.max_collinear = max(self.histogram) if self.histogram else 0
        self.line_total = sum(self.histogram.values())
        # every unordered point pair lies on exactly one line
        pair_total = sum(c * t * (t - 1) // 2 for t, c in self.histogram.items())
        if pair_total != point_count * (point_count - 1) // 2:
            raise RuntimeError("census pair-count identity violated")

    def _decode(self, packed_keys) -> list[LineKey]:
        mb, mc, off = _pack_consts(self.n)
        c = packed_keys % mc - off
        r = packed_keys // mc
        b = r % mb - self.n
        a = r // mb - self.n
        return [LineKey(int(ai), int(bi), int(ci)) for ai, bi, ci in zip(a, b, c)]

    def lines(self, min_points: int = 2) -> Iterator[tuple[LineKey, int]]:
        """Yield (line, point count) for every line with at least min_points."""
        if self._packed:
            mask = self._t >= min_points
            for key, t in zip(self._decode(self._keys[mask]), self._t[mask]):
                yield key, int(t)
        else:
            for key, t in zip(self._keys, self._t):
                if t >= min_points:
                    yield key, t

    @property
    def line_counts(self) -> dict[LineKey, int]:
        if self._line_counts is None:
            self._line_counts = dict(self.lines())
        return self._line_counts

    def zero_intercept_lines(self) -> list[tuple[LineKey, int]]:
        """All census lines with C = 0."""
        if self._packed:
            _, mc, off = _pack_consts(self.n)
            mask = self._keys % mc == off
            return list(zip(self._decode(self._keys[mask]), (int(t) for t in self._t[mask])))
        return [(k, t) for k, t in zip(self._keys, self._t) if k.C == 0]

    def to_payload(self) -> dict:
        return {
            "n": self.n,
            "a": self.a,
            "ordinary": self.ordinary_count,
            "histogram": {str(k): v for k, v in self.histogram.items()},
            "max_collinear": self.max_collinear,
        }

    def to_csv_row(self) -> str:
        return f"{self.n},{self.a},{self.ordinary_count},{self.max_collinear}"


def _census_python(pts, n: int, a: int) -> IncidenceCensus:
    pair_counts: dict[tuple[int, int, int], int] = {}
    for (x1, y1), (x2, y2) in itertools.combinations(pts, 2):
        key = _line_triple(x1, y1, x2, y2)
        pair_counts[key] = pair_counts.get(key, 0) + 1
    keys, tvals = [], []
    for key in sorted(pair_counts):
        c = pair_counts[key]
        t = (1 + math.isqrt(1 + 8 * c)) // 2
        if t * (t - 1) // 2 != c:
            raise RuntimeError("pair count is not triangular")
        keys.append(LineKey(*key))
        tvals.append(t)
    return IncidenceCensus(n, a, len(pts), keys, tvals, packed=False)


def _census_numpy(pts, n: int, a: int) -> IncidenceCensus:
    k = len(pts)
    xs = np.fromiter((p[0] for p in pts), dtype=np.int64, count=k)
    ys = np.fromiter((p[1] for p in pts), dtype=np.int64, count=k)
    mb, mc, _ = _pack_consts(n)
    off_c = 2 * n * n
    rows_per_block = max(1, _PAIR_BLOCK // k)
    chunks = []
    for lo in range(0, k - 1, rows_per_block):
        hi = min(lo + rows_per_block, k - 1)
        counts = k - 1 - np.arange(lo, hi)
        i_idx = np.repeat(np.arange(lo, hi), counts)
        j_idx = np.concatenate([np.arange(i + 1, k) for i in range(lo, hi)])
        dx = xs[j_idx] - xs[i_idx]
        dy = ys[j_idx] - ys[i_idx]
        ca = dy
        cb = -dx
        cc = dx * ys[i_idx] - dy * xs[i_idx]
        del dx, dy
        g = np.gcd(np.gcd(ca, cb), cc)
        ca //= g
        cb //= g
        cc //= g
        sign = np.where(ca != 0, np.sign(ca), np.sign(cb))
        chunks.append((ca * sign + n) * (mb * mc) + (cb * sign + n) * mc + (cc * sign + off_c))
    keys, pair_counts = np.unique(np.concatenate(chunks), return_counts=True)
    tvals = np.rint((1 + np.sqrt(1 + 8 * pair_counts.astype(np.float64))) / 2).astype(np.int64)
    if not np.all(tvals * (tvals - 1) // 2 == pair_counts):
        raise RuntimeError("pair count is not triangular")
    return IncidenceCensus(n, a, k, keys, tvals, packed=True)


def census(ps: PointSet, force_python: bool = False) -> IncidenceCensus:
    """Full incidence census of a point set (at least two points)."""
    if len(ps.points) < 2:
        raise TooFewPoints(f"{len(ps.points)} point(s) span no lines")
    n, a = ps.spec.n, ps.spec.a
    if force_python or not _packable(n):
        return _census_python(ps.points, n, a)
    return _census_numpy(ps.points, n, a)


def count_on_line(ps: PointSet, key: LineKey) -> int:
    """Number of points of ps on the given line."""
    return sum(1 for x, y in ps.points if key.A * x + key.B * y + key.C == 0)


def no_ordinary_moduli(n_max: int) -> list[int]:
    """All n in [2, n_max] whose a = 1 hyperbola spans no ordinary line."""
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    out = []
    for n in range(2, n_max + 1):
        ps = enumerate_points(HyperbolaSpec(1, n))
        if len(ps) < 2 or census(ps).ordinary_count == 0:
            out.append(n)
    return out


def check_special_line(pp: PrimePower) -> int:
    """Points of the a = 1 hyperbola mod p**m on the line x + y = p**m + 2.

    Defined for m >= 2 and p**m > 8; the count equals p**floor(m/2) - 1.
    """
    if pp.m < 2 or pp.n <= 8:
        raise OutOfScope(f"special line needs m >= 2 and p^m > 8, got {pp}")
    ps = enumerate_points(HyperbolaSpec(1, pp.n))
    target = pp.n + 2
    return sum(1 for x, y in ps.points if x + y == target)


@dataclass(frozen=True)
class OrdinaryLowerBound:
    """Exact rational lower bound for the ordinary-line count of H_{1,p^m}."""

    p: int
    m: int
    constant: Fraction
    bound: Fraction
    equality_expected: bool

    @property
    def ceil(self) -> int:
        return -(-self.bound.numerator // self.bound.denominator)


def _bound_constant(pp: PrimePower) -> Fraction:
    # 6/13 is the unconditional per-class constant for m >= 2 (class size is
    # never 7 there except p^m = 49, which has its own exact constant).
    if pp.m == 1:
        return Fraction(0)
    if pp.n == 4:
        return Fraction(1, 2)
    if pp.n == 8:
        return Fraction(0)
    if pp.n == 49:
        return Fraction(6, 7)
    return Fraction(6, 13)


def ordinary_lower_bound(pp: PrimePower) -> OrdinaryLowerBound:
    c = _bound_constant(pp)
    bound = pp.phi * (Fraction(pp.p ** (pp.m - 1) * (pp.p - 2), 2) + c)
    equality = pp.m == 1 or pp.n in (4, 8, 49)
    return OrdinaryLowerBound(pp.p, pp.m, c, bound, equality)


@dataclass
class OrdinaryBoundReport:
    n: int
    ordinary: int
    bound: Fraction
    ceil_bound: int
    satisfied: bool
    equality: bool
    equality_expected: bool
    stronger_bound: Fraction | None  # aspirational constant, reported only

    @property
    def ok(self) -> bool:
        return self.satisfied and self.equality == self.equality_expected


def verify_ordinary_bound(pp: PrimePower, cen: IncidenceCensus | None = None) -> OrdinaryBoundReport:
    """Compare the measured ordinary-line count against the exact lower bound."""
    if pp.n < 3:
        raise OutOfScope("bound check needs p^m >= 3")
    if cen is None:
        cen = census(enumerate_points(HyperbolaSpec(1, pp.n)))
    lb = ordinary_lower_bound(pp)
    n_ord = cen.ordinary_count
    stronger = None
    if pp.m >= 2:
        c_strong = Fraction(1, 2) if pp.p == 2 else Fraction(3, 4)
        stronger = pp.phi * (Fraction(pp.p ** (pp.m - 1) * (pp.p - 2), 2) + c_strong)
    return OrdinaryBoundReport(
        n=pp.n,
        ordinary=n_ord,
        bound=lb.bound,
        ceil_bound=lb.ceil,
        satisfied=n_ord >= lb.ceil,
        equality=n_ord == lb.bound,
        equality_expected=lb.equality_expected,
        stronger_bound=stronger,
    )


@dataclass
class LineClassReport:
    n: int
    a: int
    lines_checked: int
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_line_classes(ps: PointSet, cen: IncidenceCensus | None = None) -> LineClassReport:
    """Structural checks on every line with >= 3 points of an odd prime-power set.

    Each such line must stay inside a single x mod p class, have C and A*B
    coprime to p, satisfy C*C - 4AB = 0 (mod p), and sit in the class
    i = -C * (2A)**-1 mod p; every line with C = 0 must be y = x with
    exactly two points.
    """
    pp = ps.spec.prime_power
    if pp is None or pp.p == 2 or pp.m < 2:
        raise OutOfScope("line-class checks need an odd prime power with m >= 2")
    p = pp.p
    if cen is None:
        cen = census(ps)
    xs = np.fromiter((pt[0] for pt in ps.points), dtype=np.int64)
    ys = np.fromiter((pt[1] for pt in ps.points), dtype=np.int64)
    violations: list[str] = []
    checked = 0
    for key, t in cen.lines(min_points=3):
        checked += 1
        on = xs[key.A * xs + key.B * ys + key.C == 0]
        if len(on) != t:
            raise RuntimeError(f"census count mismatch on {key}")
        classes = set(int(x) % p for x in on)
        if len(classes) != 1:
            violations.append(f"line {key.as_tuple()} meets classes {sorted(classes)}")
            continue
        if key.C % p == 0:
            violations.append(f"line {key.as_tuple()}: p divides C")
        if (key.A * key.B) % p == 0:
            violations.append(f"line {key.as_tuple()}: p divides A*B")
            continue
        if (key.C * key.C - 4 * key.A * key.B) % p != 0:
            violations.append(f"line {key.as_tuple()}: discriminant not 0 mod p")
        else:
            expect = -key.C * pow(2 * key.A, -1, p) % p
            if classes != {expect}:
                violations.append(f"line {key.as_tuple()}: class {classes} != {expect}")
    for key, t in cen.zero_intercept_lines():
        if key.as_tuple() != (1, -1, 0):
            violations.append(f"zero-intercept line {key.as_tuple()} is not y = x")
        elif t != 2:
            violations.append(f"line y = x carries {t} points, expected 2")
    return LineClassReport(ps.spec.n, ps.spec.a, checked, violations)


@dataclass
class CollinearityReport:
    n: int
    a: int
    max_collinear: int
    limit: int
    class_line_counts: dict[int, int]
    violations: list[str]
    many_lines_regime: bool

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_collinearity_bounds(ps: PointSet, cen: IncidenceCensus | None = None) -> CollinearityReport:
    """Check max collinearity <= 2*p**floor(m/2) and that no class is collinear.

    Also reports the number of distinct lines each class spans (the quantity
    the point-count threshold argument bounds from below).
    """
    pp = ps.spec.prime_power
    if pp is None or pp.p == 2:
        raise OutOfScope("collinearity checks need an odd prime power")
    if cen is None:
        cen = census(ps)
    limit = 2 * pp.p ** (pp.m // 2)
    violations: list[str] = []
    if cen.max_collinear > limit:
        violations.append(f"max collinear {cen.max_collinear} exceeds {limit}")
    class_lines: dict[int, int] = {}
    if pp.m >= 2:
        part = partition_classes(ps)
        for i, cpts in sorted(part.classes.items()):
            key = line_through(cpts[0], cpts[1])
            on_line = sum(1 for x, y in cpts if key.A * x + key.B * y + key.C == 0)
            if on_line == len(cpts):
                violations.append(f"class {i} is entirely collinear on {key.as_tuple()}")
            sub = census(PointSet(ps.spec, cpts))
            class_lines[i] = sub.line_total
    # classes above this size threshold must span quadratically many lines
    many_lines = pp.p ** ((pp.m + 1) // 2 - 1) > 200
    return CollinearityReport(
        ps.spec.n, ps.spec.a, cen.max_collinear, limit, class_lines, violations, many_lines
    )
