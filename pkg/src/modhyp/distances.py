"""Distance-set machinery for hyperbola point sets.

All distances are handled as exact squared integers x*x + y*y; the number of
distinct distances equals the number of distinct squared values, so nothing
irrational is ever computed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .hyperbola import HyperbolaSpec
from .ntcore import PrimePower, divisors, legendre, next_prime, sqrt_mod_prime

DEFAULT_GAP_BOUND = 2**31


class MissingRoot(ValueError):
    """Branch evaluation needs a square root of a mod p that does not exist."""


class NoSquareRoot(ValueError):
    """Operation defined only when a is a quadratic residue mod p."""


class NotApplicable(ValueError):
    """Divisor-pair counting applies only when the root shift is zero."""


class InfeasibleScale(ValueError):
    """Requested construction exceeds the configured arithmetic bound."""


@dataclass
class DistanceProfile:
    """Map squared distance -> sorted x-preimages, over all units mod n."""

    spec: HyperbolaSpec
    value_map: dict[int, list[int]]

    @property
    def distinct_count(self) -> int:
        return len(self.value_map)

    @property
    def preimage_total(self) -> int:
        return sum(len(v) for v in self.value_map.values())

    def to_payload(self, include_values: bool = False) -> dict:
        out = {"a": self.spec.a, "n": self.spec.n, "count": self.distinct_count}
        if include_values:
            out["values"] = sorted(self.value_map)
        return out


def distance_value(a: int, x: int, n: int) -> int:
    """Squared distance of the hyperbola point with abscissa x."""
    xr = x % n
    yr = a * pow(xr, -1, n) % n
    return xr * xr + yr * yr


def distance_profile(spec: HyperbolaSpec) -> DistanceProfile:
    """Exact profile of squared distances over the whole point set."""
    a, n = spec.a, spec.n
    value_map: dict[int, list[int]] = {}
    if spec.prime_power is not None:
        p = spec.prime_power.p
        units = (x for x in range(1, n) if x % p != 0)
    else:
        units = (x for x in range(1, n) if math.gcd(x, n) == 1)
    for x in units:
        y = a * pow(x, -1, n) % n
        value_map.setdefault(x * x + y * y, []).append(x)
    return DistanceProfile(spec, value_map)


def prime_distance_count(a: int, p: int) -> int:
    """Closed form (p + (a/p)) / 2 for the distinct-distance count mod a prime."""
    if math.gcd(a, p) != 1:
        raise ValueError(f"gcd({a}, {p}) != 1")
    return (p + legendre(a, p)) // 2


@dataclass(frozen=True)
class RootShiftData:
    """Square roots of +-a mod p and the p-digit shifts of their inverses mod p**2.

    ``root`` is the root of a in (0, p/2) when a is a residue, and then
    root * (root + root_shift * p) = a (mod p**2).  ``neg_root`` plays the
    same role for -a with neg_root * (p - neg_root + neg_root_shift * p) = a
    (mod p**2).  ``mirror_shift`` is the shift governing the mirrored
    progression p - root + t*p: p - root_shift - 2, or -1 when root_shift
    is p - 1.
    """

    p: int
    a: int
    root: int | None
    neg_root: int | None
    root_shift: int | None
    neg_root_shift: int | None
    mirror_shift: int | None


def sqrt_shift_data(a: int, p: int) -> RootShiftData:
    """Compute roots of +-a mod p and their inverse shifts mod p**2."""
    if math.gcd(a, p) != 1:
        raise ValueError(f"gcd({a}, {p}) != 1")
    root = neg_root = root_shift = neg_shift = mirror = None
    if legendre(a, p) == 1:
        root, _ = sqrt_mod_prime(a, p)
        root_shift = (a - root * root) // p * pow(root, -1, p) % p
        assert root * (root + root_shift * p) % p**2 == a % p**2
        mirror = p - root_shift - 2 if root_shift <= p - 2 else -1
    if legendre(-a, p) == 1:
        neg_root, _ = sqrt_mod_prime(-a, p)
        neg_shift = (a + neg_root * neg_root - neg_root * p) // p * pow(neg_root, -1, p) % p
        assert neg_root * (p - neg_root + neg_shift * p) % p**2 == a % p**2
    return RootShiftData(p, a, root, neg_root, root_shift, neg_shift, mirror)


BRANCHES = ("root", "root_wrap", "mirror", "mirror_wrap")


def branch_eval(branch: str, t: int, data: RootShiftData) -> int:
    """Closed-form squared distance along one arithmetic progression mod p**2.

    The progression root + t*p takes the plain branch for t <= root_shift and
    the wrapped branch above it; the mirrored progression p - root + s*p does
    the same with mirror_shift.
    """
    if data.root is None:
        raise MissingRoot(f"{data.a} has no square root mod {data.p}")
    p, b, j, k = data.p, data.root, data.root_shift, data.mirror_shift
    q = p - b
    if branch == "root":
        return (b + t * p) ** 2 + (b + (j - t) * p) ** 2
    if branch == "root_wrap":
        return (b + t * p) ** 2 + (b + (p + j - t) * p) ** 2
    if branch == "mirror":
        return (q + t * p) ** 2 + (q + (k - t) * p) ** 2
    if branch == "mirror_wrap":
        return (q + t * p) ** 2 + (q + (p + k - t) * p) ** 2
    raise ValueError(f"unknown branch {branch!r}")


def _progression_values(a: int, start: int, p: int) -> set[int]:
    n = p * p
    return {distance_value(a, start + t * p, n) for t in range(p)}


def intersection_direct(a: int, p: int) -> int:
    """Size of d(C1) & d(C2) by direct evaluation on both root progressions."""
    if legendre(a, p) != 1:
        raise NoSquareRoot(f"{a} is not a residue mod {p}")
    b, _ = sqrt_mod_prime(a, p)
    return len(_progression_values(a, b, p) & _progression_values(a, p - b, p))


@dataclass
class LatticeIntersection:
    """Integer cells where the two progression branches take equal values.

    ``plain_wrap`` collects the (t, s) cells matching the plain root branch
    with the wrapped mirror branch; ``wrap_plain`` the opposite pairing.
    ``pair_count`` equals the distance-set intersection size.
    """

    p: int
    a: int
    plain_wrap: tuple[tuple[int, int], ...]
    wrap_plain: tuple[tuple[int, int], ...]
    divisor_pairs: tuple[tuple[int, int], ...] | None

    @property
    def pair_count(self) -> int:
        return len(self.plain_wrap) + len(self.wrap_plain)


def intersection_via_lattice(a: int, p: int) -> LatticeIntersection:
    """Count the distance-set intersection by scanning two integer rectangles.

    The cells of the first rectangle satisfy
    (s + t + 1 - p)(s - t + 1 + j - p) = 2b + j*p - p**2 and those of the
    second (s + t + 1 - p)(s - t + 1 + j) = 2b + j*p, where b is the root
    and j its shift; the value map is injective on each rectangle, so the
    cell count equals the intersection cardinality.
    """
    data = sqrt_shift_data(a, p)
    if data.root is None:
        raise NoSquareRoot(f"{a} is not a residue mod {p}")
    b, j, k = data.root, data.root_shift, data.mirror_shift
    rhs1 = 2 * b + j * p - p * p
    rhs2 = 2 * b + j * p
    plain_wrap = tuple(
        (t, s)
        for t in range(0, j // 2 + 1)
        for s in range(k + 1, (p + k) // 2 + 1)
        if (s + t + 1 - p) * (s - t + 1 + j - p) == rhs1
    )
    wrap_plain = tuple(
        (t, s)
        for t in range(j + 1, (p + j) // 2 + 1)
        for s in range(0, k // 2 + 1)
        if (s + t + 1 - p) * (s - t + 1 + j) == rhs2
    )
    pairs = tuple(divisor_pairs(a, p)) if j == 0 else None
    return LatticeIntersection(p, a, plain_wrap, wrap_plain, pairs)


def divisor_pairs(a: int, p: int) -> list[tuple[int, int]]:
    """Negative divisor pairs (m, n) of 2b counting the intersection when the shift is 0.

    Conditions: m*n = 2b, -p+2 <= m < 0, -p/2+1 <= n < 0, m and n of opposite
    parity, m <= n.
    """
    data = sqrt_shift_data(a, p)
    if data.root is None:
        raise NoSquareRoot(f"{a} is not a residue mod {p}")
    if data.root_shift != 0:
        raise NotApplicable(f"root shift is {data.root_shift}, not 0")
    target = 2 * data.root
    out = []
    for d in divisors(target):
        e = target // d
        if d < e:  # want |m| >= |n|, i.e. d >= e
            continue
        m, n = -d, -e
        if m < -p + 2:
            continue
        if 2 * n < 2 - p:
            continue
        if (m - n) % 2 == 0:
            continue
        out.append((m, n))
    return sorted(out)


def image_count_formula(a: int, p: int) -> int:
    """Distinct-distance count mod p**2 from the closed form minus the intersection."""
    ls = legendre(a, p)
    inter = intersection_direct(a, p) if ls == 1 else 0
    return (p * (p - 1) + 1 + ls) // 2 - inter


@dataclass
class ImageDecomposition:
    """Classification of every squared-distance value mod p**m.

    A value belongs to ``b1`` when its preimages x satisfy x*x = a (mod p),
    to ``b2`` when x*x = -a (mod p), and to the generic class otherwise.
    """

    pp: PrimePower
    a: int
    generic_count: int
    b1_values: frozenset[int]
    b2_values: frozenset[int]
    b1_preimage_count: int
    b2_preimage_count: int
    intersection_count: int | None
    classification: dict[int, str]
    preimage_counts: dict[int, int]

    @property
    def image_size(self) -> int:
        return self.generic_count + len(self.b1_values) + len(self.b2_values)


def classify_image(a: int, pp: PrimePower) -> ImageDecomposition:
    """Brute-force image decomposition over all units mod p**m (p odd)."""
    p, n = pp.p, pp.n
    if p == 2:
        raise ValueError("classification requires an odd prime")
    a_red = a % n
    if a_red % p == 0:
        raise ValueError(f"gcd({a}, {p}) != 1")
    b = sqrt_mod_prime(a, p)[0] if legendre(a, p) == 1 else None
    c = sqrt_mod_prime(-a, p)[0] if legendre(-a, p) == 1 else None
    generic: set[int] = set()
    b1_vals: set[int] = set()
    b2_vals: set[int] = set()
    d_c1: set[int] = set()
    d_c2: set[int] = set()
    b1_pre = b2_pre = 0
    preimage_counts: dict[int, int] = {}
    for x in range(1, n):
        r = x % p
        if r == 0:
            continue
        y = a_red * pow(x, -1, n) % n
        u = x * x + y * y
        preimage_counts[u] = preimage_counts.get(u, 0) + 1
        if b is not None and (r == b or r == p - b):
            b1_vals.add(u)
            b1_pre += 1
            (d_c1 if r == b else d_c2).add(u)
        elif c is not None and (r == c or r == p - c):
            b2_vals.add(u)
            b2_pre += 1
        else:
            generic.add(u)
    classification = {u: "B1" for u in b1_vals}
    classification.update({u: "B2" for u in b2_vals})
    classification.update({u: "A" for u in generic})
    inter = len(d_c1 & d_c2) if b is not None else None
    return ImageDecomposition(
        pp,
        a_red,
        len(generic),
        frozenset(b1_vals),
        frozenset(b2_vals),
        b1_pre,
        b2_pre,
        inter,
        classification,
        preimage_counts,
    )


@dataclass
class PrimePowerImageReport:
    """Bounds and identities for the image decomposition at a general p**m, m >= 2."""

    p: int
    m: int
    a: int
    leg_a: int
    leg_neg_a: int
    image_size: int
    half_phi: int
    b1_size: int
    b2_size: int
    b1_preimages: int
    b2_preimages: int
    preimage_sizes_ok: bool
    max_preimage: int
    preimage_cap: int
    cap_ok: bool
    b_lower_ok: bool
    nonres_case_ok: bool | None
    correction_half_ok: bool
    correction_quarter_ok: bool

    @property
    def ok(self) -> bool:
        checks = [self.preimage_sizes_ok, self.cap_ok, self.b_lower_ok, self.correction_half_ok]
        if self.nonres_case_ok is not None:
            checks.append(self.nonres_case_ok)
        return all(checks)


def prime_power_image_report(a: int, pp: PrimePower) -> PrimePowerImageReport:
    """Measure the image decomposition and test the stated bounds exactly.

    The correction identity is asserted with denominator 2,
    image - phi/2 = sum_i (#B_i - (1 + (+-a/p)) p**(m-1) / 2),
    which is the variant forced by the preimage counts; the denominator-4
    variant is evaluated and reported alongside (it fails whenever either
    symbol is +1).
    """
    if pp.m < 2:
        raise ValueError("general report needs m >= 2")
    p, m = pp.p, pp.m
    dec = classify_image(a, pp)
    leg_a, leg_neg = legendre(a, p), legendre(-a, p)
    half_phi = pp.phi // 2
    exp_pre = 2 * p ** (m - 1)
    pre_ok = True
    if dec.b1_values:
        pre_ok &= dec.b1_preimage_count == exp_pre
    if dec.b2_values:
        pre_ok &= dec.b2_preimage_count == exp_pre
    max_pre = max(dec.preimage_counts.values())
    cap = 4 * p ** (m // 2)
    lower = p ** ((m + 1) // 2 - 1)  # threshold for 2 * #B_i
    b_lower_ok = True
    if dec.b1_values:
        b_lower_ok &= 2 * len(dec.b1_values) >= lower
    if dec.b2_values:
        b_lower_ok &= 2 * len(dec.b2_values) >= lower
    nonres_ok = None
    if leg_a == -1 and leg_neg == -1:
        nonres_ok = dec.image_size == half_phi
    lhs = dec.image_size - half_phi
    half_terms = (
        len(dec.b1_values) - (1 + leg_a) * p ** (m - 1) // 2,
        len(dec.b2_values) - (1 + leg_neg) * p ** (m - 1) // 2,
    )
    quarter_terms = (
        len(dec.b1_values) - Fraction((1 + leg_a) * p ** (m - 1), 4),
        len(dec.b2_values) - Fraction((1 + leg_neg) * p ** (m - 1), 4),
    )
    return PrimePowerImageReport(
        p=p,
        m=m,
        a=dec.a,
        leg_a=leg_a,
        leg_neg_a=leg_neg,
        image_size=dec.image_size,
        half_phi=half_phi,
        b1_size=len(dec.b1_values),
        b2_size=len(dec.b2_values),
        b1_preimages=dec.b1_preimage_count,
        b2_preimages=dec.b2_preimage_count,
        preimage_sizes_ok=bool(pre_ok),
        max_preimage=max_pre,
        preimage_cap=cap,
        cap_ok=max_pre <= cap,
        b_lower_ok=bool(b_lower_ok),
        nonres_case_ok=nonres_ok,
        correction_half_ok=lhs == sum(half_terms),
        correction_quarter_ok=Fraction(lhs) == sum(quarter_terms),
    )


_ODD_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73)


@dataclass
class GapReport:
    """One instance of the construction driving the gap phi/2 - #image upward."""

    k: int
    a: int
    p: int
    root: int
    pair_count: int
    expected_pairs: int
    cross_check: int
    gap: int
    image_count: int

    @property
    def ok(self) -> bool:
        return self.pair_count == self.expected_pairs == self.cross_check


def gap_experiment(k: int, bound: int = DEFAULT_GAP_BOUND) -> GapReport:
    """Build a = (product of first k odd primes)**2, p the next prime above a.

    The root shift is 0 by construction, the divisor-pair count is 2**k, and
    the distance-set gap below phi(p**2)/2 equals 2**k - 1.  The squared
    modulus p**2 must stay within ``bound``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > len(_ODD_PRIMES):
        raise InfeasibleScale(f"k = {k} exceeds the supported prime list")
    root = math.prod(_ODD_PRIMES[:k])
    a = root * root
    if a * a > bound:  # p > a, so p**2 > a**2: hopeless before the prime search
        raise InfeasibleScale(f"a^2 = {a * a} already exceeds bound {bound}")
    p = next_prime(a)
    if p * p > bound:
        raise InfeasibleScale(f"p^2 = {p * p} exceeds bound {bound}")
    pairs = divisor_pairs(a, p)
    cross = intersection_direct(a, p)
    count = len(pairs)
    return GapReport(
        k=k,
        a=a,
        p=p,
        root=root,
        pair_count=count,
        expected_pairs=2**k,
        cross_check=cross,
        gap=count - 1,
        image_count=p * (p - 1) // 2 + 1 - count,
    )
