"""Exact integer arithmetic modulo prime powers.

Everything here is plain ``int`` arithmetic (arbitrary precision), so every
result is bit-exact regardless of operand size.  No floats, no probabilistic
primality tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum


class NotInvertible(ValueError):
    """gcd(x, n) > 1, so x has no inverse mod n."""


class NotAResidue(ValueError):
    """Requested a square root of a quadratic non-residue."""


class BadLeadingCoefficient(ValueError):
    """Quadratic congruence with p dividing the leading coefficient."""


# Exhaustive root search is the trusted path below this; Tonelli-Shanks above.
_SQRT_SCAN_LIMIT = 1000


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_upto(n: int) -> list[int]:
    """All primes <= n by a plain sieve."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, v in enumerate(sieve) if v]


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    k = n + 1
    if k <= 2:
        return 2
    if k % 2 == 0:
        k += 1
    while not is_prime(k):
        k += 2
    return k


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division; n >= 1."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):  # 6k +- 1 wheel
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n: int) -> int:
    """Euler totient via trial-division factorization."""
    if n < 1:
        raise ValueError("euler_phi expects n >= 1")
    phi = 1
    for p, e in factorize(n).items():
        phi *= p ** (e - 1) * (p - 1)
    return phi


def divisors(n: int) -> list[int]:
    """Sorted positive divisors of n >= 1."""
    small, large = [], []
    f = 1
    while f * f <= n:
        if n % f == 0:
            small.append(f)
            if f != n // f:
                large.append(n // f)
        f += 1
    return small + large[::-1]


def padic_valuation(x: int, p: int) -> int:
    """Largest i with p**i dividing x; x must be nonzero."""
    if x == 0:
        raise ValueError("p-adic valuation of 0 is undefined (handle separately)")
    x = abs(x)
    i = 0
    while x % p == 0:
        x //= p
        i += 1
    return i


def mod_inverse(x: int, n: int) -> int:
    """Inverse of x mod n, in [1, n).  Raises NotInvertible if gcd(x, n) > 1."""
    if n < 2:
        raise ValueError("modulus must be >= 2")
    g = math.gcd(x, n)
    if g != 1:
        raise NotInvertible(f"gcd({x}, {n}) = {g}")
    return pow(x, -1, n)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, via Euler's criterion."""
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise ValueError(f"p = {p} is not an odd prime")
    r = pow(a, (p - 1) // 2, p)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


def _sqrt_scan(a: int, p: int) -> int:
    a %= p
    for b in range(1, p):
        if b * b % p == a:
            return b
    raise NotAResidue(f"{a} is not a square mod {p}")


def _tonelli_shanks(a: int, p: int) -> int:
    """One square root of a mod p; requires legendre(a, p) == 1."""
    a %= p
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:  # deterministic: first non-residue
        z += 1
    c = pow(z, q, p)
    r = pow(a, (q + 1) // 2, p)
    t = pow(a, q, p)
    m = s
    while t != 1:
        i, sq = 0, t
        while sq != 1:
            sq = sq * sq % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        r = r * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return r


def sqrt_mod_prime(a: int, p: int) -> tuple[int, int]:
    """Both square roots of a mod p as (b, p-b) with 0 < b < p/2.

    Uses exhaustive scan for small p (the trusted oracle) and Tonelli-Shanks
    otherwise.  Raises NotAResidue unless legendre(a, p) == 1.
    """
    if legendre(a, p) != 1:
        raise NotAResidue(f"{a % p} is not a nonzero square mod {p}")
    if p < _SQRT_SCAN_LIMIT:
        b = _sqrt_scan(a, p)
    else:
        b = _tonelli_shanks(a, p)
    b = min(b, p - b)
    return b, p - b


@dataclass(frozen=True)
class PrimePower:
    """A modulus p**m together with its totient, validated at construction."""

    p: int
    m: int
    n: int = field(init=False)
    phi: int = field(init=False)

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.m < 1:
            raise ValueError("exponent must be >= 1")
        object.__setattr__(self, "n", self.p**self.m)
        object.__setattr__(self, "phi", self.p ** (self.m - 1) * (self.p - 1))

    @classmethod
    def from_modulus(cls, n: int) -> PrimePower | None:
        """Decompose n as p**m, or None if n is not a prime power."""
        if n < 2:
            return None
        fac = factorize(n)
        if len(fac) != 1:
            return None
        (p, m), = fac.items()
        return cls(p, m)

    def __str__(self) -> str:
        return f"{self.p}^{self.m}" if self.m > 1 else str(self.p)


def hensel_lift_sqrt(b: int, d: int, pp: PrimePower) -> int:
    """Lift b with b*b = d (mod p) to the unique z = b (mod p) with z*z = d (mod p**m).

    Requires p odd and gcd(d, p) = 1 (unit discriminant, so the derivative 2z
    is invertible and the lift is unique).
    """
    p, m, n = pp.p, pp.m, pp.n
    if p == 2:
        raise ValueError("lifting mod powers of 2 is not supported")
    if d % p == 0:
        raise ValueError("discriminant must be a unit mod p")
    if (b * b - d) % p != 0:
        raise ValueError(f"{b} is not a square root of {d} mod {p}")
    z, mod = b % p, p
    while mod < n:
        mod = min(mod * mod, n)  # Newton doubling, capped at p**m
        z = (z - (z * z - d) * pow(2 * z, -1, mod)) % mod
    return z


class DiscriminantCase(Enum):
    """Structure of z*z = D (mod p**m) after the substitution z = 2Ax + C."""

    UNIT = "unit-discriminant"
    ZERO = "zero-discriminant"
    EVEN_VALUATION = "even-valuation"
    NO_SOLUTION = "no-solution"


@dataclass(frozen=True)
class CongruenceSolutions:
    """Complete solution set of a quadratic congruence mod p**m.

    ``discriminant`` is C*C - 4*A*B reduced into [0, p**m); ``valuation`` is
    its p-adic valuation, with the convention valuation = m when the reduced
    discriminant is 0.
    """

    solutions: tuple[int, ...]
    case: DiscriminantCase
    discriminant: int
    valuation: int

    @property
    def count(self) -> int:
        return len(self.solutions)


def solve_quadratic_congruence(A: int, C: int, B: int, pp: PrimePower) -> CongruenceSolutions:
    """All x in [0, p**m) with A*x*x + C*x + B = 0 (mod p**m), p odd.

    The substitution z = 2Ax + C (invertible because p is odd and p does not
    divide A) reduces to z*z = D (mod p**m) with D = C*C - 4AB, which splits
    into three cases by the valuation of D:

    * unit D: two Hensel lifts of the roots mod p, or no solution when D is
      a non-residue;
    * D = 0 (mod p**m): the z-solutions are the multiples of p**ceil(m/2);
    * p**i || D with 0 < i < m: solutions exist only for even i with D/p**i
      a residue, and then come in two families (k + l*p**(m-i)) * p**(i/2).
    """
    p, m, n = pp.p, pp.m, pp.n
    if p == 2:
        raise ValueError("solver requires an odd prime power modulus")
    if A % p == 0:
        raise BadLeadingCoefficient(f"p = {p} divides leading coefficient {A}")

    d_red = (C * C - 4 * A * B) % n
    inv2a = pow(2 * A, -1, n)

    def from_z(z: int) -> int:
        return (z - C) * inv2a % n

    if d_red == 0:
        step = p ** ((m + 1) // 2)
        zs = range(0, n, step)
        sols = sorted(from_z(z) for z in zs)
        return CongruenceSolutions(tuple(sols), DiscriminantCase.ZERO, 0, m)

    val = padic_valuation(d_red, p)
    if val == 0:
        if legendre(d_red, p) != 1:
            return CongruenceSolutions((), DiscriminantCase.NO_SOLUTION, d_red, 0)
        b0, _ = sqrt_mod_prime(d_red, p)
        z0 = hensel_lift_sqrt(b0, d_red, pp)
        sols = sorted({from_z(z0), from_z(n - z0)})
        return CongruenceSolutions(tuple(sols), DiscriminantCase.UNIT, d_red, 0)

    if val % 2 == 1:
        return CongruenceSolutions((), DiscriminantCase.NO_SOLUTION, d_red, val)
    d_unit = d_red // p**val
    if legendre(d_unit, p) != 1:
        return CongruenceSolutions((), DiscriminantCase.NO_SOLUTION, d_red, val)
    sub = PrimePower(p, m - val)
    b0, _ = sqrt_mod_prime(d_unit, p)
    k1 = hensel_lift_sqrt(b0, d_unit, sub)
    half = p ** (val // 2)
    sols = set()
    for k in (k1, sub.n - k1):
        for l in range(half):
            sols.add(from_z((k + l * sub.n) * half))
    return CongruenceSolutions(tuple(sorted(sols)), DiscriminantCase.EVEN_VALUATION, d_red, val)
