"""Exact p-adic arithmetic on rational numbers.

Rationals are `fractions.Fraction` (already kept in lowest terms with a
positive denominator), valuations are plain ints with `INFINITY` standing
in for the valuation of zero, and digit expansions are immutable tuples
of base-p digits.  Nothing here rounds; every result is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInput, InvalidPrime

#: Valuation of zero.  Compares greater than every finite valuation.
INFINITY = math.inf

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for n < 3.3e24)."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def require_prime(p) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise InvalidPrime(f"{p!r} is not a prime number")


def _int_vp(n: int, p: int) -> int:
    # n must be nonzero
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _unit_parts(x: Fraction, p: int) -> tuple[int, int, int]:
    """Decompose nonzero x as p**v * (num/den) with num, den coprime to p."""
    num, den = x.numerator, x.denominator
    vn = _int_vp(num, p)
    vd = _int_vp(den, p)
    return vn - vd, num // p**vn, den // p**vd


def _frac_vp(x: Fraction, p: int) -> int:
    """Valuation of a nonzero rational, no primality re-check."""
    return _int_vp(x.numerator, p) - _int_vp(x.denominator, p)


def vp(x, p: int) -> int | float:
    """p-adic valuation of a rational; INFINITY for x == 0."""
    require_prime(p)
    x = Fraction(x)
    if x == 0:
        return INFINITY
    return _frac_vp(x, p)


def unit_residue(x, p: int, k: int) -> int:
    """Canonical residue mod p**k of the unit part of nonzero x."""
    x = Fraction(x)
    if x == 0:
        raise InvalidInput("zero has no unit part")
    _, num, den = _unit_parts(x, p)
    m = p**k
    return num * pow(den, -1, m) % m


def canonical_mod(x, p: int, n: int) -> Fraction:
    """Smallest representative congruent to x modulo p**n.

    The result is the rational sum of the digits of x at indices below n;
    it is used to keep approximants small after refinement steps.
    """
    x = Fraction(x)
    if x == 0:
        return x
    v = _frac_vp(x, p)
    if v >= n:
        return Fraction(0)
    rep = unit_residue(x, p, n - v)
    return Fraction(rep * p**v) if v >= 0 else Fraction(rep, p**-v)


@dataclass(frozen=True)
class DigitVector:
    """Consecutive base-p digits e_i for i = start_index, start_index+1, ...

    Canonical expansions produced by :func:`digits` begin with a nonzero
    digit; digit vectors produced by root lifting are anchored at index 1
    and may begin with zeros when the root has higher valuation.
    """

    start_index: int
    digits: tuple[int, ...]
    prime: int

    def __post_init__(self):
        if any(not 0 <= d < self.prime for d in self.digits):
            raise InvalidInput("digits must lie in 0..p-1")

    def __len__(self) -> int:
        return len(self.digits)

    def value(self) -> Fraction:
        """Exact partial sum of the represented digits."""
        acc = 0
        for d in reversed(self.digits):
            acc = acc * self.prime + d
        return Fraction(acc) * Fraction(self.prime) ** self.start_index


def digits(x, p: int, count: int) -> DigitVector:
    """First `count` base-p digits of x, starting at index vp(x).

    The partial sum agrees with x modulo p**(vp(x) + count).  For x == 0
    an all-zero vector anchored at index 0 is returned.
    """
    require_prime(p)
    if count < 1:
        raise InvalidInput("count must be positive")
    x = Fraction(x)
    if x == 0:
        return DigitVector(0, (0,) * count, p)
    v = _frac_vp(x, p)
    rep = unit_residue(x, p, count)
    out = []
    for _ in range(count):
        rep, d = divmod(rep, p)
        out.append(d)
    return DigitVector(v, tuple(out), p)


def integral_part(x, p: int) -> Fraction:
    """Sum of the digits of x at indices <= 0.

    Always a nonnegative rational < p whose denominator is a power of p;
    the remainder x - integral_part(x, p) has valuation >= 1.
    """
    require_prime(p)
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    v = _frac_vp(x, p)
    if v >= 1:
        return Fraction(0)
    return digits(x, p, 1 - v).value()


def fractional_part(x, p: int) -> Fraction:
    """x minus its integral part; a rational with valuation >= 1."""
    return Fraction(x) - integral_part(x, p)


def unit_square_test(x, p: int) -> bool:
    """True iff nonzero x is a square in Q_p.

    Even valuation and, for odd p, a quadratic-residue unit part; for
    p = 2 the unit part must be congruent to 1 mod 8.
    """
    require_prime(p)
    x = Fraction(x)
    if x == 0:
        raise InvalidInput("unit_square_test is undefined at zero")
    v, num, den = _unit_parts(x, p)
    if v % 2:
        return False
    if p == 2:
        return num * pow(den, -1, 8) % 8 == 1
    u = num * pow(den, -1, p) % p
    return pow(u, (p - 1) // 2, p) == 1


def _sqrt_mod_prime(a: int, p: int) -> int:
    """Square root of quadratic residue a mod odd prime p (smaller root)."""
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        # Tonelli-Shanks with the smallest non-residue as generator
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
        m, c = s, pow(z, q, p)
        t, r = pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t = t * c % p
            r = r * b % p
    return min(r, p - r)


def padic_sqrt(x, p: int, prec: int) -> Fraction:
    """Rational approximant of a square root of x in Q_p.

    Returns s with vp(S - s) >= prec for one square root S of x; the
    branch is canonical (pinned by the residue of the first digit), so
    calls at different precisions approximate the same root.
    """
    require_prime(p)
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    if not unit_square_test(x, p):
        raise InvalidInput(f"{x} is not a square in Q_{p}")
    v, num, den = _unit_parts(x, p)
    w = v // 2
    k = max(prec - w, 1)
    u = num * pow(den, -1, p ** (k + 1)) % p ** (k + 1)
    if p == 2:
        # digit-by-digit lift; the branch t = 1 (mod 4) is kept throughout
        t, j = 1, 3
        while j < k + 1:
            if (t * t - u) % (1 << (j + 1)):
                t += 1 << (j - 1)
            j += 1
    else:
        t = _sqrt_mod_prime(u, p)
        j = 1
        while j < k:
            j = min(2 * j, k)
            mj = p**j
            t = (t + u % mj * pow(t, -1, mj)) * pow(2, -1, mj) % mj
    return Fraction(t * p**w) if w >= 0 else Fraction(t, p**-w)
