"""Exact integer state machine for quadratic Hensel roots.

A quadratic Hensel root is the unique root in pZ_p of an irreducible
X^2 + bX + c with b a p-adic unit and c a nonzero multiple of p.  The
two basic maps of the expansion algorithms act on the coefficient pair
(b, c) by closed-form integer formulas, so the whole dynamics runs in
exact arbitrary-precision integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidInput, InvalidState
from .rationals import DigitVector, _int_vp, require_prime

T1 = "T1"
T2 = "T2"


def is_perfect_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def in_S(b: int, c: int, p: int) -> bool:
    """True iff (b, c) encodes a quadratic Hensel root for the prime p."""
    require_prime(p)
    return b % p != 0 and c != 0 and c % p == 0 and not is_perfect_square(b * b - 4 * c)


def residue_r(b: int, p: int) -> int:
    """The unique r in {1, ..., p-1} with r = b (mod p)."""
    require_prime(p)
    r = b % p
    if r == 0:
        raise InvalidState(f"b = {b} is divisible by p = {p}")
    return r


@dataclass(frozen=True)
class HenselState:
    """Coefficient pair (b, c) of X^2 + bX + c, validated at construction."""

    b: int
    c: int
    p: int

    def __post_init__(self):
        if not in_S(self.b, self.c, self.p):
            raise InvalidState(
                f"({self.b}, {self.c}) is not a quadratic Hensel state for p = {self.p}"
            )


@dataclass(frozen=True)
class StateClass:
    quadrant: str
    in_R: bool
    in_R1: bool
    in_R4: bool
    in_P1: bool


def _classify_raw(b: int, c: int, p: int) -> StateClass:
    quadrant = ("S1" if c > 0 else "S4") if b > 0 else ("S2" if c > 0 else "S3")
    in_r = 1 <= b <= p - 1
    in_r1 = in_r and quadrant == "S1"
    in_r4 = in_r and quadrant == "S4"
    r = b % p
    in_p1 = quadrant == "S1" and not in_r1 and c < r * (b - r)
    return StateClass(quadrant, in_r, in_r1, in_r4, in_p1)


def classify_state(s: HenselState) -> StateClass:
    """Sign quadrant plus membership in the distinguished subsets.

    in_R means 1 <= b <= p-1; in_P1 holds for quadrant S1 states outside
    R whose constant term is below r(b - r), r the reduced residue of b.
    """
    return _classify_raw(s.b, s.c, s.p)


def discriminant(s: HenselState) -> int:
    return s.b * s.b - 4 * s.c


# Closed-form actions on raw pairs.  Tuple assignment keeps the old b on
# the right-hand side, which the c-formulas rely on.


def _t1(b: int, c: int, p: int) -> tuple[int, int]:
    s = p - b % p
    return b + 2 * s, s * b + c + s * s


def _t2(b: int, c: int, p: int) -> tuple[int, int]:
    r = b % p
    return 2 * r - b, c + r * (r - b)


def _t1_inv(b: int, c: int, p: int) -> tuple[int, int]:
    r = b % p
    return b - 2 * r, c + r * (r - b)


def t1_state(s: HenselState) -> HenselState:
    """First basic map: (b, c) -> (b + 2(p-r), (p-r)b + c + (p-r)^2)."""
    nb, nc = _t1(s.b, s.c, s.p)
    return HenselState(nb, nc, s.p)


def t2_state(s: HenselState) -> HenselState:
    """Second basic map: (b, c) -> (-b + 2r, -rb + c + r^2); an involution."""
    nb, nc = _t2(s.b, s.c, s.p)
    return HenselState(nb, nc, s.p)


def t1_inverse_state(s: HenselState) -> HenselState:
    """Inverse of the first basic map: (b, c) -> (b - 2r, -rb + c + r^2)."""
    nb, nc = _t1_inv(s.b, s.c, s.p)
    return HenselState(nb, nc, s.p)


@dataclass(frozen=True)
class CFTerm:
    """One continued fraction term t * p^k / (d + ...)."""

    t: int
    k: int
    d: int

    def __post_init__(self):
        if self.t == 0:
            raise InvalidInput("term numerator t must be a unit")
        if self.k < 1:
            raise InvalidInput("term exponent k must be >= 1")
        if self.d < 1:
            raise InvalidInput("term digit d must be >= 1")


def _raw_term(b: int, c: int, p: int, which: str) -> CFTerm:
    k = _int_vp(c, p)
    u = c // p**k
    r = b % p
    if which == T1:
        return CFTerm(u, k, p - r)
    if which == T2:
        return CFTerm(-u, k, r)
    raise InvalidInput(f"unknown map {which!r}")


def emit_term(s: HenselState, which: str) -> CFTerm:
    """Term emitted when the given map is applied to the state's root.

    With u the unit part of c and k its valuation, the root a satisfies
    a = t p^k / (d + a') where a' is the root of the successor state.
    """
    return _raw_term(s.b, s.c, s.p, which)


def hensel_root_digits(s: HenselState, count: int) -> DigitVector:
    """Digits e_1 .. e_count of the root in pZ_p, by digit-wise lifting.

    The partial sum A of the returned digits satisfies
    A^2 + bA + c = 0 (mod p^(count+1)).
    """
    if count < 1:
        raise InvalidInput("count must be positive")
    p, b, c = s.p, s.b, s.c
    inv = pow(b, -1, p)  # derivative 2A + b reduces to b mod p on pZ
    part = 0
    out = []
    pk = p
    for _ in range(count):
        f = part * part + b * part + c
        assert f % pk == 0
        e = -(f // pk) * inv % p
        out.append(e)
        part += e * pk
        pk *= p
    return DigitVector(1, tuple(out), p)
