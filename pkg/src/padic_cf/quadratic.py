"""Quadratic and rational elements of Q_p, and the steps that reduce a
general quadratic element to a quadratic Hensel root.

A quadratic element is pinned down by its integer minimal polynomial plus
a root selector: a rational approximation `approx` and a modulus exponent
`m` such that exactly one root a of the polynomial satisfies
vp(a - approx) >= m.  The selector is refinable to any precision by
Newton iteration on the polynomial itself, so every derived quantity
(digits, valuations, emitted continued fraction digits) is exact.

Precision policy: a selector is unambiguous iff m exceeds the separation
exponent vp(a - a^sigma) = vp(disc)/2 - vp(leading coefficient).  Newly
derived elements are stored with m = separation + 1 + guard (guard
defaults to 8 digits), which keeps every digit decision decisive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .algorithms import choose_map
from .errors import (
    AmbiguousSelector,
    CapExceeded,
    InvalidInput,
    NoRootInQp,
    ReduciblePolynomial,
    ZeroInput,
)
from .hensel import T1, T2, CFTerm, HenselState, is_perfect_square
from .rationals import (
    DigitVector,
    _frac_vp,
    _int_vp,
    canonical_mod,
    digits,
    integral_part,
    padic_sqrt,
    require_prime,
    unit_residue,
    unit_square_test,
)

#: Extra digits of working precision kept beyond any exactness requirement.
GUARD = 8

CASE_LABELS = ("1A", "1B", "2A", "2B", "3A", "3B")


@dataclass(frozen=True)
class MinimalPolynomial:
    """Integer polynomial aX^2 + bX + c; a = 0 encodes degree one.

    Invariants: positive leading coefficient, coprime coefficients, and
    (for degree two) no rational root.
    """

    a: int
    b: int
    c: int

    def __post_init__(self):
        lead = self.a if self.a else self.b
        if lead <= 0:
            raise InvalidInput("leading coefficient must be positive")
        if gcd(gcd(self.a, self.b), self.c) != 1:
            raise InvalidInput("coefficients must be coprime")
        if self.a and is_perfect_square(self.b * self.b - 4 * self.a * self.c):
            raise ReduciblePolynomial(
                f"{self.a}X^2 + {self.b}X + {self.c} factors over the rationals"
            )

    @classmethod
    def normalized(cls, a, b, c) -> "MinimalPolynomial":
        """Clear denominators, divide out the content, fix the sign."""
        fa, fb, fc = Fraction(a), Fraction(b), Fraction(c)
        if fa == 0 and fb == 0:
            raise InvalidInput("polynomial must have a root")
        mult = 1
        for f in (fa, fb, fc):
            mult = mult * f.denominator // gcd(mult, f.denominator)
        ia, ib, ic = (int(f * mult) for f in (fa, fb, fc))
        g = gcd(gcd(ia, ib), ic)
        ia, ib, ic = ia // g, ib // g, ic // g
        if (ia if ia else ib) < 0:
            ia, ib, ic = -ia, -ib, -ic
        return cls(ia, ib, ic)

    @property
    def degree(self) -> int:
        return 2 if self.a else 1

    def discriminant(self) -> int:
        if not self.a:
            raise InvalidInput("discriminant requires degree two")
        return self.b * self.b - 4 * self.a * self.c

    def value_at(self, x: Fraction) -> Fraction:
        return (self.a * x + self.b) * x + self.c

    def derivative_at(self, x: Fraction) -> Fraction:
        return 2 * self.a * x + self.b

    def shifted(self, s) -> "MinimalPolynomial":
        """Minimal polynomial of (root - s)."""
        s = Fraction(s)
        return MinimalPolynomial.normalized(
            self.a, 2 * self.a * s + self.b, (self.a * s + self.b) * s + self.c
        )

    def reciprocal_scaled(self, g) -> "MinimalPolynomial":
        """Minimal polynomial of g / root (degree two only)."""
        g = Fraction(g)
        if not self.a or g == 0:
            raise InvalidInput("reciprocal transform requires degree two and g != 0")
        return MinimalPolynomial.normalized(self.c, self.b * g, self.a * g * g)


def _separation(poly: MinimalPolynomial, p: int) -> int:
    """vp of the difference of the two roots: vp(disc)/2 - vp(a)."""
    dv = _int_vp(poly.discriminant(), p)
    assert dv % 2 == 0, "roots in Q_p require even discriminant valuation"
    return dv // 2 - _int_vp(poly.a, p)


def padic_roots(poly: MinimalPolynomial, p: int, prec: int) -> tuple[Fraction, Fraction]:
    """Both roots of a degree-two polynomial as canonical approximants.

    Each returned rational agrees with its root to valuation >= prec; the
    order is deterministic across precisions (it follows the canonical
    square-root branch).
    """
    a, b = poly.a, poly.b
    shift = _int_vp(2 * a, p)
    s = padic_sqrt(poly.discriminant(), p, prec + shift)
    r1 = (-b + s) / (2 * a)
    r2 = (-b - s) / (2 * a)
    return canonical_mod(r1, p, prec), canonical_mod(r2, p, prec)


@dataclass(frozen=True)
class QuadraticElement:
    """A quadratic element of Q_p: polynomial plus root selector."""

    poly: MinimalPolynomial
    p: int
    approx: Fraction
    m: int

    @property
    def separation(self) -> int:
        return _separation(self.poly, self.p)

    def approx_at(self, n: int) -> Fraction:
        """Rational approximant A with vp(root - A) >= n."""
        x, e = self.approx, self.m
        if e >= n:
            return x
        poly, p, sep = self.poly, self.p, self.separation
        assert e > sep, "selector precision must exceed the root separation"
        while e < n:
            x = x - poly.value_at(x) / poly.derivative_at(x)
            e = 2 * e - sep
            x = canonical_mod(x, p, e)
        return x

    def refined(self, n: int) -> "QuadraticElement":
        """Same element with selector precision at least n."""
        if self.m >= n:
            return self
        return QuadraticElement(self.poly, self.p, self.approx_at(n), n)

    def valuation(self) -> int:
        """Exact valuation of the selected root."""
        _, hi = newton_valuations(self.poly.a, self.poly.b, self.poly.c, self.p)
        a = self.approx_at(int(hi) + 1)
        assert a != 0
        return _frac_vp(a, self.p)

    def conjugate(self) -> "QuadraticElement":
        """The other root, selected at the same precision."""
        other = Fraction(-self.poly.b, self.poly.a) - self.approx
        return QuadraticElement(self.poly, self.p, canonical_mod(other, self.p, self.m), self.m)

    def is_hensel_root(self) -> bool:
        q = self.poly
        return (
            q.a == 1
            and q.b % self.p != 0
            and q.c % self.p == 0
            and (self.approx == 0 or _frac_vp(self.approx, self.p) >= 1)
        )

    def hensel_state(self) -> HenselState:
        if not self.is_hensel_root():
            raise InvalidInput("element is not a quadratic Hensel root")
        return HenselState(self.poly.b, self.poly.c, self.p)


@dataclass(frozen=True)
class RationalElement:
    """A rational element of Q_p with its degree-one minimal polynomial."""

    value: Fraction
    poly: MinimalPolynomial
    p: int

    @classmethod
    def from_value(cls, value, p: int) -> "RationalElement":
        require_prime(p)
        v = Fraction(value)
        return cls(v, MinimalPolynomial(0, v.denominator, -v.numerator), p)


def newton_valuations(a: int, b: int, c: int, p: int) -> tuple[Fraction, Fraction]:
    """The two root valuations of aX^2 + bX + c, in increasing order.

    When the linear coefficient dominates (2 vp(b) < vp(a) + vp(c)) the
    roots have the distinct valuations vp(b)-vp(a) and vp(c)-vp(b);
    otherwise both equal (vp(c)-vp(a))/2.
    """
    require_prime(p)
    if a == 0 or c == 0:
        raise InvalidInput("newton_valuations requires a != 0 and c != 0")
    va, vc = _int_vp(a, p), _int_vp(c, p)
    if b != 0:
        vb = _int_vp(b, p)
        if 2 * vb < va + vc:
            pair = (Fraction(vb - va), Fraction(vc - vb))
            return min(pair), max(pair)
    half = Fraction(vc - va, 2)
    return half, half


def make_quadratic(a, b, c, p: int, approx, m: int, guard: int = GUARD) -> QuadraticElement:
    """Validate and build a quadratic element from raw data.

    Normalizes the polynomial, checks irreducibility over Q and root
    existence in Q_p, and verifies that (approx, m) selects exactly one
    root.  The stored selector is refined to separation + 1 + guard.
    """
    require_prime(p)
    if m < 1:
        raise InvalidInput("modulus exponent m must be positive")
    poly = MinimalPolynomial.normalized(a, b, c)
    if poly.degree != 2:
        raise InvalidInput("a quadratic polynomial is required")
    disc = poly.discriminant()
    if not unit_square_test(disc, p):
        raise NoRootInQp(f"discriminant {disc} is not a square in Q_{p}")
    sep = _separation(poly, p)
    if m <= sep:
        raise AmbiguousSelector(
            f"modulus exponent {m} does not separate roots (separation {sep})"
        )
    approx = Fraction(approx)
    prec = max(m, sep + 1) + guard
    roots = padic_roots(poly, p, prec)
    matches = [r for r in roots if r == approx or _frac_vp(r - approx, p) >= m]
    if len(matches) != 1:
        raise AmbiguousSelector(
            f"approximation {approx} selects {len(matches)} roots at exponent {m}"
        )
    return QuadraticElement(poly, p, matches[0], prec)


def root_elements(a, b, c, p: int, guard: int = GUARD) -> tuple[QuadraticElement, QuadraticElement]:
    """Both roots of aX^2 + bX + c as selected elements (canonical order)."""
    require_prime(p)
    poly = MinimalPolynomial.normalized(a, b, c)
    if poly.degree != 2:
        raise InvalidInput("a quadratic polynomial is required")
    if not unit_square_test(poly.discriminant(), p):
        raise NoRootInQp(f"discriminant {poly.discriminant()} is not a square in Q_{p}")
    prec = max(_separation(poly, p), 0) + 1 + guard
    r1, r2 = padic_roots(poly, p, prec)
    return (
        QuadraticElement(poly, p, r1, prec),
        QuadraticElement(poly, p, r2, prec),
    )


def hensel_root_element(state: HenselState, guard: int = GUARD) -> QuadraticElement:
    """The pZ_p root of a Hensel state; zero selects it at exponent one."""
    return make_quadratic(1, state.b, state.c, state.p, Fraction(0), 1, guard=guard)


def refine_digits(x: QuadraticElement, count: int) -> DigitVector:
    """First `count` digits of the selected root, starting at its valuation."""
    v = x.valuation()
    return digits(x.approx_at(v + count), x.p, count)


def classify_case(x: QuadraticElement) -> str:
    """Label 1A..3B comparing the root with its conjugate and with 1.

    Group 1/2/3 for |a| smaller/larger/equal to |a^sigma|; suffix A when
    the element lies in pZ_p, B otherwise.
    """
    lo, hi = newton_valuations(x.poly.a, x.poly.b, x.poly.c, x.p)
    if lo == hi:
        group = "3"
        v = x.valuation()
    else:
        v = x.valuation()
        vs = int(lo) if v == int(hi) else int(hi)
        group = "1" if v > vs else "2"
    return group + ("A" if v >= 1 else "B")


def fractional_step(x: QuadraticElement) -> tuple[Fraction, QuadraticElement]:
    """Split off the digits at indices <= 0.

    Returns (d0, y) with y representing x - d0, vp(y) >= 1, and y's
    polynomial obtained by shifting x's.
    """
    if x.valuation() >= 1:
        return Fraction(0), x
    d0 = integral_part(x.approx, x.p)
    y = QuadraticElement(
        x.poly.shifted(d0), x.p, canonical_mod(x.approx - d0, x.p, x.m), x.m
    )
    return d0, y


def _mobius_step(x: QuadraticElement, t: int, k: int, guard: int) -> tuple[CFTerm, QuadraticElement]:
    # One step x -> t p^k / x - d with d the leading digit of t p^k / x.
    p = x.p
    g = t * p**k
    wpoly = x.poly.reciprocal_scaled(g)
    m_new = max(_separation(wpoly, p), 0) + 1 + guard
    a = x.approx_at(m_new + k)
    w = canonical_mod(Fraction(g) / a, p, m_new)
    assert _frac_vp(w, p) == 0
    d = unit_residue(w, p, 1)
    y = QuadraticElement(wpoly.shifted(d), p, canonical_mod(w - d, p, m_new), m_new)
    return CFTerm(t, k, d), y


def apply_T_general(x: QuadraticElement, which: str, guard: int = GUARD) -> tuple[CFTerm, QuadraticElement]:
    """Apply a basic map to a quadratic element of pZ_p.

    The numerator unit is the unit part of the constant term (negated for
    the second map); the digit d is read off the transformed element. On
    quadratic Hensel roots this agrees exactly with the closed-form state
    dynamics.
    """
    if which not in (T1, T2):
        raise InvalidInput(f"unknown map {which!r}")
    k = x.valuation()
    if k < 1:
        raise InvalidInput("the basic maps require an element of pZ_p")
    c = x.poly.c
    u = c // x.p ** _int_vp(c, x.p)
    return _mobius_step(x, u if which == T1 else -u, k, guard)


def schneider_step(x: QuadraticElement, guard: int = GUARD) -> tuple[CFTerm, QuadraticElement]:
    """One unit-numerator step x -> p^k / x - d."""
    k = x.valuation()
    if k < 1:
        raise InvalidInput("the unit-numerator step requires an element of pZ_p")
    return _mobius_step(x, 1, k, guard)


def apply_T_rational(x: RationalElement, which: str) -> tuple[CFTerm, RationalElement | None]:
    """Apply a basic map to a nonzero rational element of pZ_p.

    With minimal polynomial bX + c the transformed value is the integer
    -b (first map) or b (second map); subtracting its leading digit gives
    the successor, or None when the expansion terminates.
    """
    if which not in (T1, T2):
        raise InvalidInput(f"unknown map {which!r}")
    if x.value == 0:
        raise ZeroInput("zero is not expanded further")
    p = x.p
    k = _frac_vp(x.value, p)
    if k < 1:
        raise InvalidInput("the basic maps require an element of pZ_p")
    b, c = x.poly.b, x.poly.c
    u = c // p ** _int_vp(c, p)
    w = -b if which == T1 else b
    d = w % p
    term = CFTerm(u if which == T1 else -u, k, d)
    y = w - d
    return term, (None if y == 0 else RationalElement.from_value(y, p))


def reduce_to_hensel(
    x: QuadraticElement,
    algorithm: str,
    cap: int | None = None,
    guard: int = GUARD,
) -> tuple[tuple[CFTerm, ...], HenselState]:
    """Iterate the algorithm's map until a quadratic Hensel root is reached.

    The default cap grows with the initial separation exponent; the
    equal-valuation case is proved to leave itself but without an a
    priori bound, so exceeding the cap raises instead of looping.
    """
    if x.valuation() < 1:
        raise InvalidInput("reduction requires an element of pZ_p")
    if cap is None:
        cap = 64 + 4 * max(x.separation, 0)
    prefix: list[CFTerm] = []
    cur = x
    while not cur.is_hensel_root():
        if len(prefix) >= cap:
            raise CapExceeded(
                f"no Hensel root reached within {cap} steps", cap=cap, last=cur
            )
        which = choose_map(algorithm, cur.poly.b, cur.poly.c)
        term, cur = apply_T_general(cur, which, guard)
        prefix.append(term)
    return tuple(prefix), cur.hensel_state()
