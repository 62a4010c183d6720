"""Expansion drivers, convergents, and periodicity classification.

Rational inputs terminate; quadratic inputs are reduced to a quadratic
Hensel root and then iterated in closed form on exact (b, c) pairs, with
cycle detection by hashing.  The reported preperiod counts the general
phase prefix plus the transient Hensel steps; the period is the distance
between the first revisited state and its first occurrence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import ClassVar

from .algorithms import ALGORITHMS, choose_map
from .errors import (
    CapExceeded,
    InvalidAlgorithm,
    InvalidInput,
    MalformedExpansion,
    VerificationFailed,
)
from .hensel import (
    T1,
    CFTerm,
    HenselState,
    _classify_raw,
    _raw_term,
    _t1,
    _t2,
)
from .quadratic import (
    QuadraticElement,
    RationalElement,
    apply_T_rational,
    fractional_step,
    reduce_to_hensel,
    schneider_step,
)
from .rationals import _frac_vp, integral_part

DEFAULT_EXPAND_CAP = 10_000
DEFAULT_SCHNEIDER_CAP = 256


@dataclass(frozen=True)
class Finite:
    kind: ClassVar[str] = "finite"


@dataclass(frozen=True)
class EventuallyPeriodic:
    preperiod: int
    period: int
    kind: ClassVar[str] = "periodic"


@dataclass(frozen=True)
class Truncated:
    cap: int
    kind: ClassVar[str] = "truncated"


Status = Finite | EventuallyPeriodic | Truncated


@dataclass(frozen=True)
class CFExpansion:
    """Leading part d0 plus terms; periodic expansions store the preperiod
    block followed by exactly one period block."""

    p: int
    d0: Fraction
    terms: tuple[CFTerm, ...]
    status: Status

    def term(self, n: int) -> CFTerm:
        """1-based term access; periodic expansions unroll on demand."""
        if n < 1:
            raise InvalidInput("term indices start at 1")
        st = self.status
        if isinstance(st, EventuallyPeriodic) and n > len(self.terms):
            i = (n - 1 - st.preperiod) % st.period + st.preperiod
            return self.terms[i]
        if n > len(self.terms):
            raise InvalidInput(f"term {n} is beyond the expansion")
        return self.terms[n - 1]

    def available(self, upto: int) -> int:
        """How many of the first `upto` terms exist."""
        if isinstance(self.status, EventuallyPeriodic):
            return upto
        return min(upto, len(self.terms))

    @property
    def is_purely_periodic(self) -> bool:
        st = self.status
        return isinstance(st, EventuallyPeriodic) and st.preperiod == 0 and self.d0 == 0


@dataclass(frozen=True)
class Convergent:
    n: int
    p_n: int
    q_n: int


def convergents(e: CFExpansion, upto: int) -> list[Convergent]:
    """Convergents 0..upto via p_n = d_n p_{n-1} + t_n p^{k_n} p_{n-2}."""
    if upto < 1:
        raise InvalidInput("upto must be positive")
    count = e.available(upto)
    out = [Convergent(0, 0, 1)]
    pm1, qm1 = 1, 0
    pn, qn = 0, 1
    for n in range(1, count + 1):
        tm = e.term(n)
        w = tm.t * e.p**tm.k
        pn, pm1 = tm.d * pn + w * pm1, pn
        qn, qm1 = tm.d * qn + w * qm1, qn
        out.append(Convergent(n, pn, qn))
    return out


def _eval_terms(terms, p: int) -> Fraction:
    """Bottom-up value of t_1 p^k_1 / (d_1 + ... + t_N p^k_N / d_N)."""
    acc = Fraction(0)
    for tm in reversed(terms):
        den = tm.d + acc
        if den == 0:
            raise MalformedExpansion("zero denominator while evaluating")
        acc = Fraction(tm.t * p**tm.k) / den
    return acc


def evaluate_finite(e: CFExpansion) -> Fraction:
    """Exact value of a finite expansion; round-trips the expanded input."""
    if not isinstance(e.status, Finite):
        raise MalformedExpansion("evaluate_finite requires a finite expansion")
    return e.d0 + _eval_terms(e.terms, e.p)


def hensel_orbit(
    b: int, c: int, p: int, algorithm: str, cap: int = DEFAULT_EXPAND_CAP
) -> tuple[int, int, list[tuple[int, int]]]:
    """Detected (preperiod, period, visited states) of a state orbit."""
    if algorithm not in ALGORITHMS:
        raise InvalidAlgorithm(f"{algorithm!r} has no state dynamics")
    always_t2 = algorithm == "A"
    b_only = algorithm == "B"
    seen: dict[tuple[int, int], int] = {}
    states: list[tuple[int, int]] = []
    i = 0
    while (b, c) not in seen:
        if i >= cap:
            raise CapExceeded(f"no cycle within {cap} steps", cap=cap, last=(b, c))
        seen[b, c] = i
        states.append((b, c))
        if always_t2 or (b >= 0 and (b_only or c > 0)):
            r = b % p
            b, c = 2 * r - b, c + r * (r - b)
        else:
            s = p - b % p
            b, c = b + 2 * s, s * b + c + s * s
        i += 1
    first = seen[b, c]
    return first, i - first, states


def _pure_raw(b: int, c: int, p: int, algorithm: str) -> bool:
    if algorithm == "A":
        return True
    cls = _classify_raw(b, c, p)
    if algorithm == "B":
        return cls.in_R
    if algorithm == "C":
        return cls.in_P1 or cls.in_R1 or cls.quadrant in ("S3", "S4")
    raise InvalidAlgorithm(f"{algorithm!r} has no pure-periodicity classification")


def classify_pure_periodicity(s: HenselState, algorithm: str) -> bool:
    """Closed-form test for a purely periodic orbit.

    Algorithm A: every state.  B: the band 1 <= b <= p-1.  C: quadrants
    S3 and S4 plus the fixed-point band in S1 and the S1 states whose
    constant term is below r(b - r).
    """
    return _pure_raw(s.b, s.c, s.p, algorithm)


def _expand_rational(x: RationalElement, algorithm: str, cap: int) -> CFExpansion:
    p = x.p
    d0 = integral_part(x.value, p)
    y = x.value - d0
    terms: list[CFTerm] = []
    while y != 0:
        if len(terms) >= cap:
            raise CapExceeded(f"rational expansion exceeded {cap} terms", cap=cap, last=y)
        el = RationalElement.from_value(y, p)
        term, nxt = apply_T_rational(el, choose_map(algorithm, el.poly.b, el.poly.c))
        terms.append(term)
        y = Fraction(0) if nxt is None else nxt.value
    return CFExpansion(p, d0, tuple(terms), Finite())


def _hensel_phase(
    state: HenselState, algorithm: str, cap: int
) -> tuple[int, int, list[CFTerm]]:
    b, c, p = state.b, state.c, state.p
    seen: dict[tuple[int, int], int] = {}
    terms: list[CFTerm] = []
    i = 0
    while (b, c) not in seen:
        if i >= cap:
            raise CapExceeded(f"no cycle within {cap} steps", cap=cap, last=(b, c))
        seen[b, c] = i
        which = choose_map(algorithm, b, c)
        terms.append(_raw_term(b, c, p, which))
        b, c = _t1(b, c, p) if which == T1 else _t2(b, c, p)
        i += 1
    first = seen[b, c]
    return first, i - first, terms


def _expand_quadratic(
    x: QuadraticElement, algorithm: str, cap: int, guard: int
) -> CFExpansion:
    d0, y = fractional_step(x)
    prefix, state = reduce_to_hensel(y, algorithm, guard=guard)
    pre_h, period, hterms = _hensel_phase(state, algorithm, cap)
    terms = prefix + tuple(hterms[: pre_h + period])
    return CFExpansion(
        x.p, d0, terms, EventuallyPeriodic(len(prefix) + pre_h, period)
    )


def expand(
    x: RationalElement | QuadraticElement,
    algorithm: str,
    cap: int | None = None,
    guard: int = 8,
) -> CFExpansion:
    """Full continued fraction expansion of a rational or quadratic element.

    Rational inputs yield a finite status that round-trips exactly under
    evaluate_finite; quadratic inputs always yield an eventually periodic
    status (or CapExceeded, which indicates a bug rather than a slow orbit).
    """
    if algorithm not in ALGORITHMS:
        raise InvalidAlgorithm(f"expand does not drive algorithm {algorithm!r}")
    cap = DEFAULT_EXPAND_CAP if cap is None else cap
    if isinstance(x, RationalElement):
        return _expand_rational(x, algorithm, cap)
    if isinstance(x, QuadraticElement):
        return _expand_quadratic(x, algorithm, cap, guard)
    raise InvalidInput(f"cannot expand {type(x).__name__}")


def schneider_expand(
    x: RationalElement | QuadraticElement,
    cap: int | None = None,
    guard: int = 8,
) -> CFExpansion:
    """Unit-numerator expansion: every term is (1, k, d).

    No periodicity is detected or claimed; quadratic inputs truncate at
    the cap, rational inputs may terminate.
    """
    cap = DEFAULT_SCHNEIDER_CAP if cap is None else cap
    terms: list[CFTerm] = []
    if isinstance(x, RationalElement):
        p = x.p
        d0 = integral_part(x.value, p)
        y = x.value - d0
        while y != 0 and len(terms) < cap:
            k = _frac_vp(y, p)
            w = Fraction(p**k) / y
            d = int(integral_part(w, p))
            terms.append(CFTerm(1, k, d))
            y = w - d
        status: Status = Finite() if y == 0 else Truncated(cap)
        return CFExpansion(p, d0, tuple(terms), status)
    if isinstance(x, QuadraticElement):
        d0, cur = fractional_step(x)
        while len(terms) < cap:
            term, cur = schneider_step(cur, guard)
            terms.append(term)
        return CFExpansion(x.p, d0, tuple(terms), Truncated(cap))
    raise InvalidInput(f"cannot expand {type(x).__name__}")


@dataclass(frozen=True)
class ConvergenceRecord:
    """Outcome of one convergence check; predicted/computed of None means
    the terminal convergent matched the value exactly."""

    n: int
    predicted: int | None
    computed: int | None
    determinant_ok: bool
    denominators_unit: bool


def verify_convergence(
    x: RationalElement | QuadraticElement,
    e: CFExpansion,
    n: int,
    guard: int = 8,
) -> ConvergenceRecord:
    """Check the exact error law vp(x - p_n/q_n) = k_1 + ... + k_{n+1}.

    Also re-checks the determinant identity p_{n-1} q_n - p_n q_{n-1} =
    prod(-t_i p^k_i) and that every q_i is a p-adic unit.  Raises
    VerificationFailed on any mismatch.
    """
    if n < 1:
        raise InvalidInput("n must be positive")
    if e.available(n) < n:
        raise InvalidInput(f"expansion has fewer than {n} terms")
    p = e.p
    convs = convergents(e, n)

    prod = 1
    det_ok = True
    for i in range(1, n + 1):
        tm = e.term(i)
        prod *= -tm.t * p**tm.k
        if convs[i - 1].p_n * convs[i].q_n - convs[i].p_n * convs[i - 1].q_n != prod:
            det_ok = False
    unit_ok = all(cv.q_n % p != 0 for cv in convs)
    if not det_ok or not unit_ok:
        raise VerificationFailed(
            f"recursion identities failed at n = {n}", index=n
        )

    target = e.d0 + Fraction(convs[n].p_n, convs[n].q_n)
    terminal = isinstance(e.status, Finite) and n == len(e.terms)
    if terminal:
        if not isinstance(x, RationalElement) or x.value != target:
            raise VerificationFailed(
                f"terminal convergent does not equal the input at n = {n}", index=n
            )
        return ConvergenceRecord(n, None, None, det_ok, unit_ok)

    predicted = sum(e.term(i).k for i in range(1, n + 2))
    if isinstance(x, RationalElement):
        diff = x.value - target
    else:
        diff = x.approx_at(predicted + guard) - target
    computed = None if diff == 0 else _frac_vp(diff, p)
    if computed != predicted:
        raise VerificationFailed(
            f"error valuation {computed} != predicted {predicted} at n = {n}",
            index=n,
            predicted=predicted,
            computed=computed,
        )
    return ConvergenceRecord(n, predicted, computed, det_ok, unit_ok)
