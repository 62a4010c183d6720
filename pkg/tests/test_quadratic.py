from fractions import Fraction

import pytest

from padic_cf import (
    AmbiguousSelector,
    CFTerm,
    HenselState,
    InvalidInput,
    MinimalPolynomial,
    NoRootInQp,
    ReduciblePolynomial,
    RationalElement,
    T1,
    T2,
    ZeroInput,
    apply_T_general,
    apply_T_rational,
    classify_case,
    emit_term,
    fractional_step,
    hensel_root_digits,
    hensel_root_element,
    in_S,
    is_perfect_square,
    make_quadratic,
    newton_valuations,
    reduce_to_hensel,
    refine_digits,
    root_elements,
    t1_state,
    t2_state,
    unit_square_test,
    vp,
)


def test_normalization():
    poly = MinimalPolynomial.normalized(-2, -6, -10)
    assert (poly.a, poly.b, poly.c) == (1, 3, 5)
    poly = MinimalPolynomial.normalized(0, Fraction(-3, 2), Fraction(5, 2))
    assert (poly.a, poly.b, poly.c) == (0, 3, -5)


def test_make_quadratic_validation():
    el = make_quadratic(1, 3, 5, 5, 15, 2)
    assert el.valuation() == 1
    with pytest.raises(ReduciblePolynomial):
        make_quadratic(1, 0, -1, 5, 0, 1)
    with pytest.raises(NoRootInQp):
        make_quadratic(1, 5, 5, 5, 0, 1)
    # approx 1 is not congruent to either root of X^2+3X+5 mod 25
    with pytest.raises(AmbiguousSelector):
        make_quadratic(1, 3, 5, 5, 1, 2)
    with pytest.raises(InvalidInput):
        make_quadratic(0, 3, 5, 5, 0, 1)


def test_selector_must_beat_separation():
    # X^2 + 2X - 97 has disc 392 = 49 * 8; both roots are -1 mod 7, so the
    # separation exponent is 1 and a selector with m = 1 cannot split them
    with pytest.raises(AmbiguousSelector):
        make_quadratic(1, 2, -97, 7, -1, 1)
    e1, _ = root_elements(1, 2, -97, 7)
    el = make_quadratic(1, 2, -97, 7, e1.approx, 2)
    assert el.separation == 1
    diff = el.approx_at(4) - e1.approx_at(4)
    assert diff == 0 or vp(diff, 7) >= 4


def test_refine_digits_examples():
    el = make_quadratic(1, 3, 5, 5, 15, 2)
    dv = refine_digits(el, 3)
    assert (dv.start_index, dv.digits) == (1, (3, 3, 1))
    conj = el.conjugate()
    dv = refine_digits(conj, 2)
    assert (dv.start_index, dv.digits) == (0, (2, 1))
    # increasing the count extends the prefix, never rewrites it
    assert refine_digits(el, 6).digits[:3] == (3, 3, 1)


def test_newton_valuations_examples():
    assert newton_valuations(1, 3, 5, 5) == (0, 1)
    assert newton_valuations(1, 5, 5, 5) == (Fraction(1, 2), Fraction(1, 2))
    assert newton_valuations(2, 3, 5, 5) == (0, 1)
    assert newton_valuations(1, 0, -7, 3) == (0, 0)


def test_classify_case_examples():
    el = make_quadratic(1, 3, 5, 5, 15, 2)
    assert classify_case(el) == "1A"
    assert classify_case(el.conjugate()) == "2B"


def test_classify_case_equal_valuations_by_search():
    # brute-force a valid instance with both root valuations equal and >= 1
    found = None
    p = 5
    for a in range(1, 4):
        for b in range(-30, 31):
            for c in range(-300, 301):
                poly_ok = (
                    a != 0
                    and c != 0
                    and not is_perfect_square(b * b - 4 * a * c)
                    and unit_square_test(b * b - 4 * a * c, p)
                )
                if not poly_ok:
                    continue
                lo, hi = newton_valuations(a, b, c, p)
                if lo == hi and lo.denominator == 1 and lo >= 1:
                    found = (a, b, c)
                    break
            if found:
                break
        if found:
            break
    assert found is not None
    e1, e2 = root_elements(*found, p)
    assert classify_case(e1) == "3A"
    assert classify_case(e2) == "3A"
    assert e1.valuation() == e2.valuation() >= 1


def test_fractional_step():
    el = make_quadratic(1, 3, 5, 5, 15, 2)
    d0, y = fractional_step(el)
    assert d0 == 0 and y is el
    conj = el.conjugate()
    d0, y = fractional_step(conj)
    assert d0 == 2
    assert (y.poly.a, y.poly.b, y.poly.c) == (1, 7, 15)
    assert y.valuation() >= 1
    # negative valuation input: d0 keeps the digit at index -1
    lo_root, unit_root = root_elements(5, 3, 1, 5)
    neg = lo_root if lo_root.valuation() < 0 else unit_root
    d0, y = fractional_step(neg)
    assert d0.denominator == 5
    assert y.valuation() >= 1


def test_fractional_step_lands_in_case_1A():
    # case 1B: unit root with a smaller conjugate
    r1, r2 = root_elements(5, 3, 1, 5)
    unit = r1 if r1.valuation() == 0 else r2
    assert classify_case(unit) == "1B"
    _, y = fractional_step(unit)
    assert classify_case(y) == "1A"
    # case 2B: unit conjugate of a Hensel root
    conj = make_quadratic(1, 3, 5, 5, 15, 2).conjugate()
    assert classify_case(conj) == "2B"
    _, y = fractional_step(conj)
    assert classify_case(y) == "1A"


def test_case_2A_reaches_1A_in_one_step():
    # slopes {1, 2}: the valuation-1 root is larger than its conjugate
    e1, e2 = root_elements(1, 5, -125, 5)
    el = e1 if e1.valuation() == 1 else e2
    assert classify_case(el) == "2A"
    for which in (T1, T2):
        _, y = apply_T_general(el, which)
        assert classify_case(y) == "1A"


def test_apply_T_general_matches_closed_form_on_hensel_roots():
    for b, c, p in ((3, 5, 5), (13, 25, 5), (-7, -25, 5), (5, 6, 3), (1, 2, 2), (3, -14, 7)):
        if not in_S(b, c, p):
            continue
        state = HenselState(b, c, p)
        el = hensel_root_element(state)
        for which, step in ((T1, t1_state), (T2, t2_state)):
            term, y = apply_T_general(el, which)
            assert term == emit_term(state, which)
            succ = step(state)
            assert (y.poly.a, y.poly.b, y.poly.c) == (1, succ.b, succ.c)
            assert y.is_hensel_root()
            assert y.hensel_state() == succ


def test_step_identity_at_finite_precision():
    # x (d + y) = t p^k along general reductions
    el = root_elements(3, 7, -25, 5)[0]
    d0, cur = fractional_step(el)
    for _ in range(4):
        k = cur.valuation()
        term, nxt = apply_T_general(cur, T1)
        m = 20
        ax = cur.approx_at(m + k)
        ay = nxt.approx_at(m)
        err = ax * (term.d + ay) - term.t * Fraction(5**term.k)
        assert err == 0 or vp(err, 5) >= m
        cur = nxt


def test_apply_T_rational_examples():
    el = RationalElement.from_value(Fraction(5, 3), 5)
    term, y = apply_T_rational(el, T2)
    assert term == CFTerm(1, 1, 3) and y is None
    term, y = apply_T_rational(el, T1)
    assert term == CFTerm(-1, 1, 2) and y.value == -5
    term, y = apply_T_rational(RationalElement.from_value(-5, 5), T2)
    assert term == CFTerm(-1, 1, 1) and y is None
    term, y = apply_T_rational(RationalElement.from_value(-5, 5), T1)
    assert term == CFTerm(1, 1, 4) and y.value == -5


def test_apply_T_rational_rejects_bad_input():
    with pytest.raises(ZeroInput):
        apply_T_rational(RationalElement.from_value(0, 5), T2)
    with pytest.raises(InvalidInput):
        apply_T_rational(RationalElement.from_value(Fraction(1, 3), 5), T2)


def test_reduce_to_hensel_lengths():
    state = HenselState(3, 5, 5)
    prefix, reached = reduce_to_hensel(hensel_root_element(state), "A")
    assert prefix == () and reached == state
    # case 1A, not a Hensel root: one step
    e1, e2 = root_elements(3, 7, -25, 5)
    el = e1 if e1.valuation() >= 1 else e2
    assert classify_case(el) == "1A"
    prefix, reached = reduce_to_hensel(el, "A")
    assert len(prefix) == 1
    # case 2A: two steps
    e1, e2 = root_elements(1, 5, -125, 5)
    el = e1 if e1.valuation() == 1 else e2
    prefix, reached = reduce_to_hensel(el, "A")
    assert len(prefix) == 2


def test_reduction_state_is_precision_independent():
    e1, e2 = root_elements(1, 5, -175, 5)
    for el in (e1, e2):
        for alg in "ABC":
            p8 = reduce_to_hensel(el, alg, guard=8)
            p16 = reduce_to_hensel(el.refined(el.m * 2), alg, guard=16)
            assert p8 == p16


def test_hensel_root_element_agrees_with_lifting():
    state = HenselState(13, 25, 5)
    el = hensel_root_element(state)
    assert refine_digits(el, 4).value() == hensel_root_digits(state, 5).value()
