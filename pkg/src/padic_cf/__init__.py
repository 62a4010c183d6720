"""Exact p-adic continued fractions.

Three expansion algorithms built from two basic maps on quadratic and
rational elements of Q_p: every rational input terminates, every
quadratic input becomes eventually periodic, and the elements with
purely periodic expansions admit a closed-form description.  All
arithmetic is exact (arbitrary-precision integers and rationals).
"""

from .algorithms import ALGORITHM_A, ALGORITHM_B, ALGORITHM_C, ALGORITHMS, SCHNEIDER, choose_map
from .engine import (
    CFExpansion,
    Convergent,
    ConvergenceRecord,
    DEFAULT_EXPAND_CAP,
    DEFAULT_SCHNEIDER_CAP,
    EventuallyPeriodic,
    Finite,
    Truncated,
    classify_pure_periodicity,
    convergents,
    evaluate_finite,
    expand,
    hensel_orbit,
    schneider_expand,
    verify_convergence,
)
from .errors import (
    AmbiguousSelector,
    CapExceeded,
    InvalidAlgorithm,
    InvalidInput,
    InvalidPrime,
    InvalidState,
    MalformedExpansion,
    NoRootInQp,
    PadicCFError,
    ReduciblePolynomial,
    VerificationFailed,
    ZeroInput,
)
from .hensel import (
    CFTerm,
    HenselState,
    StateClass,
    T1,
    T2,
    classify_state,
    discriminant,
    emit_term,
    hensel_root_digits,
    in_S,
    is_perfect_square,
    residue_r,
    t1_inverse_state,
    t1_state,
    t2_state,
)
from .quadratic import (
    CASE_LABELS,
    GUARD,
    MinimalPolynomial,
    QuadraticElement,
    RationalElement,
    apply_T_general,
    apply_T_rational,
    classify_case,
    fractional_step,
    hensel_root_element,
    make_quadratic,
    newton_valuations,
    padic_roots,
    reduce_to_hensel,
    refine_digits,
    root_elements,
    schneider_step,
)
from .rationals import (
    DigitVector,
    INFINITY,
    canonical_mod,
    digits,
    fractional_part,
    integral_part,
    is_prime,
    padic_sqrt,
    unit_residue,
    unit_square_test,
    vp,
)

__all__ = [name for name in dir() if not name.startswith("_")]
