"""Map selection rules shared by the expansion drivers."""

from __future__ import annotations

from .errors import InvalidAlgorithm
from .hensel import T1, T2

ALGORITHM_A = "A"
ALGORITHM_B = "B"
ALGORITHM_C = "C"
SCHNEIDER = "schneider"

#: Algorithms driven by the two basic maps (the schneider driver is separate).
ALGORITHMS = (ALGORITHM_A, ALGORITHM_B, ALGORITHM_C)


def choose_map(algorithm: str, b: int, c: int) -> str:
    """Which basic map an algorithm applies, given the current minimal
    polynomial's linear coefficient b and constant term c.

    A always uses the second map; B switches on the sign of b; C uses the
    second map only when b >= 0 and c > 0.
    """
    if algorithm == ALGORITHM_A:
        return T2
    if algorithm == ALGORITHM_B:
        return T2 if b >= 0 else T1
    if algorithm == ALGORITHM_C:
        return T2 if b >= 0 and c > 0 else T1
    raise InvalidAlgorithm(f"{algorithm!r} does not select between the basic maps")
