"""Published values used only by the verification path.

Nothing in the computational modules imports this file; ``verify`` and the
tests compare freshly computed results against it.
"""

from __future__ import annotations

from fractions import Fraction

# Mayer coefficients b_1..b_7 of the square-lattice (d = 2) dimer gas.
MAYER_D2 = (
    Fraction(2),
    Fraction(-7),
    Fraction(116, 3),
    Fraction(-521, 2),
    Fraction(9812, 5),
    Fraction(-47644, 3),
    Fraction(945688, 7),
)

# lambda_2(p) minus the entropy prefactor, written as 2 * sum_k c_k (p/4)^k.
# Keys are the exponents. The published formula prints the k = 4 term with
# exponent 3 (two "(p/4)^3" terms); the denominators k(k-1) and the computed
# expansion both fix it at k = 4.
NORMAL_FORM_D2 = {
    2: Fraction(1, 2 * 1),
    3: Fraction(1, 3 * 2),
    4: Fraction(7, 4 * 3),
    5: Fraction(41, 5 * 4),
    6: Fraction(181, 6 * 5),
    7: Fraction(757, 7 * 6),
}
NORMAL_FORM_PRINTED_EXPONENT = {2: 2, 3: 3, 4: 3, 5: 5, 6: 6, 7: 7}


def mayer_expected(d: int) -> tuple[Fraction, ...] | None:
    return MAYER_D2 if d == 2 else None
