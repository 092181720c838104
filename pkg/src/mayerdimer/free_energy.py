"""Monomer-dimer free energy lambda_d(p) from the Mayer coefficients.

``p`` is the fraction of sites covered by dimers (twice the dimer density).
From ``p(z) = 2 sum n b_n z^n`` the activity ``z(p)`` is recovered by fixed
point iteration, the pressure is re-expanded as ``P(p) = sum b_n z(p)^n`` and

    lambda_d(p) = P(p) - (p/2) ln z(p)
                = -(p/2) ln p + (p/2) ln(2d) + [P(p) - (p/2) ln(1 + F(p))]

with ``z = p/(2 b_1) (1 + F(p))``, ``F(0) = 0`` and ``b_1 = d``. The bracket is
an ordinary power series in ``p`` (the *regular* part).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .mayer import MayerTable
from .series import SeriesError, TruncatedSeries, compose, log1p

SINGULAR_P_LN_P = Fraction(-1, 2)
SINGULAR_P_LN_2D = Fraction(1, 2)


def density_series(t: MayerTable) -> TruncatedSeries:
    """``p(z) = 2 sum_n n b_n z^n``."""
    return TruncatedSeries([0] + [2 * n * b for n, b in enumerate(t.b, start=1)], t.order)


def solve_activity(t: MayerTable) -> TruncatedSeries:
    """``z(p)`` inverting :func:`density_series` through order ``t.order``.

    Iterates ``z <- p/(2 b_1) - sum_{n>=2} (n b_n / b_1) z^n`` exactly
    ``t.order`` times from ``z = 0``; every pass fixes one more coefficient.
    """
    b1 = t.coefficient(1)
    if b1 == 0:
        raise SeriesError("b_1 must be nonzero to invert the density relation")
    n_max = t.order
    linear = TruncatedSeries.x(n_max).scale(Fraction(1, 1) / (2 * b1))
    rest = TruncatedSeries(
        [0, 0] + [-(n * b) / b1 for n, b in enumerate(t.b[1:], start=2)], n_max
    )
    z = TruncatedSeries.zero(n_max)
    for _ in range(n_max):
        z = linear + compose(rest, z)
    if compose(density_series(t), z) != TruncatedSeries.x(n_max):
        raise ArithmeticError("activity inversion failed the round-trip check")
    return z


def pressure_series(t: MayerTable, z_of_p: TruncatedSeries) -> TruncatedSeries:
    """Virial form ``P(p) = sum_n b_n z(p)^n``."""
    return compose(t.pressure_in_z(), z_of_p)


def activity_correction(t: MayerTable, z_of_p: TruncatedSeries) -> TruncatedSeries:
    """``F(p)`` with ``z = p/(2 b_1) (1 + F)``; known through order ``N - 1``."""
    n_max = z_of_p.order
    factor = 2 * t.coefficient(1)
    coeffs = [factor * z_of_p[k + 1] for k in range(n_max)]
    if coeffs[0] != 1:
        raise ArithmeticError("linear activity coefficient is not 1/(2 b_1)")
    return TruncatedSeries([0, *coeffs[1:]], n_max - 1)


def _half_p_times(f: TruncatedSeries) -> TruncatedSeries:
    # (p/2) f, raising the order by one since p f is known one order further
    return TruncatedSeries([0] + [c / 2 for c in f.coeffs], f.order + 1)


def entropy_prefactor_regular(order: int) -> TruncatedSeries:
    """Series part of ``(1/2)(-2(1-p) ln(1-p) - p)``, i.e. ``-(1-p) ln(1-p) - p/2``."""
    one_minus_p = TruncatedSeries([1, -1], order)
    log_one_minus_p = log1p(TruncatedSeries([0, -1], order))
    return -(one_minus_p * log_one_minus_p) - TruncatedSeries.x(order).scale(Fraction(1, 2))


@dataclass(frozen=True)
class LambdaExpansion:
    d: int
    order: int
    regular: TruncatedSeries
    normal_form_tail: TruncatedSeries
    activity: TruncatedSeries
    pressure: TruncatedSeries
    correction: TruncatedSeries
    ln_coefficient: int  # 2 b_1 = 2d, argument of the p ln(2d) term
    singular_p_ln_p: Fraction = SINGULAR_P_LN_P
    singular_p_ln_2d: Fraction = SINGULAR_P_LN_2D

    def to_dict(self) -> dict:
        def rows(s: TruncatedSeries):
            return [
                {"k": k, "num": str(c.numerator), "den": str(c.denominator)}
                for k, c in enumerate(s.coeffs)
            ]

        return {
            "d": self.d,
            "order": self.order,
            "singular": {
                "p_ln_p": str(self.singular_p_ln_p),
                "p_ln_2d": str(self.singular_p_ln_2d),
            },
            "regular": rows(self.regular),
            "normal_form_tail": rows(self.normal_form_tail),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def lambda_expansion(t: MayerTable) -> LambdaExpansion:
    if t.coefficient(1) != t.d:
        raise ValueError(f"b_1 = {t.coefficient(1)} differs from d = {t.d}")
    z = solve_activity(t)
    pressure = pressure_series(t, z)
    f = activity_correction(t, z)
    regular = pressure - _half_p_times(log1p(f))
    if regular[0] != 0:
        raise ArithmeticError("regular part has a constant term")
    tail = regular - entropy_prefactor_regular(t.order)
    return LambdaExpansion(
        d=t.d,
        order=t.order,
        regular=regular,
        normal_form_tail=tail,
        activity=z,
        pressure=pressure,
        correction=f,
        ln_coefficient=2 * t.d,
    )


def normal_form(e: LambdaExpansion) -> TruncatedSeries:
    """Coefficients ``a_k`` of ``lambda_d(p) - (1/2)(p ln(2d) - p ln p - 2(1-p) ln(1-p) - p)``."""
    return e.normal_form_tail


def rescaled_tail(tail: TruncatedSeries, d: int) -> list[Fraction]:
    """Tail coefficients written against ``x = p/(2d)`` with the overall factor ``d`` removed.

    For d = 2 this gives the numbers multiplying ``2 (p/4)^k``.
    """
    return [c * (2 * d) ** k / d for k, c in enumerate(tail.coeffs)]


# ---------------------------------------------------------------------------
# numerics


def _mpf(c: Fraction) -> mpmath.mpf:
    return mpmath.mpf(c.numerator) / c.denominator


def _to_mpf(p) -> mpmath.mpf:
    # strings and Fractions are converted exactly at the current working precision
    if isinstance(p, (str, int, Fraction)):
        return _mpf(Fraction(p))
    return mpmath.mpf(p)


def _check_p(p) -> mpmath.mpf:
    p = _to_mpf(p)
    if not 0 < p <= 1:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    return p


def evaluate(e: LambdaExpansion, p, digits: int = 30) -> tuple[mpmath.mpf, mpmath.mpf]:
    """``lambda_d(p)`` from the truncated expansion, and the size of the last kept term.

    The second value is only a rough proxy for the truncation error.
    """
    with mpmath.workdps(digits + 10):
        p = _check_p(p)
        value = (
            _mpf(e.singular_p_ln_p) * p * mpmath.log(p)
            + _mpf(e.singular_p_ln_2d) * p * mpmath.log(e.ln_coefficient)
            + e.regular.evaluate(p)
        )
        last = abs(_mpf(e.regular[e.order]) * p**e.order)
        return +value, +last


def evaluate_direct(e: LambdaExpansion, p, digits: int = 30) -> mpmath.mpf:
    """``P(p) - (p/2) ln z(p)`` with both truncated series summed numerically."""
    with mpmath.workdps(digits + 10):
        p = _check_p(p)
        return +(e.pressure.evaluate(p) - p / 2 * mpmath.log(e.activity.evaluate(p)))


def evaluate_split(e: LambdaExpansion, p, digits: int = 30) -> mpmath.mpf:
    """``-(p/2) ln p + (p/2) ln(2d) + P(p) - (p/2) ln(1 + F(p))``, summed numerically."""
    with mpmath.workdps(digits + 10):
        p = _check_p(p)
        one_plus_f = 1 + e.correction.evaluate(p)
        return +(
            -p / 2 * mpmath.log(p)
            + p / 2 * mpmath.log(e.ln_coefficient)
            + e.pressure.evaluate(p)
            - p / 2 * mpmath.log(one_plus_f)
        )


def d1_pressure(z) -> mpmath.mpf:
    """Exact pressure of the 1-D dimer gas, ``ln((1 + sqrt(1 + 4z)) / 2)``."""
    return mpmath.log((1 + mpmath.sqrt(1 + 4 * z)) / 2)


def d1_coverage(z) -> mpmath.mpf:
    """``p(z) = 2 z P'(z)`` for the 1-D gas."""
    s = mpmath.sqrt(1 + 4 * z)
    return 4 * z / (s * (1 + s))


def d1_closed_form_oracle(p, digits: int = 30) -> mpmath.mpf:
    """``lambda_1(p)`` by solving ``d1_coverage(z) = p`` numerically and applying
    ``P(z) - (p/2) ln z``."""
    with mpmath.workdps(digits + 10):
        p = _to_mpf(p)
        if not 0 < p < 1:
            raise ValueError(f"p must lie in (0, 1), got {p}")
        hi = mpmath.mpf(1)
        while d1_coverage(hi) < p:
            hi *= 2
            if hi > mpmath.mpf(10) ** 60:
                raise ArithmeticError("root bracket not found")
        z = mpmath.findroot(lambda z: d1_coverage(z) - p, (mpmath.mpf(0), hi), solver="anderson")
        if abs(d1_coverage(z) - p) > mpmath.mpf(10) ** (-digits):
            raise ArithmeticError(f"root-find did not converge at p = {p}")
        return +(d1_pressure(z) - p / 2 * mpmath.log(z))
