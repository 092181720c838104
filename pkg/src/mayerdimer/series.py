"""Truncated formal power series with exact rational coefficients.

A :class:`TruncatedSeries` carries its truncation order explicitly. Binary
operations return a series whose order is the minimum of the operand orders,
so a coefficient is never reported beyond the point where it is known.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


class SeriesError(ValueError):
    """Raised for an operation outside its domain (e.g. nonzero constant term)."""


class TruncatedSeries:
    """Coefficients ``c_0 .. c_N`` of a power series known through ``x^N``."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[Scalar], order: int | None = None):
        cs = [Fraction(c) for c in coeffs]
        if order is None:
            if not cs:
                raise SeriesError("empty coefficient list needs an explicit order")
            order = len(cs) - 1
        if order < 0:
            raise SeriesError(f"order must be non-negative, got {order}")
        if len(cs) > order + 1:
            cs = cs[: order + 1]
        cs.extend([Fraction(0)] * (order + 1 - len(cs)))
        self._coeffs = tuple(cs)

    # constructors

    @classmethod
    def zero(cls, order: int) -> TruncatedSeries:
        return cls([], order)

    @classmethod
    def one(cls, order: int) -> TruncatedSeries:
        return cls([1], order)

    @classmethod
    def x(cls, order: int) -> TruncatedSeries:
        """The identity series ``x`` (just ``0`` when order is 0)."""
        return cls([0, 1], order)

    @classmethod
    def monomial(cls, k: int, order: int, coeff: Scalar = 1) -> TruncatedSeries:
        return cls([0] * k + [coeff], order)

    # accessors

    @property
    def order(self) -> int:
        return len(self._coeffs) - 1

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    def coefficient(self, k: int) -> Fraction:
        if k < 0 or k > self.order:
            raise IndexError(f"coefficient index {k} outside 0..{self.order}")
        return self._coeffs[k]

    __getitem__ = coefficient

    def valuation(self) -> int | None:
        """Index of the lowest nonzero coefficient, or None for the zero series."""
        for k, c in enumerate(self._coeffs):
            if c:
                return k
        return None

    def is_zero(self) -> bool:
        return not any(self._coeffs)

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise SeriesError(f"truncate can only lower the order ({self.order} -> {order})")
        return TruncatedSeries(self._coeffs[: order + 1], order)

    # ring operations

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return TruncatedSeries([self._coeffs[k] + other._coeffs[k] for k in range(n + 1)], n)

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries([-c for c in self._coeffs], self.order)

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        n = min(self.order, other.order)
        a, b = self._coeffs, other._coeffs
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            ai = a[i]
            if not ai:
                continue
            for j in range(n + 1 - i):
                if b[j]:
                    out[i + j] += ai * b[j]
        return TruncatedSeries(out, n)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c: Scalar) -> TruncatedSeries:
        c = Fraction(c)
        return TruncatedSeries([c * a for a in self._coeffs], self.order)

    def shift(self, k: int) -> TruncatedSeries:
        """Multiply by ``x^k``; the order is kept, so top coefficients fall off."""
        return TruncatedSeries([0] * k + list(self._coeffs), self.order)

    def __pow__(self, k: int) -> TruncatedSeries:
        if k < 0:
            raise SeriesError("negative powers are not supported")
        result = TruncatedSeries.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # comparison / display

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        return f"TruncatedSeries({[str(c) for c in self._coeffs]}, order={self.order})"

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self._coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if k and c == 1:
                terms.append(mono)
            elif k and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}" + (f"*{mono}" if mono else ""))
        body = " + ".join(terms).replace("+ -", "- ") if terms else "0"
        return f"{body} + O(x^{self.order + 1})"

    # numeric

    def evaluate(self, x):
        """Horner evaluation; ``x`` may be a Fraction, float or mpmath number."""
        acc = 0
        for c in reversed(self._coeffs):
            acc = acc * x + _lift(c, x)
        return acc


def _lift(c: Fraction, like):
    # Fractions combine exactly with Fractions; everything else gets a float-like value.
    if isinstance(like, (int, Fraction)):
        return c
    try:
        import mpmath

        if isinstance(like, mpmath.mpf):
            return mpmath.mpf(c.numerator) / c.denominator
    except ImportError:  # pragma: no cover
        pass
    return c.numerator / c.denominator


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a + b


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def scale(a: TruncatedSeries, c: Scalar) -> TruncatedSeries:
    return a.scale(c)


def coefficient(a: TruncatedSeries, k: int) -> Fraction:
    return a.coefficient(k)


def truncate(a: TruncatedSeries, order: int) -> TruncatedSeries:
    return a.truncate(order)


def compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Return ``f(g(x))``; requires ``g(0) == 0``.

    Horner's scheme in the ring of truncated series, so the result order is
    ``min(f.order, g.order)``.
    """
    if g.coefficient(0) != 0:
        raise SeriesError("compose: inner series must have zero constant term")
    n = min(f.order, g.order)
    g = g.truncate(n)
    acc = TruncatedSeries([f.coefficient(n)], n)
    for k in range(n - 1, -1, -1):
        acc = acc * g
        acc = TruncatedSeries([acc.coeffs[0] + f.coefficient(k), *acc.coeffs[1:]], n)
    return acc


def log1p(f: TruncatedSeries) -> TruncatedSeries:
    """``log(1 + f)`` for ``f(0) == 0``.

    Uses ``(log(1+f))' = f' / (1+f)``, solved coefficient by coefficient, which
    avoids forming the powers ``f^k`` of the Mercator series.
    """
    if f.coefficient(0) != 0:
        raise SeriesError("log1p: argument must have zero constant term")
    n = f.order
    a = f.coeffs
    # L = log(1+f): k L_k = k a_k - sum_{j=1}^{k-1} j L_j a_{k-j}
    out = [Fraction(0)] * (n + 1)
    for k in range(1, n + 1):
        s = k * a[k]
        for j in range(1, k):
            if out[j] and a[k - j]:
                s -= j * out[j] * a[k - j]
        out[k] = s / k
    return TruncatedSeries(out, n)


def exp_series(f: TruncatedSeries) -> TruncatedSeries:
    """``exp(f) - 1`` for ``f(0) == 0``, by summing ``f^k / k!`` directly."""
    if f.coefficient(0) != 0:
        raise SeriesError("exp_series: argument must have zero constant term")
    n = f.order
    total = TruncatedSeries.zero(n)
    term = TruncatedSeries.one(n)
    for k in range(1, n + 1):
        term = (term * f).scale(Fraction(1, k))
        total = total + term
    return total


def from_ints(coeffs: Sequence[int], order: int) -> TruncatedSeries:
    return TruncatedSeries(coeffs, order)
