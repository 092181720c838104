"""Exact dimer counting on the L x L torus by a row transfer method.

Used as an independent check of the cluster computation: for ``L`` large
enough that no connected cluster of ``<= N`` dimers can wrap around, the
per-site logarithm of the torus matching polynomial agrees with the infinite
lattice Mayer series through ``z^N``.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from functools import lru_cache

from .mayer import MayerTable, _scaled_log

MAX_SIDE = 16


class TorusError(ValueError):
    pass


class TorusMemoryError(MemoryError):
    pass


@lru_cache(maxsize=None)
def _row_transitions(L: int, incoming: int, budget: int) -> tuple[tuple[int, int, int], ...]:
    """Ways to fill one torus row given the columns already covered from above.

    Returns ``(outgoing, dimers_placed, multiplicity)`` triples, where
    ``outgoing`` marks vertical dimers hanging down into the next row and
    ``dimers_placed`` counts horizontal plus outgoing vertical dimers. Only
    fillings with at most ``budget`` dimers are listed.
    """
    counts: dict[tuple[int, int], int] = defaultdict(int)

    def rec(c: int, used: int, out: int, placed: int) -> None:
        if placed > budget:
            return
        if c == L:
            counts[(out, placed)] += 1
            return
        bit = 1 << c
        if used & bit:
            rec(c + 1, used, out, placed)
            return
        rec(c + 1, used, out, placed)
        rec(c + 1, used | bit, out | bit, placed + 1)
        if c + 1 < L and not used & (bit << 1):
            rec(c + 2, used | bit | (bit << 1), out, placed + 1)
        elif c == L - 1 and not used & 1:
            # horizontal dimer across the periodic seam of the row
            rec(c + 1, used | bit | 1, out, placed + 1)

    rec(0, incoming, 0, 0)
    return tuple((out, placed, m) for (out, placed), m in sorted(counts.items()))


def torus_matching_polynomial(L: int, k_max: int) -> list[int]:
    """``m_k`` = number of placements of ``k`` non-overlapping dimers on the L x L torus.

    Rows are processed top to bottom; the state is the set of columns covered
    by vertical dimers from the row above. The vertical seam is closed by
    fixing the state entering row 0 and requiring the same state to leave row
    L-1, summed over all such states. Polynomials are truncated at ``k_max``.
    """
    if L > MAX_SIDE:
        raise TorusMemoryError(f"side {L} exceeds the supported maximum {MAX_SIDE}")
    if L < 4 or L % 2:
        raise TorusError(f"side must be even and >= 4, got {L}")
    if not 0 <= k_max <= L * L // 2:
        raise TorusError(f"k_max must be in 0..{L * L // 2}, got {k_max}")

    width = k_max + 1
    # state key: (seam mask, current incoming mask)
    dp: dict[tuple[int, int], list[int]] = {}
    for seam in range(1 << L):
        if bin(seam).count("1") <= k_max:
            dp[(seam, seam)] = [1] + [0] * k_max

    for row in range(L):
        last = row == L - 1
        nxt: dict[tuple[int, int], list[int]] = {}
        for (seam, incoming), poly in dp.items():
            low = next((k for k, c in enumerate(poly) if c), None)
            if low is None:
                continue
            reserve = 0 if last else bin(seam).count("1")
            budget = k_max - low - reserve
            if budget < 0:
                continue
            for out, placed, mult in _row_transitions(L, incoming, budget):
                if last and out != seam:
                    continue
                key = (seam, 0 if last else out)
                tgt = nxt.get(key)
                if tgt is None:
                    tgt = nxt[key] = [0] * width
                for k in range(low, width - placed):
                    if poly[k]:
                        tgt[k + placed] += mult * poly[k]
        dp = nxt

    total = [0] * width
    for poly in dp.values():
        for k in range(width):
            total[k] += poly[k]
    return total


def torus_mayer_oracle(L: int, order: int) -> MayerTable:
    """``b_1..b_order`` for d = 2 from ``(1/L^2) log sum_k m_k z^k`` on the L x L torus."""
    if order < 1:
        raise TorusError("order must be >= 1")
    if L < 2 * order + 2:
        raise TorusError(
            f"torus side {L} too small for order {order}: need L >= {2 * order + 2}"
        )
    m = torus_matching_polynomial(L, order)
    scaled = _scaled_log(tuple(m))
    area = L * L
    b = tuple(Fraction(scaled[n], n * area) for n in range(1, order + 1))
    return MayerTable(2, order, b)
