"""Mayer coefficients of the hard-core dimer gas on Z^d.

The pressure per site is ``P(z) = sum_n b_n z^n``. For a finite set of dimers
``s`` let ``Xi(s)`` be its hard-core partition polynomial (sum over pairwise
non-overlapping subsets, ``z`` per dimer). Then

    log Xi(Lambda) = sum over connected supports s in Lambda of w(s),
    w(s) = sum_{t subset of s} (-1)^{|s|-|t|} log Xi(t),

and ``w(s) = O(z^|s|)``. Counting each translation class once gives ``b_n``.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence

from .clusters import (
    MAX_ORDER,
    ClusterSupport,
    DEFAULT_CEILING,
    canonical_graph_key,
    enumerate_by_size,
    overlap_adjacency,
)
from .lattice import Dimer, origin_dimers, overlap_neighborhood, overlaps
from .series import TruncatedSeries, log1p

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MayerTable:
    d: int
    order: int
    b: tuple[Fraction, ...]  # b[0] is b_1

    def __post_init__(self):
        if len(self.b) != self.order:
            raise ValueError(f"expected {self.order} coefficients, got {len(self.b)}")

    def coefficient(self, n: int) -> Fraction:
        if not 1 <= n <= self.order:
            raise IndexError(f"b_{n} outside 1..{self.order}")
        return self.b[n - 1]

    def pressure_in_z(self) -> TruncatedSeries:
        return TruncatedSeries([0, *self.b], self.order)

    def truncate(self, order: int) -> MayerTable:
        return MayerTable(self.d, order, self.b[:order])

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "order": self.order,
            "b": [
                {"n": n, "num": str(c.numerator), "den": str(c.denominator)}
                for n, c in enumerate(self.b, start=1)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, obj: dict) -> MayerTable:
        rows = sorted(obj["b"], key=lambda r: r["n"])
        b = tuple(Fraction(int(r["num"]), int(r["den"])) for r in rows)
        return cls(int(obj["d"]), int(obj["order"]), b)

    @classmethod
    def from_json(cls, text: str) -> MayerTable:
        return cls.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# finite-cluster weights


def _subset_polynomials(adj: Sequence[int], order: int) -> list[tuple[int, ...]]:
    """Independence polynomials (truncated) of every induced subgraph, indexed by bitmask.

    ``I(t) = I(t - v) + z * I(t - N[v])`` with ``v`` the lowest vertex of ``t``.
    """
    n = len(adj)
    zero = (0,) * (order + 1)
    polys: list[tuple[int, ...]] = [zero] * (1 << n)
    polys[0] = (1,) + (0,) * order
    for mask in range(1, 1 << n):
        low = mask & -mask
        v = low.bit_length() - 1
        a = polys[mask ^ low]
        c = polys[mask & ~low & ~adj[v]]
        polys[mask] = tuple(a[k] + (c[k - 1] if k else 0) for k in range(order + 1))
    return polys


@lru_cache(maxsize=None)
def _scaled_log(poly: tuple[int, ...]) -> tuple[int, ...]:
    """``k * [z^k] log(poly)`` for a polynomial with constant term 1; always integral."""
    order = len(poly) - 1
    m = [0] * (order + 1)
    for k in range(1, order + 1):
        s = k * poly[k]
        for j in range(1, k):
            s -= m[j] * poly[k - j]
        m[k] = s
    return tuple(m)


def _scaled_weight(adj: Sequence[int], order: int) -> tuple[int, ...]:
    """``k * [z^k] w`` for the support with overlap graph ``adj``."""
    n = len(adj)
    polys = _subset_polynomials(adj, order)
    acc = [0] * (order + 1)
    for mask in range(1, 1 << n):
        lg = _scaled_log(polys[mask])
        if (n - bin(mask).count("1")) & 1:
            for k in range(order + 1):
                acc[k] -= lg[k]
        else:
            for k in range(order + 1):
                acc[k] += lg[k]
    return tuple(acc)


def _unscale(scaled: Sequence[int], order: int) -> TruncatedSeries:
    return TruncatedSeries(
        [0] + [Fraction(scaled[k], k) for k in range(1, order + 1)], order
    )


def _as_dimers(s) -> tuple[Dimer, ...]:
    return s.dimers if isinstance(s, ClusterSupport) else tuple(sorted(s))


def hard_core_polynomial(s) -> TruncatedSeries:
    """Partition polynomial of a finite dimer set under hard-core exclusion, order ``|s|``."""
    dimers = _as_dimers(s)
    n = len(dimers)
    polys = _subset_polynomials(overlap_adjacency(dimers), n)
    return TruncatedSeries(polys[(1 << n) - 1], n)


def moebius_weight(s, order: int) -> TruncatedSeries:
    """Connected part of ``log Xi`` carried by exactly the dimers of ``s``."""
    dimers = _as_dimers(s)
    if order < len(dimers):
        raise ValueError(f"order {order} below support size {len(dimers)}")
    return _unscale(_scaled_weight(overlap_adjacency(dimers), order), order)


def moebius_weight_by_definition(s, order: int) -> TruncatedSeries:
    """Same quantity through explicit series logarithms; slow, kept as a cross-check."""
    dimers = list(_as_dimers(s))
    n = len(dimers)
    total = TruncatedSeries.zero(order)
    for mask in range(1, 1 << n):
        sub = [dimers[i] for i in range(n) if mask >> i & 1]
        xi = hard_core_polynomial(sub)
        lg = log1p(TruncatedSeries([0, *xi.coeffs[1:]], order))
        total = total - lg if (n - len(sub)) & 1 else total + lg
    return total


# ---------------------------------------------------------------------------
# b_n


def _accumulate(job: tuple[list[list[int]], int, bool]) -> list[int]:
    adjs, order, use_cache = job
    cache: dict = {}
    acc = [0] * (order + 1)
    for adj in adjs:
        if use_cache:
            key = canonical_graph_key(adj)
            w = cache.get(key)
            if w is None:
                w = cache[key] = _scaled_weight(adj, order)
        else:
            w = _scaled_weight(adj, order)
        for k in range(order + 1):
            acc[k] += w[k]
    return acc


def mayer_coefficients(
    d: int,
    order: int,
    workers: int = 1,
    use_cache: bool = True,
    ceiling: int = DEFAULT_CEILING,
    supports: Iterable[ClusterSupport] | None = None,
) -> MayerTable:
    """Exact ``b_1..b_order`` of the hard-dimer gas on Z^d, per site.

    ``supports`` may be passed to reuse an enumeration; otherwise connected
    supports of size ``<= order`` are enumerated here. Partial sums are
    integers (``n * b_n`` contributions), so the reduction is exact and
    independent of how work is split.
    """
    if not 1 <= order <= MAX_ORDER:
        raise ValueError(f"order must be in 1..{MAX_ORDER}, got {order}")
    if supports is None:
        supports = [
            s for lvl in enumerate_by_size(d, order, workers=workers, ceiling=ceiling) for s in lvl
        ]
    adjs = [s.adjacency() for s in supports]
    log.info("d=%d order=%d: %d connected supports", d, order, len(adjs))

    if workers > 1 and len(adjs) > 256:
        # group isomorphic graphs together so per-worker caches stay effective
        adjs.sort(key=lambda a: (len(a), sorted(bin(x).count("1") for x in a)))
        step = -(-len(adjs) // (workers * 4))
        jobs = [(adjs[i : i + step], order, use_cache) for i in range(0, len(adjs), step)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_accumulate, jobs))
    else:
        parts = [_accumulate((adjs, order, use_cache))]

    total = [sum(p[k] for p in parts) for k in range(order + 1)]
    b = tuple(Fraction(total[n], n) for n in range(1, order + 1))
    if b[0] != d:
        raise AssertionError(f"b_1 = {b[0]} but must equal d = {d}")
    return MayerTable(d, order, b)


# ---------------------------------------------------------------------------
# oracle: Ursell tuple sum


def _ursell_weight(adj_pairs: list[tuple[int, int]], n: int) -> int:
    """Sum over connected spanning subgraphs of ``(-1)^edges``."""
    total = 0
    m = len(adj_pairs)
    for emask in range(1 << m):
        edges = [adj_pairs[i] for i in range(m) if emask >> i & 1]
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        comps = n
        for u, v in edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                comps -= 1
        if comps == 1:
            total += -1 if len(edges) & 1 else 1
    return total


def ursell_tuple_oracle(d: int, order: int) -> MayerTable:
    """``b_n`` straight from the Mayer-graph definition, for ``n <= 3``.

    Ordered tuples with repetition, first dimer fixed to one of the ``d``
    origin dimers; a repeated dimer overlaps itself (f = -1).
    """
    if not 1 <= order <= 3:
        raise ValueError(f"tuple oracle supports order 1..3, got {order}")
    b = []
    for n in range(1, order + 1):
        total = 0
        for anchor in origin_dimers(d):
            ball = {anchor}
            for _ in range(n - 1):
                ball = set().union(*(overlap_neighborhood(dm) for dm in ball))
            ball_list = sorted(ball)
            total += _tuple_sum([anchor], ball_list, n)
        b.append(Fraction(total, factorial(n)))
    return MayerTable(d, order, tuple(b))


def _tuple_sum(prefix: list[Dimer], ball: list[Dimer], n: int) -> int:
    if len(prefix) == n:
        pairs = [
            (i, j)
            for i in range(n)
            for j in range(i + 1, n)
            if overlaps(prefix[i], prefix[j])
        ]
        return _ursell_weight(pairs, n)
    return sum(_tuple_sum(prefix + [dm], ball, n) for dm in ball)
