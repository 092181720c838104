"""Connected dimer clusters on Z^d, one representative per translation class.

A *support* is a finite set of distinct dimers whose overlap graph (dimers as
vertices, overlapping pairs as edges) is connected. Supports are stored
translated so that their smallest occupied site is the origin.

Dump format (``write_dump``/``read_dump``), one support per line::

    <d> <size> <x1,..,xd:axis> <x1,..,xd:axis> ...

with dimers in sorted order and lines sorted, so dumps diff cleanly across runs.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, TextIO

from .lattice import (
    Dimer,
    canonical_translate,
    origin_dimers,
    overlap_neighborhood,
    overlaps,
)

log = logging.getLogger(__name__)

MAX_ORDER = 8
DEFAULT_CEILING = 5_000_000


class ResourceLimitError(RuntimeError):
    """The enumeration would exceed the configured cluster-count ceiling."""


@dataclass(frozen=True, order=True)
class ClusterSupport:
    dimers: tuple[Dimer, ...]

    @classmethod
    def from_dimers(cls, dimers: Iterable[Dimer]) -> ClusterSupport:
        return cls(tuple(sorted(canonical_translate(dimers))))

    @property
    def size(self) -> int:
        return len(self.dimers)

    @property
    def dim(self) -> int:
        return self.dimers[0].dim

    def adjacency(self) -> list[int]:
        """Overlap graph as neighbour bitmasks, vertices in sorted dimer order."""
        return overlap_adjacency(self.dimers)

    def is_connected(self) -> bool:
        return is_connected(self.adjacency())

    def is_canonical(self) -> bool:
        return canonical_translate(self.dimers) == frozenset(self.dimers) and list(
            self.dimers
        ) == sorted(self.dimers)

    def dump_line(self) -> str:
        return " ".join([str(self.dim), str(self.size), *(dm.token() for dm in self.dimers)])


def overlap_adjacency(dimers: tuple[Dimer, ...] | list[Dimer]) -> list[int]:
    n = len(dimers)
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if overlaps(dimers[i], dimers[j]):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj


def is_connected(adj: list[int]) -> bool:
    n = len(adj)
    if n == 0:
        return False
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        m = frontier
        while m:
            low = m & -m
            nxt |= adj[low.bit_length() - 1]
            m ^= low
        frontier = nxt & ~seen
        seen |= nxt
    return seen == (1 << n) - 1


# ---------------------------------------------------------------------------
# enumeration


def _grow(chunk: list[tuple[Dimer, ...]]) -> set[tuple[Dimer, ...]]:
    out: set[tuple[Dimer, ...]] = set()
    for dimers in chunk:
        present = set(dimers)
        candidates: set[Dimer] = set()
        for dm in dimers:
            candidates |= overlap_neighborhood(dm)
        candidates -= present
        for extra in candidates:
            out.add(tuple(sorted(canonical_translate(present | {extra}))))
    return out


def _check_bounds(level: Iterable[tuple[Dimer, ...]], n_max: int) -> None:
    bound = 2 * n_max
    for dimers in level:
        for dm in dimers:
            if any(abs(x) > bound for x in dm.base):
                raise AssertionError(f"support escaped the box [-{bound}, {bound}]: {dimers}")


def enumerate_by_size(
    d: int,
    n_max: int,
    workers: int = 1,
    ceiling: int = DEFAULT_CEILING,
) -> list[list[ClusterSupport]]:
    """Connected supports grouped by size: ``result[k-1]`` holds all supports of size k.

    Each level is grown from the previous one by adding one overlapping dimer,
    then deduplicated through the canonical form. The content of every level is
    independent of ``workers``; each level is returned sorted.
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if not 1 <= n_max <= MAX_ORDER:
        raise ValueError(f"n_max must be in 1..{MAX_ORDER}, got {n_max}")

    level = sorted(tuple(sorted(canonical_translate([dm]))) for dm in origin_dimers(d))
    levels = [level]
    total = len(level)
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for k in range(2, n_max + 1):
            if pool is None or len(level) < 64:
                nxt = _grow(level)
            else:
                nchunks = workers * 4
                chunks = [level[i::nchunks] for i in range(nchunks)]
                nxt = set()
                for part in pool.map(_grow, chunks):
                    nxt |= part
            total += len(nxt)
            if total > ceiling:
                raise ResourceLimitError(
                    f"cluster count {total} exceeds ceiling {ceiling} at size {k} (d={d})"
                )
            level = sorted(nxt)
            log.debug("d=%d size=%d: %d supports", d, k, len(level))
            levels.append(level)
    finally:
        if pool is not None:
            pool.shutdown()
    _check_bounds(levels[-1], n_max)
    return [[ClusterSupport(dimers) for dimers in lvl] for lvl in levels]


def enumerate_connected_supports(
    d: int, n_max: int, workers: int = 1, ceiling: int = DEFAULT_CEILING
) -> Iterator[ClusterSupport]:
    """Every translation class of connected supports of size ``<= n_max``, once each."""
    for lvl in enumerate_by_size(d, n_max, workers=workers, ceiling=ceiling):
        yield from lvl


def enumerate_supports_bruteforce(d: int, n_max: int) -> set[ClusterSupport]:
    """Reference enumerator: exhaustive subset search in a box, quotiented by translation.

    A canonical support contains a dimer based at the origin and its other
    dimers lie within ``n_max`` steps of it, with first coordinate ``>= 0``.
    Every subset of that box containing an origin dimer is tested for
    connectivity and canonicity. Exponential; intended for ``n_max <= 4``.
    """
    r = n_max
    ranges = [range(0, r + 1)] + [range(-r, r + 1)] * (d - 1)
    box = [Dimer(base, ax) for base in itertools.product(*ranges) for ax in range(1, d + 1)]
    found: set[ClusterSupport] = set()
    for anchor in origin_dimers(d):
        rest = [dm for dm in box if dm != anchor]
        for k in range(0, n_max):
            for combo in itertools.combinations(rest, k):
                dimers = (anchor, *combo)
                if not is_connected(overlap_adjacency(dimers)):
                    continue
                if canonical_translate(dimers) != frozenset(dimers):
                    continue
                found.add(ClusterSupport(tuple(sorted(dimers))))
    return found


# ---------------------------------------------------------------------------
# overlap-graph canonical form


def _refine(adj: list[int]) -> list[int]:
    """Colour refinement (1-dim Weisfeiler-Leman) with isomorphism-invariant colour names."""
    n = len(adj)
    colors = [0] * n
    while True:
        sigs = []
        for v in range(n):
            neigh = sorted(colors[u] for u in range(n) if adj[v] >> u & 1)
            sigs.append((colors[v], tuple(neigh)))
        palette = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [palette[s] for s in sigs]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def canonical_graph_key(adj: list[int]) -> tuple:
    """Canonical form of a small graph given as neighbour bitmasks.

    Vertices are first split into refinement colour classes; the key is the
    lexicographically smallest upper-triangle adjacency word over all vertex
    orders that list the classes in colour order. Isomorphic graphs get the
    same key and non-isomorphic graphs different keys.
    """
    n = len(adj)
    colors = _refine(adj)
    cells: list[list[int]] = [[] for _ in range(max(colors, default=-1) + 1)]
    for v, c in enumerate(colors):
        cells[c].append(v)
    best = None
    for perms in itertools.product(*(itertools.permutations(cell) for cell in cells)):
        order = [v for p in perms for v in p]
        word = tuple(
            (adj[order[i]] >> order[j]) & 1 for i in range(n) for j in range(i + 1, n)
        )
        if best is None or word < best:
            best = word
    return (n, tuple(len(c) for c in cells), best)


def overlap_graph_signature(s: ClusterSupport) -> tuple:
    return canonical_graph_key(s.adjacency())


# ---------------------------------------------------------------------------
# dump file


def write_dump(supports: Iterable[ClusterSupport], fh: TextIO) -> None:
    for line in sorted(s.dump_line() for s in supports):
        fh.write(line + "\n")


def read_dump(fh: TextIO) -> list[ClusterSupport]:
    out = []
    for line in fh:
        parts = line.split()
        if not parts:
            continue
        d, size = int(parts[0]), int(parts[1])
        dimers = []
        for tok in parts[2:]:
            coords, axis = tok.split(":")
            dimers.append(Dimer(tuple(int(x) for x in coords.split(",")), int(axis)))
        if len(dimers) != size or any(dm.dim != d for dm in dimers):
            raise ValueError(f"malformed dump line: {line!r}")
        out.append(ClusterSupport(tuple(sorted(dimers))))
    return out
