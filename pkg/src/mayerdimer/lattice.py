"""Dimers on the hypercubic lattice Z^d."""

from __future__ import annotations

from typing import Iterable, NamedTuple

Point = tuple[int, ...]


class LatticeError(ValueError):
    pass


class Dimer(NamedTuple):
    """An undirected nearest-neighbour edge ``{base, base + e_axis}``.

    ``axis`` runs over ``1..d``. Tuple ordering (base first, then axis) is the
    fixed total order used for sorting supports.
    """

    base: Point
    axis: int

    @property
    def dim(self) -> int:
        return len(self.base)

    @property
    def tip(self) -> Point:
        b = list(self.base)
        b[self.axis - 1] += 1
        return tuple(b)

    def sites(self) -> tuple[Point, Point]:
        return (self.base, self.tip)

    def translate(self, v: Point) -> Dimer:
        return Dimer(tuple(x + y for x, y in zip(self.base, v)), self.axis)

    def token(self) -> str:
        return ",".join(str(x) for x in self.base) + f":{self.axis}"


def make_dimer(base: Iterable[int], axis: int) -> Dimer:
    base = tuple(int(x) for x in base)
    if not base:
        raise LatticeError("dimension must be at least 1")
    if not 1 <= axis <= len(base):
        raise LatticeError(f"axis {axis} outside 1..{len(base)}")
    return Dimer(base, axis)


def dimer_from_sites(a: Point, b: Point) -> Dimer:
    """The dimer joining two adjacent sites, in either order."""
    if len(a) != len(b):
        raise LatticeError("dimension mismatch")
    diff = [y - x for x, y in zip(a, b)]
    nz = [i for i, v in enumerate(diff) if v]
    if len(nz) != 1 or abs(diff[nz[0]]) != 1:
        raise LatticeError(f"{a} and {b} are not nearest neighbours")
    base = a if diff[nz[0]] == 1 else b
    return Dimer(tuple(base), nz[0] + 1)


def origin_dimers(d: int) -> list[Dimer]:
    """The ``d`` dimers whose base is the origin, one per axis."""
    zero = (0,) * d
    return [Dimer(zero, k) for k in range(1, d + 1)]


def overlaps(a: Dimer, b: Dimer) -> bool:
    """True iff the two dimers share a site (a dimer overlaps itself)."""
    if len(a.base) != len(b.base):
        raise LatticeError(f"dimension mismatch: {len(a.base)} vs {len(b.base)}")
    sa = a.sites()
    return b.base in sa or b.tip in sa


def dimers_at(site: Point) -> list[Dimer]:
    """All ``2d`` dimers with ``site`` as an endpoint."""
    out = []
    for k in range(len(site)):
        out.append(Dimer(site, k + 1))
        below = list(site)
        below[k] -= 1
        out.append(Dimer(tuple(below), k + 1))
    return out


def overlap_neighborhood(a: Dimer) -> set[Dimer]:
    """Every dimer sharing a site with ``a``, ``a`` included (``4d - 1`` of them)."""
    return set(dimers_at(a.base)) | set(dimers_at(a.tip))


def occupied_sites(s: Iterable[Dimer]) -> set[Point]:
    out: set[Point] = set()
    for dm in s:
        out.update(dm.sites())
    return out


def canonical_translate(s: Iterable[Dimer]) -> frozenset[Dimer]:
    """Translate ``s`` so that its lexicographically smallest occupied site is the origin."""
    s = list(s)
    if not s:
        raise LatticeError("canonical_translate needs a non-empty set")
    # base is always lex-smaller than tip, so the minimum site is a base
    anchor = min(dm.base for dm in s)
    shift = tuple(-x for x in anchor)
    return frozenset(dm.translate(shift) for dm in s)
