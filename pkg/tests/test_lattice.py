import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mayerdimer.lattice import (
    Dimer,
    LatticeError,
    canonical_translate,
    dimer_from_sites,
    make_dimer,
    overlap_neighborhood,
    overlaps,
)


def test_overlaps_examples():
    a = Dimer((0, 0), 1)
    assert overlaps(a, Dimer((0, 0), 2))
    assert not overlaps(a, Dimer((2, 0), 1))
    assert overlaps(a, a)


def test_overlaps_dimension_mismatch():
    with pytest.raises(LatticeError):
        overlaps(Dimer((0, 0), 1), Dimer((0, 0, 0), 1))


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_neighborhood_size(d):
    for axis in range(1, d + 1):
        a = Dimer((0,) * d, axis)
        nb = overlap_neighborhood(a)
        assert len(nb) == 4 * d - 1
        assert a in nb
        assert all(overlaps(a, b) for b in nb)


def test_neighborhood_is_exactly_the_overlapping_set():
    a = Dimer((0, 0), 2)
    box = [Dimer((x, y), k) for x in range(-3, 4) for y in range(-3, 4) for k in (1, 2)]
    assert {b for b in box if overlaps(a, b)} == overlap_neighborhood(a)


def test_overlaps_symmetric_reflexive():
    box = [Dimer((x, y), k) for x in range(-2, 3) for y in range(-2, 3) for k in (1, 2)]
    for a, b in itertools.product(box, repeat=2):
        assert overlaps(a, b) == overlaps(b, a)
    assert all(overlaps(a, a) for a in box)


def test_canonical_translate_examples():
    assert canonical_translate([Dimer((5, 3), 1)]) == {Dimer((0, 0), 1)}
    s = frozenset({Dimer((0, 0), 1), Dimer((1, 0), 2)})
    assert canonical_translate(s) == s
    assert canonical_translate({Dimer((1, 1), 1), Dimer((2, 1), 2)}) == {
        Dimer((0, 0), 1),
        Dimer((1, 0), 2),
    }


def test_dimer_construction():
    assert dimer_from_sites((1, 0), (0, 0)) == Dimer((0, 0), 1)
    assert Dimer((0, 0), 2).tip == (0, 1)
    with pytest.raises(LatticeError):
        make_dimer((0, 0), 3)
    with pytest.raises(LatticeError):
        dimer_from_sites((0, 0), (1, 1))


dimers2 = st.builds(
    Dimer,
    st.tuples(st.integers(-6, 6), st.integers(-6, 6)),
    st.integers(1, 2),
)


@given(st.lists(dimers2, min_size=1, max_size=6), st.tuples(st.integers(-50, 50), st.integers(-50, 50)))
def test_canonical_translate_invariant_under_translation(s, v):
    moved = [dm.translate(v) for dm in s]
    assert canonical_translate(moved) == canonical_translate(s)
    c = canonical_translate(s)
    assert canonical_translate(c) == c
    assert min(site for dm in c for site in dm.sites()) == (0, 0)
