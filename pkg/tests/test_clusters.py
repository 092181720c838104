import io
import itertools
import random

import pytest

from mayerdimer.clusters import (
    ClusterSupport,
    ResourceLimitError,
    canonical_graph_key,
    enumerate_by_size,
    enumerate_connected_supports,
    enumerate_supports_bruteforce,
    is_connected,
    overlap_graph_signature,
    read_dump,
    write_dump,
)
from mayerdimer.lattice import Dimer

# Size-3 class count for d = 2, taken from enumerate_supports_bruteforce(2, 3).
C3_D2 = 22


def _sizes(d, n_max):
    return [len(lvl) for lvl in enumerate_by_size(d, n_max)]


@pytest.mark.parametrize("d", [1, 2, 3])
def test_small_closed_forms(d):
    counts = _sizes(d, 2)
    assert counts == [d, d * (2 * d - 1)]


def test_size_three_regression():
    assert _sizes(2, 3)[2] == C3_D2
    brute = enumerate_supports_bruteforce(2, 3)
    assert sum(1 for s in brute if s.size == 3) == C3_D2


@pytest.mark.parametrize("d,n_max", [(1, 4), (2, 3), (2, 4), (3, 2)])
def test_matches_bruteforce(d, n_max):
    grown = list(enumerate_connected_supports(d, n_max))
    assert len(grown) == len(set(grown))
    assert set(grown) == enumerate_supports_bruteforce(d, n_max)


@pytest.mark.parametrize("d,n_max", [(2, 5), (3, 4)])
def test_supports_connected_canonical_unique(d, n_max):
    seen = set()
    for s in enumerate_connected_supports(d, n_max):
        assert s.is_connected()
        assert s.is_canonical()
        assert s not in seen
        seen.add(s)


def test_workers_do_not_change_the_set():
    serial = enumerate_by_size(2, 5, workers=1)
    parallel = enumerate_by_size(2, 5, workers=3)
    assert serial == parallel


def test_ceiling():
    with pytest.raises(ResourceLimitError):
        enumerate_by_size(2, 5, ceiling=50)


def test_bad_arguments():
    with pytest.raises(ValueError):
        enumerate_by_size(2, 9)
    with pytest.raises(ValueError):
        enumerate_by_size(0, 2)


def _support(*dimers):
    return ClusterSupport.from_dimers(dimers)


def test_signature_examples():
    chain_x = _support(Dimer((0, 0), 1), Dimer((1, 0), 1))
    chain_y = _support(Dimer((0, 0), 2), Dimer((0, 1), 2))
    assert overlap_graph_signature(chain_x) == overlap_graph_signature(chain_y)

    apart = ClusterSupport((Dimer((0, 0), 1), Dimer((3, 0), 1)))
    assert overlap_graph_signature(chain_x) != overlap_graph_signature(apart)

    chain3 = _support(Dimer((0, 0), 1), Dimer((1, 0), 1), Dimer((2, 0), 1))
    star3 = _support(Dimer((0, 0), 1), Dimer((0, 0), 2), Dimer((-1, 0), 1))
    assert overlap_graph_signature(chain3) != overlap_graph_signature(star3)


def _permute(adj, perm):
    n = len(adj)
    inv = {v: i for i, v in enumerate(perm)}
    out = [0] * n
    for v in range(n):
        for u in range(n):
            if adj[v] >> u & 1:
                out[inv[v]] |= 1 << inv[u]
    return out


def _brute_canonical(adj):
    n = len(adj)
    return min(
        tuple((adj[p[i]] >> p[j]) & 1 for i in range(n) for j in range(i + 1, n))
        for p in itertools.permutations(range(n))
    )


def test_signature_is_a_canonical_form():
    rng = random.Random(7)
    supports = [s for s in enumerate_connected_supports(2, 5) if s.size >= 4]
    keys = {}
    for s in supports:
        adj = s.adjacency()
        perm = list(range(len(adj)))
        rng.shuffle(perm)
        assert canonical_graph_key(_permute(adj, perm)) == canonical_graph_key(adj)
        keys.setdefault(canonical_graph_key(adj), set()).add((len(adj), _brute_canonical(adj)))
    # equal keys <=> isomorphic, checked against exhaustive relabelling
    brute_classes = set().union(*keys.values())
    assert all(len(v) == 1 for v in keys.values())
    assert len(brute_classes) == len(keys)


def test_is_connected():
    assert is_connected([0b10, 0b01])
    assert not is_connected([0, 0])
    assert is_connected([0])


def test_dump_round_trip():
    supports = list(enumerate_connected_supports(2, 3))
    buf = io.StringIO()
    write_dump(supports, buf)
    text = buf.getvalue()
    assert text.splitlines()[0].startswith("2 ")
    assert "0,0:1" in text
    assert set(read_dump(io.StringIO(text))) == set(supports)
    buf2 = io.StringIO()
    write_dump(reversed(supports), buf2)
    assert buf2.getvalue() == text
