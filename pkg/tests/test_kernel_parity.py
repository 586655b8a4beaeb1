"""The pure and compiled kernels must be interchangeable: same matchings,
same preclusion subsets, same order."""

import pytest

from gridmp import _kernel
from gridmp.grid import build_grid
from gridmp.preclusion import pruning_witness

GRIDS = [(3, 3), (4, 3), (2, 2, 2), (5, 3), (2,)]

pytestmark = pytest.mark.skipif(
    "accel" not in _kernel.available_backends(),
    reason="compiled kernel not built")


def _both(fn):
    out = []
    for name in ("pure", "accel"):
        previous = _kernel.use_backend(name)
        try:
            out.append(fn())
        finally:
            _kernel.use_backend(previous)
    return out


@pytest.mark.parametrize("dims", GRIDS)
def test_max_matching_parity(dims):
    g = build_grid(dims)
    a, b = _both(lambda: _kernel.max_matching_edges(g.arrays))
    assert a == b
    assert len(a) == g.order // 2


@pytest.mark.parametrize("dims", GRIDS)
def test_max_matching_parity_with_bans(dims):
    g = build_grid(dims)
    banned_e = sorted(g.star(g.vertices[0]))
    banned_v = [g.order - 1]
    a, b = _both(lambda: _kernel.max_matching_edges(
        g.arrays, banned_edges=banned_e, banned_verts=banned_v))
    assert a == b


@pytest.mark.parametrize("dims", [(3, 3), (4, 3), (2, 2, 2)])
@pytest.mark.parametrize("exhaustive", [False, True])
def test_preclusion_sets_parity(dims, exhaustive):
    g = build_grid(dims)
    base = None if exhaustive else sorted(pruning_witness(g).ids)
    for k in (1, 2, 3):
        a, b = _both(lambda: _kernel.find_preclusion_sets(
            g.arrays, range(len(g.edges)), k, g.order // 2,
            base_match=base, exhaustive=exhaustive))
        assert a == b


def test_preclusion_sets_parity_first_hit_and_bans():
    g = build_grid((3, 3))
    base = sorted(pruning_witness(g).ids)
    a, b = _both(lambda: _kernel.find_preclusion_sets(
        g.arrays, range(len(g.edges)), 3, g.order // 2,
        base_match=base, find_all=False))
    assert a == b and len(a) == 1

    # searching the vertex-deleted grid bans the vertex and its star
    from gridmp.constructions import apm_all_even
    star = g.star((0, 0))
    cand = [i for i in range(len(g.edges)) if i not in star]
    vbase = sorted(apm_all_even(g, (0, 0)).ids)
    c, d = _both(lambda: _kernel.find_preclusion_sets(
        g.arrays, cand, 2, g.order // 2, base_match=vbase,
        banned_verts=[g.index_of((0, 0))]))
    assert c == d


@pytest.mark.parametrize("name", ["pure", "accel"])
def test_empty_and_oversized_requests(name):
    g = build_grid((3, 3))
    previous = _kernel.use_backend(name)
    try:
        assert _kernel.find_preclusion_sets(g.arrays, [], 1, 4) == []
        assert _kernel.find_preclusion_sets(g.arrays, [0, 1], 3, 4) == []
        with pytest.raises(ValueError):
            _kernel.find_preclusion_sets(g.arrays, [0, 1], 1, 4, base_match=[0])
    finally:
        _kernel.use_backend(previous)


def test_backend_switching():
    start = _kernel.backend_name()
    previous = _kernel.use_backend("pure")
    assert previous == start
    assert _kernel.backend_name() == "pure"
    _kernel.use_backend(previous)
    assert _kernel.backend_name() == start
    with pytest.raises(ValueError):
        _kernel.use_backend("nope")


def test_randomized_ban_parity(rng):
    g = build_grid((4, 3, 2))
    n_edges = len(g.edges)
    for _ in range(25):
        banned = sorted(rng.sample(range(n_edges), k=rng.randrange(6)))
        a, b = _both(lambda: _kernel.max_matching_edges(g.arrays, banned_edges=banned))
        assert a == b
