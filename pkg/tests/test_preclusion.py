import pytest

from gridmp.errors import BudgetError, SearchLimitError, ValidationError
from gridmp.grid import build_grid, parse_edge
from gridmp.matching import is_mp_set
from gridmp.preclusion import (
    SetKind,
    brute_force_mp,
    classify_set,
    default_budget,
    enumerate_optimal_sets,
    expected_optimal_sets,
    grid_family,
    parse_family,
    predicted_mp,
    special_pattern_sets,
    sweep,
    verify_grid,
    verify_vertex_deleted_mp,
)


def _stars(grid, vertices):
    return {grid.star(v) for v in vertices}


def test_predicted_mp():
    assert predicted_mp(build_grid((2, 2, 2))) == 3
    assert predicted_mp(build_grid((3, 3))) == 3
    assert predicted_mp(build_grid((5,))) == 2
    assert predicted_mp(build_grid((4,))) == 1
    assert predicted_mp(build_grid((4, 3))) == 2


def test_brute_force_mp():
    assert brute_force_mp(build_grid((4, 3))) == 2
    assert brute_force_mp(build_grid((3, 3))) == 3
    assert brute_force_mp(build_grid((2, 2, 2))) == 3


def test_brute_force_mp_unpruned_agrees():
    for dims in ((4, 3), (3, 3), (2, 2, 2)):
        g = build_grid(dims)
        assert brute_force_mp(g, prune=False) == brute_force_mp(g)


def test_brute_force_limit_reports_lower_bound():
    with pytest.raises(SearchLimitError) as info:
        brute_force_mp(build_grid((3, 3)), limit=1)
    assert info.value.lower_bound == 1


def test_enumerate_optimal_sets_examples():
    g33 = build_grid((3, 3))
    sets = enumerate_optimal_sets(g33)
    assert {s.ids for s in sets} == _stars(g33, [(1, 0), (0, 1), (2, 1), (1, 2)])
    for s in sets:
        assert is_mp_set(g33, s)

    g22 = build_grid((2, 2))
    assert {s.ids for s in enumerate_optimal_sets(g22)} == _stars(g22, g22.vertices)

    g63 = build_grid((6, 3))
    got = enumerate_optimal_sets(g63)
    assert len(got) == 7
    kinds = [classify_set(g63, s) for s in got]
    trivial = {t.vertex for t in kinds if t.kind is SetKind.TRIVIAL}
    specials = {(t.offset, t.axis) for t in kinds if t.kind is SetKind.SPECIAL_2GRID}
    assert trivial == {(0, 0), (0, 2), (5, 0), (5, 2)}
    assert specials == {(0, 0), (2, 0), (4, 0)}


def test_enumeration_is_deterministic_and_ordered():
    g = build_grid((3, 3))
    a = [sorted(s.ids) for s in enumerate_optimal_sets(g)]
    b = [sorted(s.ids) for s in enumerate_optimal_sets(g)]
    assert a == b == sorted(a)


def test_classify_set():
    g33 = build_grid((3, 3))
    tag = classify_set(g33, g33.star((1, 0)))
    assert tag.kind is SetKind.TRIVIAL and tag.vertex == (1, 0)

    g63 = build_grid((6, 3))
    pair = [parse_edge("2,0|3,0"), parse_edge("2,2|3,2")]
    tag2 = classify_set(g63, pair)
    assert tag2.kind is SetKind.SPECIAL_2GRID
    assert (tag2.offset, tag2.axis) == (2, 0)

    q3 = build_grid((2, 2, 2))
    assert classify_set(q3, q3.star((0, 0, 0))).kind is SetKind.TRIVIAL

    g36 = build_grid((3, 6))
    tpair = [g36.edge_between((0, 2), (0, 3)), g36.edge_between((2, 2), (2, 3))]
    tag3 = classify_set(g36, tpair)
    assert (tag3.kind, tag3.offset, tag3.axis) == (SetKind.SPECIAL_2GRID, 2, 1)

    p5 = build_grid((5,))
    assert classify_set(p5, [0, 3]).kind is SetKind.OTHER


def test_special_pattern_sets_counts():
    for k in (2, 4, 6, 8):
        g = build_grid((k, 3))
        assert len(special_pattern_sets(g)) == k // 2
    assert special_pattern_sets(build_grid((4, 4))) == []
    assert special_pattern_sets(build_grid((3, 3))) == []
    assert special_pattern_sets(build_grid((4,))) == []


def test_expected_optimal_sets_match_brute_force():
    for dims in ((5,), (4,), (3, 3), (5, 3)):
        g = build_grid(dims)
        want = {s.ids for s in expected_optimal_sets(g)}
        got = {s.ids for s in enumerate_optimal_sets(g)}
        assert got == want
    assert expected_optimal_sets(build_grid((4, 3))) is None


def test_verify_grid_examples():
    r = verify_grid(build_grid((3, 3)))
    assert (r.mp, r.predicted_mp, len(r.optimal_sets)) == (3, 3, 4)
    assert r.prediction_match and not r.mismatches

    r2 = verify_grid(build_grid((2, 3)))
    assert (r2.mp, len(r2.optimal_sets)) == (2, 5)
    counts = [t.kind for t in r2.classifications]
    assert counts.count(SetKind.TRIVIAL) == 4
    assert counts.count(SetKind.SPECIAL_2GRID) == 1
    assert r2.prediction_match

    r3 = verify_grid(build_grid((2, 2, 2)))
    assert r3.mp == 3 and len(r3.optimal_sets) == 8
    assert r3.super_matched and r3.prediction_match


def test_verify_vertex_deleted_mp():
    assert verify_vertex_deleted_mp(build_grid((3, 3)), (0, 0))
    assert verify_vertex_deleted_mp(build_grid((3,)), (0,))
    assert verify_vertex_deleted_mp(build_grid((3, 3, 3)), (0, 0, 0))
    with pytest.raises(ValidationError):
        verify_vertex_deleted_mp(build_grid((4, 3)), (0, 0))
    with pytest.raises(ValidationError):
        verify_vertex_deleted_mp(build_grid((3, 3)), (1, 0))


def test_budget_gate():
    g = build_grid((9, 9, 9))
    with pytest.raises(BudgetError) as info:
        brute_force_mp(g, budget=10 ** 5)
    err = info.value
    assert err.size == 2
    assert err.lower_bound == 1
    assert err.required > err.budget == 10 ** 5

    with pytest.raises(BudgetError):
        enumerate_optimal_sets(g, budget=10, mp=3)


def test_default_budget_env(monkeypatch):
    monkeypatch.delenv("GRIDMP_BUDGET", raising=False)
    assert default_budget() == 10 ** 8
    monkeypatch.setenv("GRIDMP_BUDGET", "12345")
    assert default_budget() == 12345
    monkeypatch.setenv("GRIDMP_BUDGET", "zero")
    with pytest.raises(ValidationError):
        default_budget()
    monkeypatch.setenv("GRIDMP_BUDGET", "-3")
    with pytest.raises(ValidationError):
        default_budget()


def test_sweep_orders_and_continues():
    grids = [build_grid(d) for d in ((4, 3), (9, 9, 9), (3, 3))]
    items = sweep(grids, budget=10 ** 5)
    assert [i.dims for i in items] == [(4, 3), (9, 9, 9), (3, 3)]
    assert items[0].ok and items[2].ok
    assert items[1].skipped and items[1].result is None
    assert not items[1].ok

    assert sweep([]) == []


def test_sweep_parallel_matches_serial():
    grids = [build_grid(d) for d in ((3, 3), (4, 3), (2, 2, 2), (5,))]
    serial = sweep(grids)
    parallel = sweep(grids, jobs=2)
    assert [i.dims for i in parallel] == [i.dims for i in serial]
    for a, b in zip(serial, parallel):
        assert a.result.mp == b.result.mp
        assert [s.ids for s in a.result.optimal_sets] \
            == [s.ids for s in b.result.optimal_sets]


def test_grid_family():
    assert [g.dims for g in grid_family(1, 5)] == [(2,), (3,), (4,), (5,)]
    fam = grid_family(2, 9)
    assert (3, 3) == fam[-1].dims
    assert all(g.order <= 9 and g.n <= 2 for g in fam)
    assert all(tuple(sorted(g.dims, reverse=True)) == g.dims for g in fam)

    with_extra = grid_family(2, 6, extra=[(2, 2, 2, 2)])
    assert with_extra[-1].dims == (2, 2, 2, 2)
    # no duplicate when the extra grid is already in range
    n_before = len(grid_family(2, 6))
    assert len(grid_family(2, 6, extra=[(2, 2)])) == n_before


def test_grid_family_is_exhaustive_for_small_orders():
    dims = {g.dims for g in grid_family(3, 12)}
    assert (12,) in dims and (6, 2) in dims and (4, 3) in dims
    assert (2, 2, 2) in dims and (3, 2, 2) in dims and (3, 3) in dims
    assert (2, 6) not in dims  # one representative per multiset


def test_parse_family():
    text = "# header\n6,3\n\n 3,3 # inline note\n"
    assert [g.dims for g in parse_family(text)] == [(6, 3), (3, 3)]
    with pytest.raises(ValidationError):
        parse_family("6,3\nnot dims\n")


def test_pruned_and_unpruned_sets_agree_small():
    for g in grid_family(3, 12):
        mp = brute_force_mp(g)
        assert brute_force_mp(g, prune=False) == mp
        a = [s.ids for s in enumerate_optimal_sets(g, mp=mp)]
        b = [s.ids for s in enumerate_optimal_sets(g, prune=False, mp=mp)]
        assert a == b
