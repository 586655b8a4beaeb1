import pytest

from gridmp.constructions import apm_all_even, apm_even_sum, canonical_pm
from gridmp.errors import ValidationError
from gridmp.grid import Edge, build_grid, parse_edge
from gridmp.matching import (
    Cycle,
    FaultEdgeKind,
    FaultSet,
    Matching,
    apply_nice_cycles,
    classify_fault_edge,
    d_F,
    f4_cycles,
    has_almost_perfect_matching,
    has_perfect_matching,
    is_matching,
    is_mp_set,
    is_nice_cycle,
    max_matching,
    max_matching_size,
    symmetric_difference,
)
from gridmp.preclusion import grid_family

G33 = build_grid((3, 3))
G43 = build_grid((4, 3))
G63 = build_grid((6, 3))

# the nontrivial optimal pair of the (6,3)-grid: parallel edges in rows 0 and 2
SPECIAL_PAIR = [parse_edge("2,0|3,0"), parse_edge("2,2|3,2")]


def _e(text):
    return parse_edge(text)


def test_is_matching():
    assert is_matching(G33, [_e("0,0|1,0"), _e("2,0|2,1")])
    assert not is_matching(G33, [_e("0,0|1,0"), _e("1,0|2,0")])
    assert is_matching(G33, [])


def test_is_matching_rejects_unknown_edge_id():
    with pytest.raises(ValidationError):
        is_matching(G33, [99])


def test_matching_type_validates_disjointness():
    with pytest.raises(ValidationError):
        Matching.of(G33, [_e("0,0|1,0"), _e("1,0|2,0")])


def test_max_matching_sizes():
    m = max_matching(G43)
    assert len(m.ids) == 6 and m.is_perfect
    m2 = max_matching(G33)
    assert len(m2.ids) == 4 and m2.is_almost_perfect
    g22 = build_grid((2, 2))
    assert max_matching_size(g22, deleted=g22.star((0, 0))) == 1


def test_pm_apm_predicates():
    assert not has_almost_perfect_matching(G63, deleted=SPECIAL_PAIR)
    assert has_perfect_matching(G43)
    assert not has_perfect_matching(G33)
    assert has_almost_perfect_matching(G33)


def test_is_mp_set():
    assert is_mp_set(G63, SPECIAL_PAIR)
    assert is_mp_set(G33, G33.star((1, 0)))
    assert not is_mp_set(G33, G33.star((0, 0)))


def test_fault_degree():
    star = FaultSet(G33, G33.star((1, 0)))
    assert d_F(star, _e("1,0|1,1")) == 2
    assert d_F(FaultSet.of(G33, []), _e("1,0|1,1")) == 0
    assert d_F(FaultSet.of(G33, [_e("0,0|1,0")]), _e("2,0|2,1")) == 0


def test_f4_cycles_examples():
    cycles = f4_cycles(G33, _e("0,0|1,0"))
    assert len(cycles) == 1
    assert set(cycles[0].vertices) == {(0, 0), (1, 0), (1, 1), (0, 1)}
    assert len(f4_cycles(G33, _e("1,0|1,1"))) == 2
    q3 = build_grid((2, 2, 2))
    for e in q3.edges:
        assert len(f4_cycles(q3, e)) == 2
    with pytest.raises(ValidationError):
        f4_cycles(build_grid((5,)), Edge.between((0,), (1,)))


def test_f4_cycle_count_equals_in_layer_degree():
    for g in grid_family(3, 100):
        if g.n == 1:
            continue
        for e in g.edges:
            d, j = e.position, e.lo[e.position]
            sub, _ = g.layer_subgrid(d, j)
            local = tuple(c for i, c in enumerate(e.lo) if i != d)
            assert len(f4_cycles(g, e)) == sub.degree(local)


def test_f4_cycles_are_genuine_cycles_through_f():
    g = build_grid((3, 4, 2))
    for e in g.edges:
        for c in f4_cycles(g, e):
            assert len(c) == 4
            assert g.edge_id(e) in c.id_set
            assert len(set(c.vertices)) == 4


def test_symmetric_difference_drops_the_flipped_edge():
    m0 = canonical_pm(G43, 0)
    f = _e("0,1|1,1")
    assert f in m0
    cycle = next(c for c in f4_cycles(G43, f) if c.alternates_with(m0))
    out = symmetric_difference(m0, cycle)
    assert len(out.ids) == len(m0.ids)
    assert f not in out
    assert out.covered == m0.covered


def test_symmetric_difference_requires_alternation():
    g22 = build_grid((2, 2))
    cycle = Cycle.from_vertices(g22, [(0, 0), (1, 0), (1, 1), (0, 1)])
    lonely = Matching.of(build_grid((3, 3)), [])
    vertical = Matching.of(g22, [_e("0,0|0,1")])
    with pytest.raises(ValidationError):
        symmetric_difference(vertical, cycle)  # one cycle edge in M, rest not alternating
    horizontal = Matching.of(g22, [_e("0,0|1,0"), _e("0,1|1,1")])
    flipped = symmetric_difference(horizontal, cycle)
    assert flipped.ids == frozenset(g22.edge_id(e) for e in (_e("0,0|0,1"), _e("1,0|1,1")))


def test_symmetric_difference_rejects_disjoint_matching():
    m = Matching.of(G43, [_e("2,0|3,0")])
    cycle = Cycle.from_vertices(G43, [(0, 0), (1, 0), (1, 1), (0, 1)])
    with pytest.raises(ValidationError):
        symmetric_difference(m, cycle)


def test_is_nice_cycle():
    m0 = canonical_pm(G63, 0)
    faults = FaultSet.of(G63, SPECIAL_PAIR)
    f = SPECIAL_PAIR[0]
    cycle = next(c for c in f4_cycles(G63, f) if is_nice_cycle(faults, m0, c))
    assert cycle.alternates_with(m0)

    # an F-edge outside M on the cycle breaks niceness
    extra = next(i for i in cycle.id_set
                 if i not in m0.ids and i != G63.edge_id(f))
    poisoned = FaultSet(G63, faults.ids | {extra})
    assert not is_nice_cycle(poisoned, m0, cycle)

    # no overlap at all also fails
    far = FaultSet.of(G63, [_e("4,0|5,0")])
    assert not is_nice_cycle(far, m0, cycle)


def _nice_f4(grid, faults, m, f):
    return next(c for c in f4_cycles(grid, f) if is_nice_cycle(faults, m, c))


def test_apply_nice_cycles_two_disjoint_cycles():
    m0 = canonical_pm(G63, 0)
    f1, f2 = _e("0,0|1,0"), _e("2,2|3,2")
    faults = FaultSet.of(G63, [f1, f2])
    c1 = _nice_f4(G63, faults, m0, f1)
    c2 = _nice_f4(G63, faults, m0, f2)
    assert not (c1.id_set & c2.id_set)
    out = apply_nice_cycles(m0, [c1, c2], faults)
    assert out.is_perfect
    assert not (out.ids & faults.ids)
    assert len(out.ids) == len(m0.ids)


def test_apply_one_cycle_through_both_faults():
    m0 = canonical_pm(G63, 0)
    f1, f2 = _e("2,0|3,0"), _e("2,1|3,1")
    faults = FaultSet.of(G63, [f1, f2])
    cycle = Cycle.from_vertices(G63, [(2, 0), (3, 0), (3, 1), (2, 1)])
    assert is_nice_cycle(faults, m0, cycle)
    out = apply_nice_cycles(m0, [cycle], faults)
    assert out.is_perfect and not (out.ids & faults.ids)
    # the flip removes exactly the cycle's fault edges from the matching
    assert len(symmetric_difference(m0, cycle).ids & faults.ids) \
        == len(m0.ids & faults.ids) - len(cycle.id_set & faults.ids)


def test_apply_nice_cycles_rejects_bad_inputs():
    m0 = canonical_pm(G63, 0)
    f1 = _e("2,0|3,0")
    faults = FaultSet.of(G63, [f1])
    c1 = _nice_f4(G63, faults, m0, f1)

    with pytest.raises(ValidationError, match="cover"):
        apply_nice_cycles(m0, [], faults)

    with pytest.raises(ValidationError, match="cycles 0 and 1"):
        apply_nice_cycles(m0, [c1, c1], faults)

    off_fault = _e("0,0|1,0")
    not_nice = _nice_f4(G63, FaultSet.of(G63, [off_fault]), m0, off_fault)
    with pytest.raises(ValidationError, match="cycle 0 is not"):
        apply_nice_cycles(m0, [not_nice], faults)


def test_apply_nice_cycles_preserves_almost_perfect():
    m = apm_all_even(G33, (2, 2))
    f = G33.edge_at(min(m.ids))
    faults = FaultSet.of(G33, [f])
    c = _nice_f4(G33, faults, m, f)
    out = apply_nice_cycles(m, [c], faults)
    assert out.is_almost_perfect
    assert out.uncovered() == m.uncovered()


def test_classify_fault_edge_nice_cases():
    m0 = canonical_pm(G43, 0)
    f = _e("0,1|1,1")
    verdict = classify_fault_edge(G43, FaultSet.of(G43, [f]), m0, f)
    assert verdict.kind is FaultEdgeKind.NICE_FAULT
    assert is_nice_cycle(FaultSet.of(G43, [f]), m0, verdict.witness)

    g22 = build_grid((2, 2))
    m = Matching.of(g22, [_e("0,0|1,0"), _e("0,1|1,1")])
    faults = FaultSet(g22, m.ids)
    v = classify_fault_edge(g22, faults, m, _e("0,0|1,0"))
    assert v.kind is FaultEdgeKind.NICE_FAULT
    assert len(v.witness) == 4


def test_classify_fault_edge_bad_at_limit_four():
    f = _e("0,0|1,0")
    m = Matching.of(G33, [f, _e("0,1|0,2"), _e("1,1|2,1"), _e("1,2|2,2")])
    # the lone 4-cycle through f carries a non-matching fault edge
    faults = FaultSet.of(G33, [f, _e("1,0|1,1")])
    verdict = classify_fault_edge(G33, faults, m, f, max_cycle_length=4)
    assert verdict.kind is FaultEdgeKind.BAD_FAULT
    assert verdict.witness is None
    assert verdict.length_limit == 4


def test_classify_fault_edge_longer_limit_can_rescue():
    m0 = canonical_pm(G63, 0)
    f = _e("2,0|3,0")
    # block every 4-cycle through f with non-matching faults
    faults = FaultSet.of(G63, [f, _e("3,0|3,1"), _e("2,0|2,1")])
    short = classify_fault_edge(G63, faults, m0, f, max_cycle_length=4)
    assert short.kind is FaultEdgeKind.BAD_FAULT
    # the shortest detour crosses the far columns and comes back along row 0
    longer = classify_fault_edge(G63, faults, m0, f, max_cycle_length=12)
    assert longer.kind is FaultEdgeKind.NICE_FAULT
    assert len(longer.witness) == 12
    assert is_nice_cycle(faults, m0, longer.witness)


def test_classify_fault_edge_input_validation():
    m0 = canonical_pm(G43, 0)
    f = _e("0,1|1,1")
    with pytest.raises(ValidationError):
        classify_fault_edge(G43, FaultSet.of(G43, []), m0, f)
    with pytest.raises(ValidationError):
        classify_fault_edge(G43, FaultSet.of(G43, [f]), m0, f, max_cycle_length=3)
    off = _e("1,1|2,1")
    assert off not in m0
    with pytest.raises(ValidationError):
        classify_fault_edge(G43, FaultSet.of(G43, [off]), m0, off)


def test_oracle_dominates_constructions():
    for g in grid_family(3, 27):
        best = max_matching(g)
        assert is_matching(g, best.ids)
        if g.order % 2 == 0:
            assert best.is_perfect
        else:
            assert best.is_almost_perfect
            built = apm_even_sum(g, (0,) * g.n)
            assert len(best.ids) == len(built.ids)


def test_nice_cycle_flip_properties_randomized(rng):
    pool = [build_grid(d) for d in ((3, 3), (4, 3), (6, 3), (2, 2, 2), (3, 3, 2))]
    done = 0
    while done < 60:
        g = rng.choice(pool)
        if g.order % 2 == 0:
            d = rng.choice([i for i, k in enumerate(g.dims) if k % 2 == 0])
            m = canonical_pm(g, d)
        else:
            u = rng.choice([v for v in g.vertices if g.is_all_even(v)])
            m = apm_all_even(g, u)
        f = g.edge_at(rng.choice(sorted(m.ids)))
        faults = FaultSet.of(g, [f])
        verdict = classify_fault_edge(g, faults, m, f)
        if verdict.kind is not FaultEdgeKind.NICE_FAULT:
            continue
        cycle = verdict.witness
        spare = [i for i in range(len(g.edges))
                 if i not in m.ids and i not in cycle.id_set]
        faults = FaultSet(g, faults.ids | frozenset(rng.sample(spare, k=min(3, len(spare)))))
        assert is_nice_cycle(faults, m, cycle)
        out = symmetric_difference(m, cycle)
        assert len(out.ids) == len(m.ids)
        assert out.ids & faults.ids == (m.ids & faults.ids) - cycle.id_set
        assert out.covered == m.covered
        done += 1
