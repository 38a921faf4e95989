import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posetmine import (FactorPoset, PreconditionError, ProductPoset, ResourceLimitError, brute_dualizer,
                       dual_check, fdtb, generate_minimal_infrequent, pd_exhaustive)
from posetmine.dualize import DualityThreshold, DualStats, search_dualizer
from posetmine.intervals import build_lattice
from oracles import Oracle, instances, random_instance


def border_subsets(inst, seed):
    """Partially dual pair drawn from the true border (keeps condition a not-below b)."""
    rng = random.Random(seed)
    b = generate_minimal_infrequent(inst.db, inst.t)
    A = [x for x in b.X if rng.random() < 0.7]
    B = [y for y in b.Y if rng.random() < 0.7]
    return A, B


def test_chi_solves_equation():
    for v in (2, 10, 1000, 10 ** 6):
        th = DualityThreshold.of(v)
        assert abs(th.chi ** th.chi - v) / v < 1e-9
        assert th.epsilon == pytest.approx(1 / th.chi)
    assert DualityThreshold.of(1).epsilon == 1.0


def test_empty_sets_not_dual():
    p = ProductPoset([FactorPoset.chain("ab")] * 2)
    r = dual_check(p, [], [])
    assert not r.dual and r.witness == (0, 0)


def test_bottom_and_nothing_is_dual():
    p = ProductPoset([FactorPoset.chain("ab")] * 2)
    assert dual_check(p, [(0, 0)], []).dual
    assert dual_check(p, [], [(1, 1)]).dual


def test_hypergraph_transversal_case():
    # minimal transversals of the hypergraph {{0,1},{1,2}} complement to its independent sets
    p = ProductPoset([FactorPoset.chain(["0", "1"])] * 3)
    A = [(1, 1, 0), (0, 1, 1)]
    B = [(1, 0, 1), (0, 1, 0)]
    assert dual_check(p, A, B, base_size=0, check=True).dual
    r = dual_check(p, A, B[:1], base_size=0, check=True)
    assert not r.dual and r.witness == (0, 1, 0)


def test_partial_duality_violation_named():
    p = ProductPoset([FactorPoset.chain("abc")])
    with pytest.raises(PreconditionError) as e:
        dual_check(p, [(1,)], [(2,)])
    assert "(1,)" in str(e.value) and "(2,)" in str(e.value)


def test_depth_cap():
    rng = random.Random(5)
    while True:
        inst = random_instance(rng)
        A, B = border_subsets(inst, 0)
        stats = DualStats()
        fdtb(inst.space, A, B, base_size=0, stats=stats)
        if stats.max_depth > 0:
            break
    with pytest.raises(ResourceLimitError):
        fdtb(inst.space, A, B, base_size=0, max_depth=0)


def test_brute_dualizer_cap():
    p = ProductPoset([FactorPoset.chain("abcdefghij")] * 7)
    with pytest.raises(ResourceLimitError):
        brute_dualizer(p, [], [], max_size=1000)


def test_interval_product_uses_search():
    lat = build_lattice([(1, 2), (2, 3)], with_bottom=True)
    p = ProductPoset([lat, lat])
    assert not p.is_tree
    top = (lat.top, lat.top)
    assert dual_check(p, [], [top]).dual
    A = [(lat.node_of((2, 3)), lat.bottom)]
    B = [(lat.node_of((1, 2)), lat.top)]
    assert dual_check(p, A, B, check=True).dual
    B = [(lat.node_of((1, 2)), lat.node_of((2, 2)))]
    r = dual_check(p, A, B, check=True)
    assert not r.dual
    assert r.witness[1] in (lat.node_of((1, 2)), lat.node_of((2, 3)), lat.top)


@settings(max_examples=150, deadline=None)
@given(instances(max_factors=4, max_nodes=6, max_rows=15), st.integers(0, 10 ** 6), st.sampled_from([0, 1, 3]))
def test_fdtb_matches_brute(inst, seed, base):
    A, B = border_subsets(inst, seed)
    o = Oracle(inst.parents, inst.rows)
    stats = DualStats()
    r = dual_check(inst.space, A, B, base_size=base, check=True, stats=stats)
    assert r.dual == o.dual(A, B)
    if not r.dual:
        assert o.is_witness(r.witness, A, B)
    assert r.dual == brute_dualizer(inst.space, A, B).dual


@settings(max_examples=100, deadline=None)
@given(instances(max_factors=3, max_nodes=5), st.integers(0, 10 ** 6))
def test_pd_exhaustive_matches_brute(inst, seed):
    A, B = border_subsets(inst, seed)
    o = Oracle(inst.parents, inst.rows)
    w = pd_exhaustive(inst.space, A, B)
    assert (w is None) == o.dual(A, B)
    if w is not None:
        assert o.is_witness(w, A, B)


@settings(max_examples=100, deadline=None)
@given(instances(max_factors=3, max_nodes=5), st.integers(0, 10 ** 6))
def test_search_dualizer_matches_brute(inst, seed):
    A, B = border_subsets(inst, seed)
    o = Oracle(inst.parents, inst.rows)
    r = search_dualizer(inst.space, A, B)
    assert r.dual == o.dual(A, B)


def test_all_branches_reached():
    rng = random.Random(11)
    stats = DualStats()
    for _ in range(200):
        inst = random_instance(rng)
        A, B = border_subsets(inst, rng.randrange(10 ** 6))
        dual_check(inst.space, A, B, base_size=0, check=True, stats=stats)
    for name in ("base", "balanced", "unbalanced_a", "unbalanced_b"):
        assert stats.branches[name] > 0, name


def test_sub_box_restriction():
    p = ProductPoset([FactorPoset.chain("abc")] * 2)
    Q = (0b110, 0b110)  # nodes {b, c} on both axes
    assert fdtb(p, [(1, 1)], [], Q=Q) is None
    assert fdtb(p, [(2, 2)], [], Q=Q) == (1, 1)
