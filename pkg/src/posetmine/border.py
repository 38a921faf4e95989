"""Joint generation of the minimal infrequent and maximal frequent borders."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .dataset import TransactionDB
from .dualize import DualStats, dual_check
from .poset import ProductPoset


@dataclass
class Border:
    """``X``: minimal ``t``-infrequent elements; ``Y``: maximal ``t``-frequent elements."""

    X: list
    Y: list
    support: dict = field(default_factory=dict)
    iterations: int = 0


def min_antichain(space: ProductPoset, S: Iterable) -> list:
    S = sorted(set(map(tuple, S)))
    return [a for a in S if not any(b != a and space.leq(b, a) for b in S)]


def max_antichain(space: ProductPoset, S: Iterable) -> list:
    S = sorted(set(map(tuple, S)))
    return [a for a in S if not any(b != a and space.leq(a, b) for b in S)]


def minimalize(space: ProductPoset, x, count: Callable, t: int) -> tuple:
    """Descend from an infrequent ``x`` to a minimal infrequent element below it.

    Coordinates are visited cyclically; in each, the first immediate
    predecessor (by node id) that keeps the support below ``t`` is taken.
    """
    x = list(x)
    idle = 0
    i = 0
    while idle < space.n:
        moved = False
        for p in sorted(space.factors[i].preds[x[i]]):
            y = x.copy()
            y[i] = p
            if count(tuple(y)) < t:
                x = y
                moved = True
                break
        idle = 0 if moved else idle + 1
        i = (i + 1) % space.n
    return tuple(x)


def maximalize(space: ProductPoset, x, count: Callable, t: int) -> tuple:
    """Ascend from a frequent ``x`` to a maximal frequent element above it."""
    x = list(x)
    idle = 0
    i = 0
    while idle < space.n:
        moved = False
        for s in sorted(space.factors[i].succs[x[i]]):
            y = x.copy()
            y[i] = s
            if count(tuple(y)) >= t:
                x = y
                moved = True
                break
        idle = 0 if moved else idle + 1
        i = (i + 1) % space.n
    return tuple(x)


def joint_generate(space: ProductPoset, count: Callable, t: int, X0: Sequence = (), Y0: Sequence = (),
                   *, max_depth: int = 400, stats: DualStats | None = None, check: bool = False,
                   on_new: Callable | None = None) -> Border:
    """Grow ``X`` and ``Y`` until they are dual.

    ``X0`` must hold minimal infrequent and ``Y0`` maximal frequent elements.
    ``on_new(side, element, support)`` is called for each newly found element.
    """
    X = [tuple(x) for x in X0]
    Y = [tuple(y) for y in Y0]
    sup = {}
    iterations = 0
    while True:
        iterations += 1
        res = dual_check(space, X, Y, max_depth=max_depth, stats=stats, check=check, validate=False)
        if res.dual:
            break
        w = res.witness
        if count(w) < t:
            x = minimalize(space, w, count, t)
            if check:
                assert not any(space.comparable(x, a) for a in X), x
            X.append(x)
            sup[x] = count(x)
            if on_new:
                on_new("X", x, sup[x])
        else:
            y = maximalize(space, w, count, t)
            if check:
                assert not any(space.comparable(y, b) for b in Y), y
            Y.append(y)
            sup[y] = count(y)
            if on_new:
                on_new("Y", y, sup[y])
    for z in X + Y:
        if z not in sup:
            sup[z] = count(z)
    key = lambda z: (space.level(z), z)
    return Border(sorted(X, key=key), sorted(Y, key=key), sup, iterations)


def generate_minimal_infrequent(db: TransactionDB, t: int, *, max_depth: int = 400,
                                stats: DualStats | None = None, check: bool = False) -> Border:
    """Minimal ``t``-infrequent and maximal ``t``-frequent elements of ``db``."""
    if not 0 <= t <= len(db) + 1:
        raise ValueError(f"threshold {t} outside [0, {len(db) + 1}]")
    return joint_generate(db.space, db.count, t, max_depth=max_depth, stats=stats, check=check)


def dual_bound_holds(border: Border, n_rows: int, t: int) -> bool:
    return len(border.Y) <= (n_rows - t + 1) * max(1, len(border.X))
