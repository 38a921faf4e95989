"""Level-wise enumeration of frequent (and, on the dual order, infrequent) elements."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator

from .dataset import TransactionDB
from .errors import ResourceLimitError
from .poset import ProductPoset


@dataclass
class AprioriStats:
    levels: int = 0
    candidates: int = 0
    emitted: int = 0
    support_queries: int = 0
    width: list = field(default_factory=list)


@dataclass
class Frontier:
    """Frequent elements of one level, hashed for membership tests."""

    level: int
    elements: frozenset

    def __contains__(self, x) -> bool:
        return x in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(sorted(self.elements))


def candidates(frontier: Frontier, space: ProductPoset, start=None) -> set:
    """Level ``k+1`` elements all of whose level-``k`` predecessors are in the frontier.

    With ``start`` set, only elements above ``start`` are considered, so the
    search runs inside the principal filter of ``start``.
    """
    k = frontier.level
    out = set()
    for x in frontier:
        for y in space.successors(x):
            if y in out or space.level(y) != k + 1:
                continue
            ok = True
            for z in space.predecessors(y):
                if space.level(z) != k or (start is not None and not space.leq(start, z)):
                    continue
                if z not in frontier:
                    ok = False
                    break
            if ok:
                out.add(y)
    return out


def prune(cands, db: TransactionDB, t: int, workers: int = 1) -> dict:
    """Keep the candidates with support at least ``t``; returns ``{x: support}``."""
    cands = sorted(cands)
    counts = db.count_many(cands, workers)
    return {x: c for x, c in zip(cands, counts) if c >= t}


def levelwise(space: ProductPoset, keep: Callable, start=None, max_width: int | None = None,
              stats: AprioriStats | None = None) -> Iterator:
    """Generic level-wise search over a down-closed family.

    ``keep(list_of_candidates) -> list of (element, value) pairs`` decides
    membership for a whole level at once. Yields ``(level, element, value)``
    in level order, lexicographic within a level.
    """
    stats = stats if stats is not None else AprioriStats()
    start = space.bottom if start is None else tuple(start)
    first = keep([start])
    stats.support_queries += 1
    if not first:
        return
    k0 = space.level(start)
    level_items = first
    k = k0
    while level_items:
        stats.levels += 1
        stats.width.append(len(level_items))
        if max_width is not None and len(level_items) > max_width:
            raise ResourceLimitError(f"level {k} holds {len(level_items)} elements, cap is {max_width}")
        for x, val in sorted(level_items):
            stats.emitted += 1
            yield k, x, val
        frontier = Frontier(k, frozenset(x for x, _ in level_items))
        cands = candidates(frontier, space, None if start == space.bottom else start)
        stats.candidates += len(cands)
        stats.support_queries += len(cands)
        level_items = keep(sorted(cands)) if cands else []
        k += 1


def apriori_levels(db: TransactionDB, t: int, start=None, max_width: int | None = None,
                   workers: int = 1, stats: AprioriStats | None = None) -> Iterator:
    """Yield ``(level, element, support)`` for every ``t``-frequent element."""

    def keep(xs):
        return list(prune(xs, db, t, workers).items())

    return levelwise(db.space, keep, start, max_width, stats)


def apriori_frequent(db: TransactionDB, t: int, start=None, max_width: int | None = None,
                     workers: int = 1, stats: AprioriStats | None = None) -> Iterator:
    """Every element with support at least ``t``, grouped by level, each once."""
    for _, x, _ in apriori_levels(db, t, start, max_width, workers, stats):
        yield x


def infrequent_levels(db: TransactionDB, t: int, max_width: int | None = None,
                      workers: int = 1, stats: AprioriStats | None = None) -> Iterator:
    """Yield ``(dual level, element, support)`` for every element with support below ``t``.

    Runs the level-wise search on the dual order, where infrequency is
    down-closed. Raises :class:`NotDualizableError` if a factor lacks a top.
    """
    dual = db.space.dual()

    def keep(xs):
        counts = db.count_many(xs, workers)
        return [(x, c) for x, c in zip(xs, counts) if c < t]

    return levelwise(dual, keep, None, max_width, stats)


def apriori_infrequent(db: TransactionDB, t: int, max_width: int | None = None,
                       workers: int = 1, stats: AprioriStats | None = None) -> Iterator:
    for _, x, _ in infrequent_levels(db, t, max_width, workers, stats):
        yield x
