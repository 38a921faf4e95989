"""Finite factor posets and their Cartesian products.

Nodes of a factor are dense integers ``0..size-1``; display labels live in a
separate tuple. Order tests use per-node bitmasks (``up[v]`` holds every node
above or equal to ``v``), so ``leq`` is a shift and a mask.

Chains, bottomed antichains and taxonomies are all trees (every node except
the bottom has exactly one immediate predecessor); lattices of intervals are
general DAGs.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import InvalidElementError, NotDualizableError, PosetStructureError

Element = tuple  # one node id per factor


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    """Interface shared by :class:`FactorPoset` and :class:`DualPoset`."""

    kind: str
    labels: tuple
    preds: tuple  # immediate predecessors per node, ascending ids
    succs: tuple
    up: tuple  # bitmask of nodes >= v
    down: tuple  # bitmask of nodes <= v
    bottom: int
    top: int | None

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, v) -> bool:
        return isinstance(v, int) and 0 <= v < len(self.labels)

    def check(self, v) -> None:
        if v not in self:
            raise InvalidElementError(f"{v!r} is not an element of this {self.kind} poset")

    def leq(self, u: int, v: int) -> bool:
        return bool((self.up[u] >> v) & 1)

    def lt(self, u: int, v: int) -> bool:
        return u != v and bool((self.up[u] >> v) & 1)

    def comparable(self, u: int, v: int) -> bool:
        return self.leq(u, v) or self.leq(v, u)

    def node(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InvalidElementError(f"unknown label {label!r}") from None

    @cached_property
    def _index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    @cached_property
    def is_tree(self) -> bool:
        return all(len(self.preds[v]) == 1 for v in range(self.size) if v != self.bottom)

    def parent(self, v: int) -> int | None:
        """Unique immediate predecessor of ``v`` in a tree poset (None for the bottom)."""
        p = self.preds[v]
        if not p:
            return None
        if len(p) > 1:
            raise PosetStructureError(f"node {self.labels[v]!r} has {len(p)} immediate predecessors")
        return p[0]

    @cached_property
    def topo_order(self) -> tuple:
        order, indeg = [], [len(p) for p in self.preds]
        ready = [v for v in range(self.size) if indeg[v] == 0]
        while ready:
            v = ready.pop()
            order.append(v)
            for w in self.succs[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
        return tuple(order)

    @cached_property
    def depth(self) -> tuple:
        """Longest path length from the bottom in the precedence graph."""
        d = [0] * self.size
        for v in self.topo_order:
            for w in self.succs[v]:
                if d[w] < d[v] + 1:
                    d[w] = d[v] + 1
        return tuple(d)

    @cached_property
    def is_graded(self) -> bool:
        d = self.depth
        return all(d[w] == d[v] + 1 for v in range(self.size) for w in self.succs[v])

    def meet(self, u: int, v: int) -> int:
        common = self.down[u] & self.down[v]
        for m in _bits(common):
            if self.down[m] == common:
                return m
        raise PosetStructureError(f"{self.labels[u]!r} and {self.labels[v]!r} have no meet")

    def join(self, u: int, v: int) -> int:
        common = self.up[u] & self.up[v]
        for m in _bits(common):
            if self.up[m] == common:
                return m
        raise PosetStructureError(f"{self.labels[u]!r} and {self.labels[v]!r} have no join")

    def above(self, v: int) -> list:
        return list(_bits(self.up[v]))

    def below(self, v: int) -> list:
        return list(_bits(self.down[v]))

    def dual(self) -> "DualPoset":
        return DualPoset(self)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.kind} size={self.size}>"


class FactorPoset(Poset):
    """An immutable finite poset with a unique minimum.

    Built from cover relations ``(lower, upper)``. Redundant (transitive)
    edges are dropped so ``preds``/``succs`` are exactly the immediate
    neighbours.
    """

    def __init__(self, labels: Sequence, covers: Iterable, kind: str = "tree"):
        labels = tuple(labels)
        if not labels:
            raise PosetStructureError("a factor poset needs at least one element")
        if len(set(labels)) != len(labels):
            raise PosetStructureError("duplicate labels in factor poset")
        n = len(labels)
        out = [set() for _ in range(n)]
        for lo, hi in covers:
            if not (0 <= lo < n and 0 <= hi < n) or lo == hi:
                raise PosetStructureError(f"bad cover edge ({lo}, {hi})")
            out[lo].add(hi)

        # topological order (Kahn); leftover nodes mean a cycle
        indeg = [0] * n
        for v in range(n):
            for w in out[v]:
                indeg[w] += 1
        ready = sorted(v for v in range(n) if indeg[v] == 0)
        order = []
        while ready:
            v = ready.pop()
            order.append(v)
            for w in out[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
        if len(order) != n:
            raise PosetStructureError("precedence graph has a cycle")

        up = [0] * n
        for v in reversed(order):
            m = 1 << v
            for w in out[v]:
                m |= up[w]
            up[v] = m
        down = [0] * n
        for v in range(n):
            for w in _bits(up[v]):
                down[w] |= 1 << v

        # transitive reduction
        succs = [[] for _ in range(n)]
        preds = [[] for _ in range(n)]
        for v in range(n):
            strict = up[v] & ~(1 << v)
            for w in _bits(strict):
                between = strict & down[w] & ~(1 << w)
                if not between:
                    succs[v].append(w)
                    preds[w].append(v)

        minima = [v for v in range(n) if not preds[v]]
        if len(minima) != 1:
            raise PosetStructureError(f"expected a unique minimum, found {len(minima)}")
        maxima = [v for v in range(n) if not succs[v]]

        self.kind = kind
        self.labels = labels
        self.preds = tuple(tuple(p) for p in preds)
        self.succs = tuple(tuple(s) for s in succs)
        self.up = tuple(up)
        self.down = tuple(down)
        self.bottom = minima[0]
        self.top = maxima[0] if len(maxima) == 1 else None
        self._validate_kind()

    def _validate_kind(self) -> None:
        if self.kind == "chain":
            if any(len(s) > 1 for s in self.succs):
                raise PosetStructureError("chain has incomparable elements")
        elif self.kind == "antichain":
            if any(p != (self.bottom,) for v, p in enumerate(self.preds) if v != self.bottom):
                raise PosetStructureError("bottomed antichain must be a star around its bottom")
        elif self.kind == "tree":
            if not self.is_tree:
                raise PosetStructureError("tree poset has a node with several parents")

    # -- constructors -----------------------------------------------------

    @classmethod
    def chain(cls, labels: Sequence) -> "FactorPoset":
        """Chain ``labels[0] < labels[1] < ...``."""
        labels = list(labels)
        return cls(labels, [(i, i + 1) for i in range(len(labels) - 1)], kind="chain")

    @classmethod
    def star(cls, bottom, values: Sequence) -> "FactorPoset":
        """Bottomed antichain: ``bottom`` below each of the pairwise incomparable ``values``."""
        labels = [bottom, *values]
        return cls(labels, [(0, i) for i in range(1, len(labels))], kind="antichain")

    @classmethod
    def from_parent_edges(cls, edges: Iterable, bottom=None) -> "FactorPoset":
        """Tree from ``(child, parent)`` label pairs.

        If ``bottom`` is given it is added below every root, which turns a
        forest into a tree with a unique minimum.
        """
        edges = list(edges)
        labels, seen = [], set()
        if bottom is not None:
            labels.append(bottom)
            seen.add(bottom)
        parents = {}
        for child, parent in edges:
            if child in parents and parents[child] != parent:
                raise PosetStructureError(f"{child!r} has two parents")
            parents[child] = parent
            for lab in (parent, child):
                if lab not in seen:
                    seen.add(lab)
                    labels.append(lab)
        idx = {lab: i for i, lab in enumerate(labels)}
        covers = [(idx[p], idx[c]) for c, p in parents.items()]
        if bottom is not None:
            covers += [(0, idx[r]) for r in labels[1:] if r not in parents]
        return cls(labels, covers, kind="tree")


class DualPoset(Poset):
    """Order-reversing view of another poset; nothing is copied."""

    def __init__(self, base: Poset):
        if base.top is None:
            raise NotDualizableError(f"{base!r} has no unique maximum, so its dual has no bottom")
        self.base = base
        self.kind = "dual"
        self.labels = base.labels
        self.preds = base.succs
        self.succs = base.preds
        self.up = base.down
        self.down = base.up
        self.bottom = base.top
        self.top = base.bottom

    def dual(self) -> Poset:
        return self.base


class ProductPoset:
    """Cartesian product of factor posets under the componentwise order."""

    def __init__(self, factors: Sequence[Poset]):
        self.factors = tuple(factors)
        self.n = len(self.factors)
        self.bottom = tuple(f.bottom for f in self.factors)
        tops = tuple(f.top for f in self.factors)
        self.top = None if None in tops else tops

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"<ProductPoset {' x '.join(f'{f.kind}[{f.size}]' for f in self.factors)}>"

    @property
    def size(self) -> int:
        s = 1
        for f in self.factors:
            s *= f.size
        return s

    @cached_property
    def is_tree(self) -> bool:
        return all(f.is_tree for f in self.factors)

    @cached_property
    def is_graded(self) -> bool:
        return all(f.is_graded for f in self.factors)

    def check(self, x) -> None:
        if len(x) != self.n:
            raise InvalidElementError(f"expected {self.n} coordinates, got {len(x)}")
        for f, v in zip(self.factors, x):
            f.check(v)

    def leq(self, p, q) -> bool:
        return all((f.up[a] >> b) & 1 for f, a, b in zip(self.factors, p, q))

    def lt(self, p, q) -> bool:
        return p != q and self.leq(p, q)

    def comparable(self, p, q) -> bool:
        return self.leq(p, q) or self.leq(q, p)

    def level(self, x) -> int:
        return sum(f.depth[v] for f, v in zip(self.factors, x))

    def predecessors(self, x) -> list:
        out = []
        for i, (f, v) in enumerate(zip(self.factors, x)):
            for p in f.preds[v]:
                out.append(x[:i] + (p,) + x[i + 1:])
        return out

    def successors(self, x) -> list:
        out = []
        for i, (f, v) in enumerate(zip(self.factors, x)):
            for s in f.succs[v]:
                out.append(x[:i] + (s,) + x[i + 1:])
        return out

    def meet(self, x, y) -> tuple:
        return tuple(f.meet(a, b) for f, a, b in zip(self.factors, x, y))

    def elements(self) -> Iterator[tuple]:
        return itertools.product(*(range(f.size) for f in self.factors))

    def dual(self) -> "ProductPoset":
        return ProductPoset([f.dual() for f in self.factors])

    def labels(self, x) -> tuple:
        return tuple(f.labels[v] for f, v in zip(self.factors, x))

    def parse(self, labels: Sequence) -> tuple:
        if len(labels) != self.n:
            raise InvalidElementError(f"expected {self.n} labels, got {len(labels)}")
        return tuple(f.node(lab) for f, lab in zip(self.factors, labels))


# Spec-level free functions ------------------------------------------------

def leq(p, q, space: ProductPoset) -> bool:
    space.check(p)
    space.check(q)
    return space.leq(p, q)


def immediate_predecessors(x, space: ProductPoset) -> set:
    space.check(x)
    return set(space.predecessors(x))


def immediate_successors(x, space: ProductPoset) -> set:
    space.check(x)
    return set(space.successors(x))


def level(x, space: ProductPoset) -> int:
    space.check(x)
    return space.level(x)


def meet(x, y, space: ProductPoset) -> tuple:
    space.check(x)
    space.check(y)
    return space.meet(x, y)


def dual_view(space: ProductPoset) -> ProductPoset:
    return space.dual()
