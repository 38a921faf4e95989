"""Lattices of intervals and the semi-lattice used for quantitative attributes.

Endpoints are exact numbers (ints for minute-resolution times, ``Decimal`` or
``int`` for quantitative columns), never floats. The empty interval is
represented by ``None``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import DecodeError, IngestError
from .poset import FactorPoset

Interval = tuple  # (lo, hi) with lo <= hi, or None for the empty interval


def intersect(x, y):
    if x is None or y is None:
        return None
    lo, hi = max(x[0], y[0]), min(x[1], y[1])
    return (lo, hi) if lo <= hi else None


def span(x, y):
    if x is None:
        return y
    if y is None:
        return x
    return (min(x[0], y[0]), max(x[1], y[1]))


def contains(outer, inner) -> bool:
    """``inner`` is a subset of ``outer``; the empty interval is inside everything."""
    if inner is None:
        return True
    if outer is None:
        return False
    return outer[0] <= inner[0] and inner[1] <= outer[1]


def format_minutes(m: int) -> str:
    sign = "-" if m < 0 else ""
    m = abs(int(m))
    return f"{sign}{m // 60}:{m % 60:02d}"


def parse_minutes(text: str) -> int:
    h, _, mm = text.strip().partition(":")
    if not mm or not h.lstrip("-").isdigit() or not mm.isdigit() or len(mm) != 2:
        raise ValueError(f"bad time {text!r}, expected H:MM")
    hours = int(h)
    return hours * 60 + (int(mm) if hours >= 0 else -int(mm))


def _fmt_interval(x, fmt: Callable) -> str:
    if x is None:
        return "∅"
    return f"[{fmt(x[0])},{fmt(x[1])}]"


class IntervalLattice(FactorPoset):
    """Closure of a set of closed intervals under intersection and span, ordered by containment."""

    def __init__(self, intervals: Sequence, fmt: Callable = str, epsilon=1):
        order = sorted(intervals, key=lambda x: (-1, 0, 0) if x is None else (x[1] - x[0], x[0], x[1]))
        self.intervals = tuple(order)
        self.epsilon = epsilon
        self.fmt = fmt
        covers = []
        for i, a in enumerate(order):
            for j, b in enumerate(order):
                if i != j and contains(b, a):
                    covers.append((i, j))
        super().__init__([_fmt_interval(x, fmt) for x in order], covers, kind="interval")
        self._node = {x: i for i, x in enumerate(order)}

    def node_of(self, interval) -> int:
        try:
            return self._node[interval]
        except KeyError:
            raise KeyError(f"interval {interval!r} is not in the lattice") from None

    def interval(self, v: int):
        return self.intervals[v]


def closure(intervals: Iterable) -> set:
    """Fixed point of the family under pairwise intersection and span."""
    family = set(intervals)
    frontier = list(family)
    while frontier:
        fresh = []
        current = list(family)
        for x in frontier:
            for y in current:
                for z in (intersect(x, y), span(x, y)):
                    if z not in family:
                        family.add(z)
                        fresh.append(z)
        frontier = fresh
    return family


def build_lattice(intervals: Iterable, *, with_bottom: bool = False, fmt: Callable = str,
                  epsilon=1) -> IntervalLattice:
    """Lattice of all intersections and spans of ``intervals``.

    An empty intersection adds the empty interval as the minimum. With
    ``with_bottom`` the empty interval is added regardless; ingestion uses
    this for the "no usage" cell.
    """
    intervals = list(intervals)
    if not intervals:
        raise ValueError("need at least one interval")
    for x in intervals:
        if x is not None and x[0] > x[1]:
            raise ValueError(f"interval {x!r} has lo > hi")
    family = closure(intervals)
    if with_bottom:
        family.add(None)
    return IntervalLattice(sorted(family, key=lambda x: (x is not None, x or ())), fmt=fmt, epsilon=epsilon)


def elementary_intervals(column: Sequence) -> list:
    """Consecutive intervals between the sorted distinct endpoints of a column.

    ``None`` cells (no usage) are skipped.
    """
    points = sorted({p for x in column if x is not None for p in x})
    if not points:
        raise IngestError("column has no intervals")
    if len(points) == 1:
        return [(points[0], points[0])]
    return list(zip(points, points[1:]))


class QuantitativeSemilattice(FactorPoset):
    """All intervals ``[v_i, v_j]`` over the distinct values, ordered by reverse containment.

    The minimum is the full span; the maximal elements are the single points.
    """

    def __init__(self, values: Iterable, fmt: Callable = str):
        vals = sorted(set(values))
        if not vals:
            raise ValueError("need at least one value")
        self.values = tuple(vals)
        elems = [(a, b) for i, a in enumerate(vals) for b in vals[i:]]
        elems.sort(key=lambda x: (-(x[1] - x[0]), x))
        self.intervals = tuple(elems)
        covers = [(i, j) for i, a in enumerate(elems) for j, b in enumerate(elems)
                  if i != j and contains(a, b)]
        super().__init__([_fmt_interval(x, fmt) for x in elems], covers, kind="quantitative")
        self._node = {x: i for i, x in enumerate(elems)}

    def node_of(self, interval) -> int:
        return self._node[interval]


def quantitative_semilattice(values: Iterable, fmt: Callable = str) -> QuantitativeSemilattice:
    return QuantitativeSemilattice(values, fmt)


def chain_pair(values: Iterable, fmt: Callable = str) -> tuple:
    """Two chains embedding the quantitative semi-lattice.

    The left chain holds lower endpoints ascending, the right chain upper
    endpoints descending; both start at the full span. The pair
    ``(i, j)`` stands for ``[values[i], values[-1 - j]]``, which is empty when
    ``i`` and ``j`` overlap.
    """
    vals = sorted(set(values))
    left = FactorPoset.chain([f">={fmt(v)}" for v in vals])
    right = FactorPoset.chain([f"<={fmt(v)}" for v in reversed(vals)])
    return left, right, tuple(vals)


@dataclass(frozen=True)
class DecodedInterval:
    """A concrete interval recovered from a minimal infrequent lattice node.

    ``kind`` is one of ``empty``, ``point``, ``interval``, or
    ``open-point-range`` / ``closed-point-range`` for the families of single
    points lying strictly (resp. weakly) between ``lo`` and ``hi``.
    """

    kind: str
    lo: object = None
    hi: object = None

    def render(self, fmt: Callable = str) -> str:
        if self.kind == "empty":
            return "∅"
        if self.kind == "point":
            return f"[{fmt(self.lo)},{fmt(self.lo)}]"
        if self.kind == "interval":
            return f"[{fmt(self.lo)},{fmt(self.hi)}]"
        if self.kind == "open-point-range":
            return f"[p,p] for p in ({fmt(self.lo)},{fmt(self.hi)})"
        return f"[p,p] for p in [{fmt(self.lo)},{fmt(self.hi)}]"

    def as_json(self, fmt: Callable = str) -> dict:
        out = {"kind": self.kind}
        if self.lo is not None:
            out["lo"] = fmt(self.lo)
        if self.hi is not None:
            out["hi"] = fmt(self.hi)
        return out


def decode_node(lattice: IntervalLattice, v: int, epsilon=None) -> DecodedInterval:
    """Concrete interval for a minimal infrequent node of an interval lattice."""
    eps = lattice.epsilon if epsilon is None else epsilon
    x = lattice.interval(v)
    if v == lattice.bottom or x is None:
        return DecodedInterval("empty")
    a, d = x
    if a == d:
        return DecodedInterval("point", a, a)
    preds = [lattice.interval(p) for p in lattice.preds[v]]
    preds = [p for p in preds if p is not None]
    if not preds:
        return DecodedInterval("closed-point-range", a, d)
    if len(preds) == 2:
        (p1, q1), (p2, q2) = sorted(preds)
        if p1 == q1 and p2 == q2:
            return DecodedInterval("open-point-range", p1, p2)
        if p1 < q1 and p2 < q2 and p1 < p2:
            return DecodedInterval("interval", p2 - eps, q1 + eps)
    if len(preds) == 1:
        c, b = preds[0]
        if b == d and a < c:
            return DecodedInterval("interval", c - eps, d)
        if c == a and b < d:
            return DecodedInterval("interval", a, b + eps)
    raise DecodeError(f"cannot decode lattice node {lattice.labels[v]} with predecessors {preds}")


def decode_minimal_infrequent(x: Sequence, lattices: Sequence, epsilon=None) -> tuple:
    """Decode every coordinate of an element over a product of interval lattices."""
    return tuple(decode_node(lat, v, epsilon) for lat, v in zip(lattices, x))
