"""Duality testing on products of meet semi-lattice tree posets.

Given antichains ``A`` and ``B`` with ``a`` not below ``b`` for every pair,
decide whether every element of the product lies above some ``a`` or below
some ``b``; if not, return a witness ``x`` lying in neither region.

Sub-boxes are tuples of node bitmasks, one per factor. Every factor of a box
is a connected node set of its tree, so it has a unique root and projections
onto it are unique.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .errors import PreconditionError, ResourceLimitError
from .poset import ProductPoset, _bits


@dataclass(frozen=True)
class DualResult:
    dual: bool
    witness: tuple | None = None


@dataclass(frozen=True)
class DualityThreshold:
    """Solution of ``chi ** chi == v``; branches are balanced when both fractions exceed ``1/chi``."""

    v: int
    chi: float
    epsilon: float

    @classmethod
    def of(cls, v: int) -> "DualityThreshold":
        if v < 2:
            return cls(v, 1.0, 1.0)
        target = math.log(v)
        lo, hi = 1.0, max(2.0, math.log2(v))
        for _ in range(200):
            mid = (lo + hi) / 2
            if mid * math.log(mid) < target:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-12 * hi:
                break
        chi = (lo + hi) / 2
        return cls(v, chi, 1.0 / chi)


@dataclass
class DualStats:
    calls: int = 0
    max_depth: int = 0
    branches: Counter = field(default_factory=Counter)


def check_partial_duality(space: ProductPoset, A: Sequence, B: Sequence) -> None:
    for a in A:
        for b in B:
            if space.leq(a, b):
                raise PreconditionError(f"partial duality violated: {a} is below {b}")


def is_witness(space: ProductPoset, x, A, B) -> bool:
    return not any(space.leq(a, x) for a in A) and not any(space.leq(x, b) for b in B)


def _min_by_depth(mask: int, depth) -> int:
    return min(_bits(mask), key=lambda v: (depth[v], v))


def _max_by_depth(mask: int, depth) -> int:
    return max(_bits(mask), key=lambda v: (depth[v], -v))


class _Fdtb:
    def __init__(self, space: ProductPoset, base_size: int, enum_cap: int, max_depth: int,
                 check: bool, stats: DualStats):
        if not space.is_tree:
            raise PreconditionError("the tree dualizer needs every factor to be a tree poset")
        self.space = space
        self.f = space.factors
        self.n = space.n
        self.depth = [f.depth for f in self.f]
        self.parent = [[p[0] if p else -1 for p in f.preds] for f in self.f]
        self.base_size = base_size
        self.enum_cap = enum_cap
        self.max_depth = max_depth
        self.check = check
        self.stats = stats

    # -- projection onto a box ---------------------------------------------

    def project_up(self, a, Q):
        out = []
        for f, d, v, q in zip(self.f, self.depth, a, Q):
            s = f.up[v] & q
            if not s:
                return None
            out.append(v if (q >> v) & 1 else _min_by_depth(s, d))
        return tuple(out)

    def project_down(self, b, Q):
        out = []
        for f, d, v, q in zip(self.f, self.depth, b, Q):
            s = f.down[v] & q
            if not s:
                return None
            out.append(v if (q >> v) & 1 else _max_by_depth(s, d))
        return tuple(out)

    def restrict(self, Q, A, B):
        A2 = {p for p in (self.project_up(a, Q) for a in A) if p is not None}
        B2 = {p for p in (self.project_down(b, Q) for b in B) if p is not None}
        leq = self.space.leq
        A2 = sorted(a for a in A2 if not any(c != a and leq(c, a) for c in A2))
        B2 = sorted(b for b in B2 if not any(c != b and leq(b, c) for c in B2))
        return A2, B2

    # -- recursion -----------------------------------------------------------

    def run(self, Q, A, B, depth=0):
        self.stats.calls += 1
        self.stats.max_depth = max(self.stats.max_depth, depth)
        if depth > self.max_depth:
            raise ResourceLimitError(f"dualization recursion deeper than {self.max_depth}")
        if not all(Q):
            return None
        A, B = self.restrict(Q, A, B)
        if min(len(A), len(B)) <= self.base_size:
            self.stats.branches["base"] += 1
            w = self.pd(Q, A, B)
            if self.check and w is not None:
                assert is_witness(self.space, w, A, B), w
            return w

        f, n = self.f, self.n
        a, b, i = next((a, b, i) for a in A for b in B for i in range(n)
                       if not (f[i].up[a[i]] >> b[i]) & 1)
        ai = a[i]
        fi = f[i]
        eps_a = sum(1 for x in A if (fi.up[ai] >> x[i]) & 1) / len(A)
        eps_b = sum(1 for y in B if not (fi.up[ai] >> y[i]) & 1) / len(B)
        eps = DualityThreshold.of(len(A) * len(B)).epsilon
        Qi = Q[i]
        Qi1 = fi.up[ai] & Qi
        Qi2 = Qi & ~Qi1

        def sub(qi, others=None):
            box = list(Q if others is None else others)
            box[i] = qi
            return tuple(box)

        if min(eps_a, eps_b) > eps:
            self.stats.branches["balanced"] += 1
            return self.run(sub(Qi1), A, B, depth + 1) or self.run(sub(Qi2), A, B, depth + 1)

        if eps_b <= eps:
            self.stats.branches["unbalanced_b"] += 1
            pa = self.parent[i][ai]
            path = fi.down[pa] & Qi
            rest = Qi & ~path
            for w in sorted(_bits(path), key=lambda v: self.depth[i][v]):
                for c in fi.succs[w]:
                    if (rest >> c) & 1:
                        r = self.run(sub(fi.up[c] & Qi), A, B, depth + 1)
                        if r is not None:
                            return r
            for x in A:
                if (fi.up[x[i]] >> ai) & 1:  # x_i below a_i
                    box = tuple(q if j == i else f[j].up[x[j]] & q for j, q in enumerate(Q))
                    r = self.run(sub(path, box), A, B, depth + 1)
                    if r is not None:
                        return r
            return None

        self.stats.branches["unbalanced_a"] += 1
        r = self.run(sub(Qi2), A, B, depth + 1)
        if r is not None:
            return r
        for xj in sorted(_bits(Qi1), key=lambda v: (self.depth[i][v], v)):
            p = self.parent[i][xj]
            for y in B:
                if (fi.up[p] >> y[i]) & 1:  # y_i above p(x_j)
                    box = tuple(q if j == i else f[j].down[y[j]] & q for j, q in enumerate(Q))
                    r = self.run(sub(1 << xj, box), A, B, depth + 1)
                    if r is not None:
                        return r
        return None

    # -- base case -----------------------------------------------------------

    def pd(self, Q, A, B):
        size = 1
        for q in Q:
            size *= q.bit_count()
        if size <= self.enum_cap:
            return self.enumerate_box(Q, A, B)
        if len(B) <= len(A):
            return self.pd_small_b(Q, A, B)
        return self.pd_small_a(Q, A, B)

    def enumerate_box(self, Q, A, B):
        for x in itertools.product(*(sorted(_bits(q)) for q in Q)):
            if is_witness(self.space, x, A, B):
                return x
        return None

    def root(self, i, q):
        return _min_by_depth(q, self.depth[i])

    def pd_small_b(self, Q, A, B):
        """Search the minimal elements of the box outside ``B``'s down-set."""
        f, n = self.f, self.n
        roots = [self.root(i, q) for i, q in enumerate(Q)]
        options = []
        for b in B:
            opts = [i for i in range(n) if Q[i] & ~f[i].down[b[i]]]
            if not opts:
                return None
            options.append(opts)
        seen = set()
        for assign in itertools.product(*options):
            key = tuple(sorted(set(zip(assign, range(len(B))))))
            if key in seen:
                continue
            seen.add(key)
            cut = {}
            for b, i in zip(B, assign):
                cut[i] = cut.get(i, 0) | f[i].down[b[i]]
            choices = []
            for i in range(n):
                if i not in cut:
                    choices.append((roots[i],))
                    continue
                u = Q[i] & ~cut[i]
                if not u:
                    break
                mins = [v for v in _bits(u) if v == roots[i] or not (u >> self.parent[i][v]) & 1]
                choices.append(sorted(mins))
            else:
                for x in itertools.product(*choices):
                    if not any(self.space.leq(a, x) for a in A):
                        return x
        return None

    def pd_small_a(self, Q, A, B):
        """Check, for each way of escaping every ``a``, whether the region's leaves are all covered by ``B``."""
        f, n = self.f, self.n
        roots = [self.root(i, q) for i, q in enumerate(Q)]
        options = []
        for a in A:
            opts = [i for i in range(n) if a[i] != roots[i]]
            if not opts:
                return None
            options.append(opts)
        seen = set()
        for assign in itertools.product(*options):
            key = tuple(sorted(set(zip(assign, range(len(A))))))
            if key in seen:
                continue
            seen.add(key)
            R = list(Q)
            for a, i in zip(A, assign):
                R[i] &= ~f[i].up[a[i]]
            leaves = [sorted(v for v in _bits(r) if f[i].up[v] & r == 1 << v) for i, r in enumerate(R)]
            leafsets = [set(l) for l in leaves]
            covered = set()
            for b in B:
                proj = tuple(_max_by_depth(f[i].down[b[i]] & R[i], self.depth[i]) for i in range(n))
                if all(p in ls for p, ls in zip(proj, leafsets)):
                    covered.add(proj)
            total = 1
            for l in leaves:
                total *= len(l)
            if len(covered) < total:
                for x in itertools.product(*leaves):
                    if x not in covered:
                        return x
        return None


def _full_box(space: ProductPoset) -> tuple:
    return tuple((1 << f.size) - 1 for f in space.factors)


def fdtb(space: ProductPoset, A: Sequence, B: Sequence, Q: Sequence | None = None, *,
         base_size: int = 3, enum_cap: int = 0, max_depth: int = 400, check: bool = False,
         stats: DualStats | None = None):
    """Recursive duality test on a sub-box ``Q`` (node bitmasks; default the whole product).

    Returns a witness in ``Q`` outside ``A``'s up-set and ``B``'s down-set,
    or ``None`` when the two sets are dual within ``Q``.
    """
    stats = stats if stats is not None else DualStats()
    solver = _Fdtb(space, base_size, enum_cap, max_depth, check, stats)
    Q = _full_box(space) if Q is None else tuple(Q)
    try:
        return solver.run(Q, [tuple(a) for a in A], [tuple(b) for b in B])
    except RecursionError:
        raise ResourceLimitError("dualization recursion exceeded the interpreter stack") from None


def pd_exhaustive(space: ProductPoset, A: Sequence, B: Sequence, Q: Sequence | None = None, *,
                  enum_cap: int = 0):
    """Direct search: minimal elements outside ``B``'s down-set, or leaf coverage when ``A`` is small.

    Exponential only in ``min(|A|, |B|)``.
    """
    solver = _Fdtb(space, 0, enum_cap, 0, False, DualStats())
    Q = _full_box(space) if Q is None else tuple(Q)
    if not all(Q):
        return None
    A2, B2 = solver.restrict(Q, [tuple(a) for a in A], [tuple(b) for b in B])
    return solver.pd(Q, A2, B2)


def brute_dualizer(space: ProductPoset, A: Sequence, B: Sequence, max_size: int = 10 ** 6) -> DualResult:
    """Reference dualizer: scan the whole product."""
    if space.size > max_size:
        raise ResourceLimitError(f"product has {space.size} elements, cap is {max_size}")
    for x in space.elements():
        if is_witness(space, x, A, B):
            return DualResult(False, x)
    return DualResult(True, None)


def search_dualizer(space: ProductPoset, A: Sequence, B: Sequence, max_nodes: int = 10 ** 6) -> DualResult:
    """Backtracking dualizer for arbitrary factor posets (used for interval lattices).

    Tracks which ``a``/``b`` are still unbroken along the prefix; the last
    coordinate is resolved by a single scan of its factor.
    """
    f, n = space.factors, space.n
    A, B = [tuple(a) for a in A], [tuple(b) for b in B]
    visited = 0

    def rec(i, prefix, live_a, live_b):
        nonlocal visited
        visited += 1
        if visited > max_nodes:
            raise ResourceLimitError(f"search dualizer visited more than {max_nodes} prefixes")
        fi = f[i]
        for v in range(fi.size):
            la = [a for a in live_a if fi.leq(a[i], v)]
            lb = [b for b in live_b if fi.leq(v, b[i])]
            if i == n - 1:
                if not la and not lb:
                    return prefix + (v,)
            else:
                r = rec(i + 1, prefix + (v,), la, lb)
                if r is not None:
                    return r
        return None

    if n == 0:
        return DualResult(bool(A or B), None if (A or B) else ())
    w = rec(0, (), A, B)
    return DualResult(w is None, w)


def dual_check(space: ProductPoset, A: Sequence, B: Sequence, *, base_size: int = 3,
               enum_cap: int = 0, max_depth: int = 400, check: bool = False,
               stats: DualStats | None = None, validate: bool = True) -> DualResult:
    """Decide whether ``A`` and ``B`` are dual in ``space``; return a witness if not.

    Tree-poset products use the recursive tree dualizer; other products fall
    back to :func:`search_dualizer`.
    """
    A = [tuple(a) for a in A]
    B = [tuple(b) for b in B]
    if validate:
        for x in A + B:
            space.check(x)
        check_partial_duality(space, A, B)
    if space.is_tree:
        w = fdtb(space, A, B, base_size=base_size, enum_cap=enum_cap, max_depth=max_depth,
                 check=check, stats=stats)
        result = DualResult(w is None, w)
    else:
        result = search_dualizer(space, A, B)
    if check and result.witness is not None:
        assert is_witness(space, result.witness, A, B), result.witness
    return result
