"""Irredundant association rules, generalized and rare rules, and maximal k-boxes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .apriori import apriori_levels
from .border import joint_generate, min_antichain, minimalize
from .dataset import Attribute, TransactionDB, as_fraction, format_number, threshold_from_fraction
from .errors import PreconditionError
from .poset import FactorPoset, ProductPoset


@dataclass(frozen=True)
class Rule:
    """``x => z`` with ``x`` below ``z`` and every ``x_i`` either ``z_i`` or the bottom."""

    x: tuple
    z: tuple
    support_count: int
    x_count: int
    n_rows: int
    R: frozenset
    S: frozenset

    @property
    def support(self) -> Fraction:
        return Fraction(self.support_count, self.n_rows)

    @property
    def confidence(self) -> Fraction:
        return Fraction(self.support_count, self.x_count) if self.x_count else Fraction(1)


@dataclass(frozen=True)
class RareRuleConfig:
    s1: object
    s2: object
    c: object = 1

    def __post_init__(self):
        s1, s2, c = as_fraction(self.s1), as_fraction(self.s2), as_fraction(self.c)
        if not 0 < s1 < s2 < 1:
            raise ValueError(f"need 0 < s1 < s2 < 1, got s1={self.s1}, s2={self.s2}")
        if not 0 < c <= 1:
            raise ValueError(f"confidence must lie in (0, 1], got {self.c}")


@dataclass(frozen=True)
class KBox:
    lower: tuple
    upper: tuple
    interior_count: int


def _check_ratio(name, v, allow_zero=False) -> Fraction:
    f = as_fraction(v)
    if not (0 <= f <= 1 if allow_zero else 0 < f <= 1):
        raise ValueError(f"{name} must lie in {'[0, 1]' if allow_zero else '(0, 1]'}, got {v}")
    return f


def confidence_threshold(z_support: int, c) -> int:
    """Smallest support that breaks ``support(x) <= support(z) / c``."""
    return math.floor(Fraction(z_support) / as_fraction(c)) + 1


def _subcube(space: ProductPoset, z):
    coords = [i for i in range(space.n) if z[i] != space.factors[i].bottom]
    sub = ProductPoset([FactorPoset.chain(["l", "z"]) for _ in coords])

    def lift(y):
        out = list(space.bottom)
        for i, b in zip(coords, y):
            if b:
                out[i] = z[i]
        return tuple(out)

    def lower(x):
        y = []
        for i in coords:
            if x[i] == z[i]:
                y.append(1)
            elif x[i] == space.factors[i].bottom:
                y.append(0)
            else:
                return None
        return tuple(y)

    return sub, lift, lower


def in_subcube(space: ProductPoset, x, z) -> bool:
    return all(a == b or a == f.bottom for a, b, f in zip(x, z, space.factors))


def _make_rule(space: ProductPoset, db: TransactionDB, x, z, zs: int, xs: int) -> Rule:
    R = frozenset(i for i in range(space.n) if z[i] == space.factors[i].bottom)
    S = frozenset(i for i in range(space.n) if x[i] == z[i])
    return Rule(x, z, zs, xs, len(db), R, S)


def irredundant_rules(db: TransactionDB, family: dict, c) -> Iterator[Rule]:
    """Rules ``x => z`` for every ``z`` in ``family`` (element -> support).

    ``family`` is processed top level first. For each ``z``, the minimal
    elements of its sub-cube with support above ``support(z)/c`` are
    generated, seeded from those of ``z``'s immediate successors in the
    family; only elements not already found for a successor are emitted.
    """
    space = db.space
    by_level = {}
    for z in family:
        by_level.setdefault(space.level(z), []).append(z)
    prev: dict = {}
    for k in sorted(by_level, reverse=True):
        cur = {}
        for z in sorted(by_level[k]):
            zs = family[z]
            tz = confidence_threshold(zs, c)
            sub, lift, lower = _subcube(space, z)
            count = lambda y: db.count(lift(y))
            ups = [u for u in space.successors(z) if u in prev]
            inherited = set()
            seeds = set()
            for u in ups:
                for x in prev[u]:
                    inherited.add(x)
                    y = lower(x)
                    if y is not None and count(y) < tz:
                        seeds.add(minimalize(sub, y, count, tz))
            border = joint_generate(sub, count, tz, X0=min_antichain(sub, seeds))
            found = {lift(y): border.support[y] for y in border.X}
            cur[z] = set(found)
            for x in sorted(found, key=lambda v: (space.level(v), v)):
                if x in inherited or x == z:
                    continue
                yield _make_rule(space, db, x, z, zs, found[x])
        prev = cur


def _check_binary(db: TransactionDB) -> None:
    for a in db.attributes:
        if a.kind != "binary":
            raise PreconditionError(f"binary database required; {a.name!r} is {a.kind}")


def gen_rules(db: TransactionDB, c, s) -> Iterator[Rule]:
    """Irredundant rules ``X => Z \\ X`` of a 0/1 database."""
    _check_binary(db)
    return gen_generalized_rules(db, c, s)


def gen_generalized_rules(db: TransactionDB, c, s, *, max_width: int | None = None,
                          workers: int = 1) -> Iterator[Rule]:
    """Irredundant rules over an arbitrary poset product."""
    c = _check_ratio("confidence", c)
    s = _check_ratio("support", s, allow_zero=True)
    t = threshold_from_fraction(s, len(db))
    family = {x: sup for _, x, sup in apriori_levels(db, t, max_width=max_width, workers=workers)}
    return irredundant_rules(db, family, c)


def check_rule_implication(r1: Rule, r2: Rule) -> bool:
    """True when ``r2`` follows from ``r1``: larger antecedent, smaller union."""
    return all(a <= b for a, b in zip(r1.x, r2.x)) and all(b <= a for a, b in zip(r1.z, r2.z))


def rare_itemsets(db: TransactionDB, cfg: RareRuleConfig, *, max_width: int | None = None) -> dict:
    """Sets with ``s1|D| <= support <= s2|D|``, found above the minimal sets with support ``<= s2|D|``."""
    from .border import generate_minimal_infrequent

    _check_binary(db)
    n = len(db)
    t_hi = math.floor(as_fraction(cfg.s2) * n) + 1
    t_lo = threshold_from_fraction(cfg.s1, n)
    stage1 = generate_minimal_infrequent(db, t_hi).X
    family = {}
    for x in stage1:
        for _, z, sup in apriori_levels(db, t_lo, start=x, max_width=max_width):
            family[z] = sup
    return family


def gen_rare_rules(db: TransactionDB, cfg: RareRuleConfig, *, max_width: int | None = None) -> Iterator[Rule]:
    """Irredundant rules whose full itemset has support between ``s1`` and ``s2``."""
    family = rare_itemsets(db, cfg, max_width=max_width)
    return irredundant_rules(db, family, as_fraction(cfg.c))


# -- rendering -------------------------------------------------------------------

def _empty_text(db: TransactionDB) -> str:
    kinds = {a.kind for a in db.attributes}
    return "{}" if kinds == {"binary"} else "∅"


def antecedent_attrs(db: TransactionDB, rule: Rule) -> list:
    return [a for a in db.attributes if not db.is_attr_bottom(a, rule.x)]


def consequent_attrs(db: TransactionDB, rule: Rule) -> list:
    return [a for a in db.attributes if any(rule.x[k] != rule.z[k] for k in a.factors)]


def rule_text(db: TransactionDB, rule: Rule) -> str:
    ante = [db.token(a, rule.x) for a in antecedent_attrs(db, rule)]
    cons = [db.token(a, rule.z) for a in consequent_attrs(db, rule)]
    left = db.join_tokens(ante) if ante else _empty_text(db)
    right = db.join_tokens(cons) if cons else _empty_text(db)
    return f"{left} ⇒ {right}"


def rule_json(db: TransactionDB, rule: Rule) -> dict:
    return {
        "antecedent": {a.name: db.attribute_value(a, rule.x) for a in antecedent_attrs(db, rule)},
        "consequent": {a.name: db.attribute_value(a, rule.z) for a in consequent_attrs(db, rule)},
        "support": float(rule.support),
        "support_count": rule.support_count,
        "confidence": float(rule.confidence),
        "text": rule_text(db, rule),
    }


# -- maximal k-boxes -------------------------------------------------------------

def default_bbox(points: Sequence, pad=1) -> tuple:
    n = len(points[0])
    lo = tuple(min(p[i] for p in points) - pad for i in range(n))
    hi = tuple(max(p[i] for p in points) + pad for i in range(n))
    return lo, hi


def kbox_space(points: Sequence, bbox: tuple | None = None) -> tuple:
    """Encode boxes on the coordinate grid as a product of ``2n`` chains.

    Factor ``i`` holds the lower face ascending, factor ``n + i`` the upper
    face descending, so the order is reverse containment and the bottom is
    the bounding box. Each point is stored one grid step inward on every
    chain, which makes "row above box" mean "point strictly inside the box".
    Returns ``(db, grids)``.
    """
    points = [tuple(p) for p in points]
    if not points:
        raise PreconditionError("need at least one point")
    n = len(points[0])
    if any(len(p) != n for p in points):
        raise PreconditionError("points have different dimensions")
    lo, hi = bbox if bbox is not None else default_bbox(points)
    for p in points:
        for i in range(n):
            if not lo[i] < p[i] < hi[i]:
                raise PreconditionError(f"point {p} is not inside the bounding box on axis {i}")
    grids = [sorted({lo[i], hi[i], *(p[i] for p in points)}) for i in range(n)]
    fmt = format_number
    factors = [FactorPoset.chain([fmt(v) for v in g]) for g in grids]
    factors += [FactorPoset.chain([fmt(v) for v in reversed(g)]) for g in grids]
    rows = []
    for p in points:
        idx = [g.index(v) for g, v in zip(grids, p)]
        rows.append(tuple(j - 1 for j in idx) + tuple(len(g) - 2 - j for g, j in zip(grids, idx)))
    attrs = [Attribute(f"lower{i}", "chain", (i,)) for i in range(n)]
    attrs += [Attribute(f"upper{i}", "chain", (n + i,)) for i in range(n)]
    return TransactionDB(ProductPoset(factors), rows, attrs), grids


def gen_maximal_kboxes(points: Sequence, k: int, bbox: tuple | None = None) -> Iterator[KBox]:
    """Maximal boxes inside ``bbox`` whose open interior holds at most ``k`` points."""
    if k < 0:
        raise PreconditionError("k must be non-negative")
    if k >= len(points):
        raise PreconditionError(f"k={k} is not below the number of points; the whole box qualifies")
    db, grids = kbox_space(points, bbox)
    n = len(grids)
    border = joint_generate(db.space, db.count, k + 1)
    out = []
    for x in border.X:
        a = tuple(grids[i][x[i]] for i in range(n))
        b = tuple(grids[i][len(grids[i]) - 1 - x[n + i]] for i in range(n))
        if all(ai < bi for ai, bi in zip(a, b)):
            out.append(KBox(a, b, border.support[x]))
    out.sort(key=lambda bx: (bx.lower, bx.upper))
    return iter(out)


def interior_count(points: Sequence, lower, upper) -> int:
    return sum(1 for p in points if all(l < v < u for l, v, u in zip(lower, p, upper)))
