"""Transaction databases over poset products: ingestion, support counting, rendering."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .errors import IngestError, PosetStructureError
from .intervals import (IntervalLattice, build_lattice, chain_pair, elementary_intervals,
                        format_minutes, parse_minutes)
from .poset import FactorPoset, ProductPoset, _bits

ID_COLUMNS = ("TID", "ID", "Id", "id", "tid")
NEG_BOTTOM, NEG_PRESENT, NEG_ABSENT = "*", "+", "-"


@dataclass(frozen=True)
class Attribute:
    """A user-facing column and the factor(s) that encode it.

    Quantitative attributes occupy two chain factors (lower bound, upper
    bound); every other kind occupies one.
    """

    name: str
    kind: str
    factors: tuple
    values: tuple = ()


@dataclass(frozen=True)
class SupportQueryResult:
    count: int
    witnesses: tuple | None = None


def as_fraction(x) -> Fraction:
    """Exact value of a user-supplied ratio; floats go through their shortest repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def threshold_from_fraction(s, n_rows: int) -> int:
    """Smallest integer support meeting "at least a fraction ``s`` of the rows"."""
    return math.ceil(as_fraction(s) * n_rows)


def format_number(v) -> str:
    if isinstance(v, Decimal):
        v = v.normalize()
        return str(int(v)) if v == v.to_integral_value() else format(v, "f")
    return str(v)


def parse_number(text: str, row=None, column=None):
    try:
        d = Decimal(text.strip())
    except InvalidOperation:
        raise IngestError(f"not a number: {text!r}", row, column) from None
    if not d.is_finite():
        raise IngestError(f"not a finite number: {text!r}", row, column)
    return int(d) if d == d.to_integral_value() else d


class TransactionDB:
    """A multiset of rows over a :class:`ProductPoset`.

    Support counting uses one bitmask per factor node: bit ``r`` of
    ``masks[i][v]`` is set when row ``r`` has a coordinate above ``v`` in
    factor ``i``. The support of a vector is the popcount of the AND of its
    coordinates' masks.
    """

    def __init__(self, space: ProductPoset, rows: Iterable, attributes: Sequence | None = None,
                 row_ids: Sequence | None = None, validate: bool = True):
        self.space = space
        self.rows = [tuple(r) for r in rows]
        if validate:
            for r in self.rows:
                space.check(r)
        if attributes is None:
            attributes = [Attribute(f"a{i}", f.kind, (i,)) for i, f in enumerate(space.factors)]
        self.attributes = tuple(attributes)
        self.row_ids = tuple(row_ids) if row_ids is not None else tuple(f"T{i + 1}" for i in range(len(self.rows)))
        self._masks = None

    def __len__(self) -> int:
        return len(self.rows)

    def __repr__(self) -> str:
        return f"<TransactionDB rows={len(self.rows)} space={self.space!r}>"

    @property
    def all_rows(self) -> int:
        return (1 << len(self.rows)) - 1

    @property
    def masks(self) -> list:
        if self._masks is None:
            masks = []
            for i, f in enumerate(self.space.factors):
                at = [0] * f.size
                for r, row in enumerate(self.rows):
                    at[row[i]] |= 1 << r
                m = [0] * f.size
                for v in range(f.size):
                    acc = 0
                    for w in _bits(f.up[v]):
                        acc |= at[w]
                    m[v] = acc
                masks.append(m)
            self._masks = masks
        return self._masks

    def row_mask(self, x) -> int:
        m = self.all_rows
        for mi, v in zip(self.masks, x):
            m &= mi[v]
            if not m:
                break
        return m

    def count(self, x) -> int:
        return self.row_mask(x).bit_count()

    def count_many(self, xs: Sequence, workers: int = 1) -> list:
        if workers <= 1 or len(xs) < 2 * workers:
            return [self.count(x) for x in xs]
        from concurrent.futures import ThreadPoolExecutor
        chunk = -(-len(xs) // workers)
        parts = [xs[i:i + chunk] for i in range(0, len(xs), chunk)]
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return [c for part in ex.map(lambda p: [self.count(x) for x in p], parts) for c in part]

    def multiplicity(self, x) -> int:
        x = tuple(x)
        return sum(1 for r in self.rows if r == x)

    def count_strict(self, x) -> int:
        """Rows strictly above ``x`` in the product order."""
        return self.count(x) - self.multiplicity(x)

    # -- rendering ---------------------------------------------------------

    def attribute_value(self, attr: Attribute, x) -> str:
        if attr.kind == "quantitative":
            i, j = (x[k] for k in attr.factors)
            vals = attr.values
            lo, hi = vals[i], vals[len(vals) - 1 - j]
            if lo > hi:
                return "∅"
            return f"[{format_number(lo)},{format_number(hi)}]"
        (k,) = attr.factors
        return str(self.space.factors[k].labels[x[k]])

    def is_attr_bottom(self, attr: Attribute, x) -> bool:
        return all(x[k] == self.space.factors[k].bottom for k in attr.factors)

    def render(self, x) -> dict:
        return {a.name: self.attribute_value(a, x) for a in self.attributes}

    def token(self, attr: Attribute, x) -> str:
        """Human-readable condition for one non-bottom attribute of ``x``."""
        val = self.attribute_value(attr, x)
        if attr.kind == "binary":
            return attr.name
        if attr.kind == "negative":
            return attr.name if val == NEG_PRESENT else f"¬{attr.name}"
        if attr.kind == "taxonomy":
            return val
        if attr.kind == "quantitative":
            i, j = (x[k] for k in attr.factors)
            vals = attr.values
            lo, hi = vals[i], vals[len(vals) - 1 - j]
            if lo == hi:
                return f"⟨{attr.name}: {format_number(lo)}⟩"
            return f"⟨{attr.name}: {format_number(lo)}..{format_number(hi)}⟩"
        return f"⟨{attr.name}: {val}⟩"

    def text(self, x, attrs: Iterable | None = None) -> str:
        attrs = [a for a in (self.attributes if attrs is None else attrs) if not self.is_attr_bottom(a, x)]
        return self.join_tokens([self.token(a, x) for a in attrs])

    def join_tokens(self, tokens: list) -> str:
        kinds = {a.kind for a in self.attributes}
        if kinds == {"binary"}:
            return "{" + ", ".join(tokens) + "}"
        if kinds == {"negative"}:
            return "(" + ", ".join(tokens) + ")"
        if kinds <= {"taxonomy"}:
            return ", ".join(tokens) if len(tokens) == 1 else "(" + ", ".join(tokens) + ")"
        return " and ".join(tokens)

    def valid_box(self, x) -> bool:
        """False when a quantitative attribute's chain pair encodes an empty interval."""
        for a in self.attributes:
            if a.kind == "quantitative":
                i, j = (x[k] for k in a.factors)
                if i > len(a.values) - 1 - j:
                    return False
        return True

    def interval_lattices(self) -> list:
        return [(a, self.space.factors[a.factors[0]]) for a in self.attributes if a.kind == "interval"]


# -- support queries ----------------------------------------------

def support(p, db: TransactionDB, witnesses: bool = False) -> SupportQueryResult:
    db.space.check(p)
    m = db.row_mask(tuple(p))
    ids = tuple(db.row_ids[r] for r in _bits(m)) if witnesses else None
    return SupportQueryResult(m.bit_count(), ids)


def strict_support(p, db: TransactionDB, witnesses: bool = False) -> SupportQueryResult:
    db.space.check(p)
    p = tuple(p)
    m = db.row_mask(p)
    for r in list(_bits(m)):
        if db.rows[r] == p:
            m &= ~(1 << r)
    ids = tuple(db.row_ids[r] for r in _bits(m)) if witnesses else None
    return SupportQueryResult(m.bit_count(), ids)


# -- ingestion -----------------------------------------------------------------

def _open_text(source) -> str:
    if isinstance(source, Path):
        return source.read_text(encoding="utf-8")
    if isinstance(source, str) and source and "\n" not in source and Path(source).is_file():
        return Path(source).read_text(encoding="utf-8")
    if isinstance(source, str):
        return source
    return source.read()


def read_table(source, id_column: str | None = None) -> tuple:
    """Parse a CSV with a header row. Returns ``(header, row_ids, cells)``."""
    text = _open_text(source)
    reader = csv.reader(io.StringIO(text))
    lines = [r for r in reader if r and any(c.strip() for c in r)]
    if not lines:
        raise IngestError("empty input: no header row")
    header = [h.strip() for h in lines[0]]
    body = [[c.strip() for c in r] for r in lines[1:]]
    for k, r in enumerate(body, start=2):
        if len(r) != len(header):
            raise IngestError(f"expected {len(header)} cells, found {len(r)}", row=k)
    if id_column is None and header and header[0] in ID_COLUMNS:
        id_column = header[0]
    if id_column is not None:
        if id_column not in header:
            raise IngestError("id column not found", column=id_column)
        j = header.index(id_column)
        ids = [r[j] for r in body]
        header = header[:j] + header[j + 1:]
        body = [r[:j] + r[j + 1:] for r in body]
    else:
        ids = [f"T{i + 1}" for i in range(len(body))]
    if not body:
        raise IngestError("dataset has no rows")
    return header, ids, body


def _binary_cell(cell: str, row: int, column: str) -> int:
    if cell not in ("0", "1"):
        raise IngestError(f"expected 0 or 1, found {cell!r}", row, column)
    return int(cell)


def ingest_binary(source, id_column: str | None = None) -> TransactionDB:
    """0/1 item table; each item becomes a chain ``0 < 1``."""
    header, ids, body = read_table(source, id_column)
    factors = [FactorPoset.chain(["0", "1"]) for _ in header]
    rows = [tuple(_binary_cell(c, k, h) for c, h in zip(r, header)) for k, r in enumerate(body, start=2)]
    attrs = [Attribute(h, "binary", (i,)) for i, h in enumerate(header)]
    return TransactionDB(ProductPoset(factors), rows, attrs, ids)


def read_taxonomy(source, bottom: str = "Item") -> FactorPoset:
    """Tree from ``child<TAB>parent`` lines, with ``bottom`` adjoined below every root."""
    text = _open_text(source)
    edges = []
    for k, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.rstrip("\n").split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise IngestError("expected 'child<TAB>parent'", row=k)
        edges.append((parts[0].strip(), parts[1].strip()))
    if any(bottom in e for e in edges):
        raise IngestError(f"taxonomy may not use the reserved label {bottom!r}")
    try:
        return FactorPoset.from_parent_edges(edges, bottom=bottom)
    except PosetStructureError as e:
        raise IngestError(f"bad taxonomy: {e}") from None


def read_chain(source) -> FactorPoset:
    """Chain from one label per line, bottom first."""
    labels = [ln.strip() for ln in _open_text(source).splitlines() if ln.strip()]
    return FactorPoset.chain(labels)


def ingest_taxonomy(source, taxonomies, id_column: str | None = None) -> TransactionDB:
    """0/1 item table whose columns are nodes of the given taxonomies.

    ``taxonomies`` maps an attribute name to a taxonomy file (or a prepared
    :class:`FactorPoset`). Each row picks, per taxonomy, the deepest marked
    item; rows with no marked item get the ``Item`` bottom.
    """
    header, ids, body = read_table(source, id_column)
    names, factors = [], []
    for name, tax in dict(taxonomies).items():
        names.append(name)
        factors.append(tax if isinstance(tax, FactorPoset) else read_taxonomy(tax))
    owner = {}
    for col in header:
        hits = [t for t, f in enumerate(factors) if col in f._index and f.node(col) != f.bottom]
        if not hits:
            raise IngestError("item not found in any taxonomy", column=col)
        if len(hits) > 1:
            raise IngestError("item appears in several taxonomies", column=col)
        owner[col] = hits[0]
    rows = []
    for k, r in enumerate(body, start=2):
        coords = [f.bottom for f in factors]
        for cell, col in zip(r, header):
            if _binary_cell(cell, k, col):
                t = owner[col]
                f, v = factors[t], factors[t].node(col)
                cur = coords[t]
                if f.leq(cur, v):
                    coords[t] = v
                elif not f.leq(v, cur):
                    raise IngestError(f"incomparable items {f.labels[cur]!r} and {col!r} in one taxonomy",
                                      k, col)
        rows.append(tuple(coords))
    attrs = [Attribute(n, "taxonomy", (i,)) for i, n in enumerate(names)]
    return TransactionDB(ProductPoset(factors), rows, attrs, ids)


def _interval_cell(cell: str, row: int, column: str):
    if cell == "-":
        return None
    a, sep, b = cell.partition("-")
    if not sep:
        raise IngestError(f"malformed interval {cell!r}, expected H:MM-H:MM or -", row, column)
    try:
        lo, hi = parse_minutes(a), parse_minutes(b)
    except ValueError:
        raise IngestError(f"malformed interval {cell!r}", row, column) from None
    if lo > hi:
        raise IngestError(f"interval {cell!r} ends before it starts", row, column)
    return (lo, hi)


def _interval_factor(cells: list) -> IntervalLattice:
    present = [x for x in cells if x is not None]
    gens = elementary_intervals(cells) + present
    return build_lattice(gens, with_bottom=True, fmt=format_minutes, epsilon=1)


def ingest_intervals(source, id_column: str | None = None) -> TransactionDB:
    """Table of ``H:MM-H:MM`` cells (``-`` for no usage); one interval lattice per column."""
    header, ids, body = read_table(source, id_column)
    return _build_from_kinds(header, ids, body, {h: "interval" for h in header})


def _build_from_kinds(header, ids, body, kinds: dict) -> TransactionDB:
    factors, attrs, columns = [], [], []
    for j, col in enumerate(header):
        kind = kinds[col]
        cells = [r[j] for r in body]
        if kind == "binary":
            vals = [_binary_cell(c, k, col) for k, c in enumerate(cells, start=2)]
            attrs.append(Attribute(col, "binary", (len(factors),)))
            factors.append(FactorPoset.chain(["0", "1"]))
            columns.append([(v,) for v in vals])
        elif kind == "categorical":
            for k, c in enumerate(cells, start=2):
                if not c or c == NEG_BOTTOM:
                    raise IngestError("empty categorical value", k, col)
            values = list(dict.fromkeys(cells))
            f = FactorPoset.star(NEG_BOTTOM, values)
            attrs.append(Attribute(col, "categorical", (len(factors),)))
            factors.append(f)
            columns.append([(f.node(c),) for c in cells])
        elif kind == "quantitative":
            nums = [parse_number(c, k, col) for k, c in enumerate(cells, start=2)]
            left, right, vals = chain_pair(nums, format_number)
            pos = {v: i for i, v in enumerate(vals)}
            m = len(vals)
            attrs.append(Attribute(col, "quantitative", (len(factors), len(factors) + 1), vals))
            factors += [left, right]
            columns.append([(pos[v], m - 1 - pos[v]) for v in nums])
        elif kind == "interval":
            ivs = [_interval_cell(c, k, col) for k, c in enumerate(cells, start=2)]
            lat = _interval_factor(ivs)
            attrs.append(Attribute(col, "interval", (len(factors),)))
            factors.append(lat)
            columns.append([(lat.node_of(x),) for x in ivs])
        else:
            raise IngestError(f"unknown column kind {kind!r}", column=col)
    rows = [tuple(c for col in columns for c in col[r]) for r in range(len(body))]
    return TransactionDB(ProductPoset(factors), rows, attrs, ids)


def ingest_quantitative(source, schema: dict) -> TransactionDB:
    """Mixed binary / categorical / quantitative / interval table driven by a schema.

    ``schema["columns"]`` maps column name to a kind string (or ``{"kind": ...}``).
    """
    header, ids, body = read_table(source, schema.get("id_column"))
    declared = schema.get("columns", {})
    default = schema.get("default_kind")
    kinds = {}
    for col, v in declared.items():
        if col not in header:
            raise IngestError("column declared in schema is missing from the data", column=col)
        kinds[col] = v["kind"] if isinstance(v, dict) else v
    for col in header:
        if col not in kinds:
            if default is None:
                raise IngestError("column has no declared kind in the schema", column=col)
            kinds[col] = default
    return _build_from_kinds(header, ids, body, kinds)


def load_schema(path) -> tuple:
    path = Path(path)
    try:
        schema = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise IngestError(f"cannot read schema {path}: {e}") from None
    return schema, path.parent


def load_database(source, schema: dict | None = None, base_dir: Path | None = None) -> TransactionDB:
    """Dispatch on the schema: none means a binary item table."""
    if schema is None:
        return ingest_binary(source)
    base_dir = Path(base_dir) if base_dir is not None else Path(".")
    if "taxonomies" in schema:
        taxes = {name: base_dir / p for name, p in schema["taxonomies"].items()}
        return ingest_taxonomy(source, taxes, schema.get("id_column"))
    return ingest_quantitative(source, schema)


def negative_encode(db: TransactionDB) -> TransactionDB:
    """Replace each binary item by the star ``{*, +, -}``: present -> ``+``, absent -> ``-``."""
    for a in db.attributes:
        f = db.space.factors[a.factors[0]]
        if a.kind != "binary" or f.labels != ("0", "1"):
            raise IngestError(f"negative encoding needs a binary database; {a.name!r} is {a.kind}")
    star = FactorPoset.star(NEG_BOTTOM, [NEG_PRESENT, NEG_ABSENT])
    plus, minus = star.node(NEG_PRESENT), star.node(NEG_ABSENT)
    rows = [tuple(plus if v == 1 else minus for v in r) for r in db.rows]
    attrs = [Attribute(a.name, "negative", a.factors) for a in db.attributes]
    return TransactionDB(ProductPoset([star] * db.space.n), rows, attrs, db.row_ids)
