"""Command-line front end. Output is JSON lines, sorted, byte-for-byte reproducible."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from decimal import Decimal
from pathlib import Path

from .apriori import apriori_levels, infrequent_levels
from .border import generate_minimal_infrequent
from .dataset import (TransactionDB, load_database, load_schema, negative_encode, parse_number,
                      read_table, threshold_from_fraction)
from .dualize import dual_check
from .errors import (DecodeError, IngestError, NotDualizableError, PosetMineError, PosetStructureError,
                     ResourceLimitError, InvalidElementError)
from .intervals import decode_node
from .rules import (RareRuleConfig, gen_generalized_rules, gen_maximal_kboxes, gen_rare_rules, gen_rules,
                    rule_json)

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_RESOURCE = 0, 2, 3, 4


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    schema: str | None = None
    threshold: int | None = None
    support: str | None = None
    confidence: str | None = None
    s1: str | None = None
    s2: str | None = None
    k: int | None = None
    negative: bool = False
    out: str | None = None
    out_maximal: str | None = None
    workers: int = 1
    cap_level_width: int | None = None
    cap_depth: int = 400
    columns: str | None = None
    bbox: str | None = None
    instance: str | None = None

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        return cls(**{k: v for k, v in vars(ns).items() if k in cls.__dataclass_fields__})


def _ratio(text, name, allow_zero=False):
    from .dataset import as_fraction
    try:
        f = as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"--{name} must be a number, got {text!r}") from None
    if not (0 <= f <= 1 if allow_zero else 0 < f <= 1):
        raise ConfigError(f"--{name} must lie in {'[0, 1]' if allow_zero else '(0, 1]'}, got {text}")
    return f


def _load(cfg: RunConfig) -> TransactionDB:
    if not cfg.input:
        raise ConfigError("--input is required")
    path = Path(cfg.input)
    if not path.exists():
        raise IngestError(f"input file not found: {path}")
    schema, base = (None, None)
    if cfg.schema:
        schema, base = load_schema(cfg.schema)
    db = load_database(path, schema, base)
    if cfg.negative:
        db = negative_encode(db)
    return db


def _threshold(cfg: RunConfig, db: TransactionDB) -> int:
    if (cfg.threshold is None) == (cfg.support is None):
        raise ConfigError("give exactly one of --threshold and --support")
    if cfg.threshold is not None:
        if not 0 <= cfg.threshold <= len(db) + 1:
            raise ConfigError(f"--threshold must lie in [0, {len(db) + 1}]")
        return cfg.threshold
    return threshold_from_fraction(_ratio(cfg.support, "support", allow_zero=True), len(db))


def _elem(db: TransactionDB, x, support, **extra) -> dict:
    d = {"level": db.space.level(x), "coords": db.render(x), "text": db.text(x), "support": support}
    d.update(extra)
    return d


def _decoded(db: TransactionDB, x) -> dict | None:
    lat = db.interval_lattices()
    if not lat:
        return None
    out = {}
    for attr, f in lat:
        try:
            out[attr.name] = decode_node(f, x[attr.factors[0]]).as_json(f.fmt)
        except DecodeError:
            out[attr.name] = {"kind": "undecodable"}
    return out


def _sorted(db: TransactionDB, items):
    return sorted(items, key=lambda p: (db.space.level(p[0]), p[0]))


def _write(lines, path, stream):
    text = "".join(json.dumps(d, ensure_ascii=False) + "\n" for d in lines)
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        stream.write(text)


def cmd_frequent(cfg: RunConfig, out, err) -> int:
    db = _load(cfg)
    t = _threshold(cfg, db)
    items = [(x, s) for _, x, s in apriori_levels(db, t, max_width=cfg.cap_level_width, workers=cfg.workers)]
    lines = [_elem(db, x, s) for x, s in _sorted(db, items)]
    _write(lines, cfg.out, out)
    top = max((d["level"] for d in lines), default=None)
    err.write(f"frequent: {len(lines)} elements at t={t}, max level {top}\n")
    return EXIT_OK


def cmd_infrequent(cfg: RunConfig, out, err) -> int:
    db = _load(cfg)
    t = _threshold(cfg, db)
    items = [(x, s) for _, x, s in infrequent_levels(db, t, max_width=cfg.cap_level_width, workers=cfg.workers)]
    lines = [_elem(db, x, s) for x, s in _sorted(db, items)]
    _write(lines, cfg.out, out)
    err.write(f"infrequent: {len(lines)} elements at t={t}\n")
    return EXIT_OK


def cmd_minimal_infrequent(cfg: RunConfig, out, err) -> int:
    db = _load(cfg)
    t = _threshold(cfg, db)
    border = generate_minimal_infrequent(db, t, max_depth=cfg.cap_depth)
    xs = []
    for x in border.X:
        extra = {"stream": "minimal-infrequent"}
        dec = _decoded(db, x)
        if dec is not None:
            extra["decoded"] = dec
        xs.append(_elem(db, x, border.support[x], **extra))
    ys = [_elem(db, y, border.support[y], stream="maximal-frequent") for y in border.Y]
    if cfg.out_maximal:
        _write(xs, cfg.out, out)
        _write(ys, cfg.out_maximal, out)
    else:
        _write(xs + ys, cfg.out, out)
    err.write(f"minimal-infrequent: {len(xs)} minimal infrequent, {len(ys)} maximal frequent at t={t}\n")
    return EXIT_OK


def _rule_lines(db, rules) -> list:
    rules = sorted(rules, key=lambda r: (db.space.level(r.z), r.z, db.space.level(r.x), r.x))
    return [rule_json(db, r) for r in rules]


def cmd_rules(cfg: RunConfig, out, err, generalized: bool = False) -> int:
    db = _load(cfg)
    if cfg.support is None or cfg.confidence is None:
        raise ConfigError("--support and --confidence are required")
    if cfg.threshold is not None:
        raise ConfigError("rules take --support, not --threshold")
    s = _ratio(cfg.support, "support", allow_zero=True)
    c = _ratio(cfg.confidence, "confidence")
    if generalized:
        rules = gen_generalized_rules(db, c, s, max_width=cfg.cap_level_width, workers=cfg.workers)
    else:
        try:
            rules = gen_rules(db, c, s)
        except PosetMineError as e:
            raise ConfigError(f"{e}; use generalized-rules for non-binary data") from None
    lines = _rule_lines(db, rules)
    _write(lines, cfg.out, out)
    err.write(f"{'generalized-' if generalized else ''}rules: {len(lines)} rules\n")
    return EXIT_OK


def cmd_rare(cfg: RunConfig, out, err) -> int:
    db = _load(cfg)
    if cfg.s1 is None or cfg.s2 is None:
        raise ConfigError("--s1 and --s2 are required")
    try:
        rc = RareRuleConfig(_ratio(cfg.s1, "s1"), _ratio(cfg.s2, "s2"),
                            _ratio(cfg.confidence or "1", "confidence"))
    except ValueError as e:
        raise ConfigError(str(e)) from None
    lines = _rule_lines(db, gen_rare_rules(db, rc, max_width=cfg.cap_level_width))
    _write(lines, cfg.out, out)
    err.write(f"rare-rules: {len(lines)} rules\n")
    return EXIT_OK


def _num_json(v):
    if isinstance(v, Decimal):
        return float(v)
    return v


def cmd_boxes(cfg: RunConfig, out, err) -> int:
    if cfg.k is None:
        raise ConfigError("--k is required")
    if not cfg.input:
        raise ConfigError("--input is required")
    if not Path(cfg.input).exists():
        raise IngestError(f"input file not found: {cfg.input}")
    header, _, body = read_table(Path(cfg.input))
    cols = [c.strip() for c in cfg.columns.split(",")] if cfg.columns else header
    for c in cols:
        if c not in header:
            raise IngestError("column not found", column=c)
    idx = [header.index(c) for c in cols]
    points = [tuple(parse_number(r[j], k, header[j]) for j in idx) for k, r in enumerate(body, start=2)]
    bbox = None
    if cfg.bbox:
        try:
            nums = [parse_number(v) for v in cfg.bbox.split(",")]
        except IngestError as e:
            raise ConfigError(f"bad --bbox: {e}") from None
        if len(nums) != 2 * len(cols):
            raise ConfigError(f"--bbox needs {2 * len(cols)} numbers: lower corner then upper corner")
        bbox = (tuple(nums[:len(cols)]), tuple(nums[len(cols):]))
    try:
        boxes = list(gen_maximal_kboxes(points, cfg.k, bbox))
    except PosetMineError as e:
        raise ConfigError(str(e)) from None
    lines = [{"lower": [_num_json(v) for v in b.lower], "upper": [_num_json(v) for v in b.upper],
              "interior_count": b.interior_count} for b in boxes]
    _write(lines, cfg.out, out)
    err.write(f"kboxes: {len(lines)} maximal {cfg.k}-boxes over columns {', '.join(cols)}\n")
    return EXIT_OK


def cmd_dualize(cfg: RunConfig, out, err) -> int:
    db = _load(cfg)
    if not cfg.instance:
        raise ConfigError("--instance is required")
    try:
        inst = json.loads(Path(cfg.instance).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise IngestError(f"cannot read instance: {e}") from None
    space = db.space
    try:
        A = [space.parse(a) for a in inst.get("A", [])]
        B = [space.parse(b) for b in inst.get("B", [])]
    except (InvalidElementError, KeyError) as e:
        raise IngestError(f"bad element in instance: {e}") from None
    res = dual_check(space, A, B, max_depth=cfg.cap_depth)
    line = {"dual": res.dual, "witness": None if res.witness is None else list(space.labels(res.witness))}
    _write([line], cfg.out, out)
    err.write(f"dualize: {'dual' if res.dual else 'not dual'}\n")
    return EXIT_OK


COMMANDS = {
    "frequent": cmd_frequent,
    "infrequent": cmd_infrequent,
    "minimal-infrequent": cmd_minimal_infrequent,
    "rules": cmd_rules,
    "generalized-rules": lambda cfg, out, err: cmd_rules(cfg, out, err, generalized=True),
    "rare-rules": cmd_rare,
    "kboxes": cmd_boxes,
    "dualize": cmd_dualize,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="posetmine", description="Mining over products of posets.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--input")
        s.add_argument("--schema")
        s.add_argument("--threshold", type=int)
        s.add_argument("--support")
        s.add_argument("--confidence")
        s.add_argument("--s1")
        s.add_argument("--s2")
        s.add_argument("--k", type=int)
        s.add_argument("--negative", action="store_true")
        s.add_argument("--out")
        s.add_argument("--out-maximal", dest="out_maximal")
        s.add_argument("--workers", type=int, default=1)
        s.add_argument("--cap-level-width", dest="cap_level_width", type=int)
        s.add_argument("--cap-depth", dest="cap_depth", type=int, default=400)
        s.add_argument("--columns")
        s.add_argument("--bbox")
        s.add_argument("--instance")
    return p


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        return COMMANDS[cfg.command](cfg, out, err)
    except ConfigError as e:
        err.write(f"error: {e}\n")
        return EXIT_CONFIG
    except ResourceLimitError as e:
        err.write(f"resource limit: {e}\n")
        return EXIT_RESOURCE
    except (IngestError, NotDualizableError, DecodeError, PosetStructureError, InvalidElementError) as e:
        err.write(f"data error: {e}\n")
        return EXIT_DATA
    except PosetMineError as e:
        err.write(f"error: {e}\n")
        return EXIT_CONFIG


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    return run(RunConfig.from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
