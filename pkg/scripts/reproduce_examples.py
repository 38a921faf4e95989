"""Print the worked examples on the bundled tables (borders, rules, boxes)."""

import argparse
import csv
from dataclasses import dataclass

from posetmine import (fixture_path, gen_generalized_rules, gen_maximal_kboxes, gen_rules, generate_minimal_infrequent,
                       load_fixture, negative_encode, rule_text)
from posetmine.intervals import decode_node


@dataclass
class Config:
    show_all: bool = False


def show_border(db, t, title, cfg):
    b = generate_minimal_infrequent(db, t)
    print(f"== {title}: t={t}, {len(b.X)} minimal infrequent, {len(b.Y)} maximal frequent")
    for x in b.X:
        line = f"  min-infrequent {db.text(x) or db.render(x)}  support={b.support[x]}"
        lat = db.interval_lattices()
        if lat:
            line += "  decoded " + ", ".join(
                f"{a.name}={decode_node(f, x[a.factors[0]]).render(f.fmt)}" for a, f in lat)
        print(line)
    for y in b.Y:
        print(f"  max-frequent   {db.text(y)}  support={b.support[y]}")


def show_rules(db, rules, title, want, cfg):
    texts = [rule_text(db, r) for r in rules]
    print(f"== {title}: {len(texts)} rules")
    for t in texts if cfg.show_all else [t for t in texts if t in want]:
        print(f"  {t}")
    for w in want:
        print(f"  [{'found' if w in texts else 'MISSING'}] {w}")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--all", action="store_true", help="print every rule, not only the highlighted ones")
    cfg = Config(show_all=p.parse_args(argv).all)
    t1, t2, t3, t4 = (load_fixture(i) for i in (1, 2, 3, 4))
    show_border(t1, 4, "Table 1", cfg)
    show_border(t3, 2, "Table 3 with taxonomies", cfg)
    show_border(t4, 2, "Table 4 interval lattices", cfg)
    show_rules(t1, gen_rules(t1, 0.5, 0.4), "Table 1 rules s=0.4 c=0.5",
               ["{Bread, Butter} ⇒ {Cheese, Orange Juice}"], cfg)
    show_rules(t3, gen_generalized_rules(t3, 0.6, 0.3), "Table 3 rules s=0.3 c=0.6", ["Outwear ⇒ Hiking Boots"], cfg)
    show_rules(t2, gen_generalized_rules(t2, 1, 0.4), "Table 2 rules s=0.4 c=1",
               ["⟨Age: 34..38⟩ ⇒ ⟨Married: Yes⟩ and ⟨NumCars: 2⟩"], cfg)
    neg = negative_encode(t1)
    show_rules(neg, gen_generalized_rules(neg, 0.75, 0.3), "Table 1 negative rules s=0.3 c=0.75",
               ["(Butter, ¬Milk) ⇒ (Bread, ¬Yogurt)"], cfg)
    with open(fixture_path("table2.csv"), newline="") as fh:
        pts = [(int(r["Age"]), int(r["NumCars"])) for r in csv.DictReader(fh)]
    for k in (0, 1):
        boxes = list(gen_maximal_kboxes(pts, k))
        print(f"== maximal {k}-boxes on (Age, NumCars): {len(boxes)}")
        for b in boxes:
            print(f"  [{b.lower}, {b.upper}] interior={b.interior_count}")


if __name__ == "__main__":
    main()
