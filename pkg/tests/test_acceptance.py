"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import io
import json
import random
import time
from fractions import Fraction

from posetmine import (apriori_frequent, brute_dualizer, dual_check, fixture_path, gen_generalized_rules,
                       gen_rare_rules, gen_rules, generate_minimal_infrequent, load_fixture, negative_encode)
from posetmine.border import dual_bound_holds
from posetmine.cli import RunConfig, build_parser, run
from posetmine.rules import RareRuleConfig
from oracles import Oracle, binary_db, random_binary_rows, random_instance

T1 = str(fixture_path("table1.csv"))
T2 = str(fixture_path("table2.csv"))
T3 = str(fixture_path("table3.csv"))
T4 = str(fixture_path("table4.csv"))
S2 = str(fixture_path("table2.schema.json"))
S3 = str(fixture_path("table3.schema.json"))
S4 = str(fixture_path("table4.schema.json"))


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(RunConfig.from_args(build_parser().parse_args(list(argv))), out, err)
    return code, out.getvalue(), err.getvalue()


def lines_of(text):
    return [json.loads(l) for l in text.splitlines()]


def verdict(capsys, n, checks, elapsed=None, limit=None):
    """Print one PASS/FAIL line for criterion ``n``; ``checks`` maps a description to a bool."""
    if limit is not None:
        checks[f"runtime {elapsed:.2f}s < {limit}s"] = elapsed < limit
    ok = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    detail = "all checks hold" if ok else "failed: " + "; ".join(failed)
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
    assert ok, detail


def test_criterion_1_example1(capsys):
    start = time.perf_counter()
    code, out, _ = cli("minimal-infrequent", "--input", T1, "--threshold", "4")
    lines = lines_of(out)
    xs = {d["text"] for d in lines if d["stream"] == "minimal-infrequent"}
    ys = {d["text"] for d in lines if d["stream"] == "maximal-frequent"}
    code2, out2, _ = cli("frequent", "--input", T1, "--threshold", "8")
    sup = {d["text"]: d["support"] for d in lines_of(out2)}
    elapsed = time.perf_counter() - start
    checks = {
        "exit 0": code == 0 and code2 == 0,
        "minimal-infrequent contains {Bread, Butter, Cheese, Milk, Orange Juice}":
            "{Bread, Butter, Cheese, Milk, Orange Juice}" in xs,
        "maximal-frequent contains {Bread, Butter, Cheese, Orange Juice}":
            "{Bread, Butter, Cheese, Orange Juice}" in ys,
        "support({Bread, Butter}) == 8": sup.get("{Bread, Butter}") == 8,
    }
    verdict(capsys, 1, checks, elapsed, 1.0)


def test_criterion_2_example2_and_4(capsys):
    start = time.perf_counter()
    code, out, _ = cli("minimal-infrequent", "--input", T3, "--schema", S3, "--threshold", "2")
    lines = lines_of(out)
    xs = [d["coords"] for d in lines if d["stream"] == "minimal-infrequent"]
    ys = [d["coords"] for d in lines if d["stream"] == "maximal-frequent"]
    code2, out2, _ = cli("generalized-rules", "--input", T3, "--schema", S3, "--support", "0.3",
                         "--confidence", "0.6")
    texts = {d["text"] for d in lines_of(out2)}
    elapsed = time.perf_counter() - start
    checks = {
        "exit 0": code == 0 and code2 == 0,
        "(Jacket, Footwear) minimal infrequent": {"Clothes": "Jacket", "Footwear": "Footwear"} in xs,
        "(Outwear, Hiking Boots) maximal frequent": {"Clothes": "Outwear", "Footwear": "Hiking Boots"} in ys,
        "Outwear ⇒ Hiking Boots emitted": "Outwear ⇒ Hiking Boots" in texts,
        "Ski Pants ⇒ Hiking Boots absent": "Ski Pants ⇒ Hiking Boots" not in texts,
        "Jacket ⇒ Hiking Boots absent": "Jacket ⇒ Hiking Boots" not in texts,
    }
    verdict(capsys, 2, checks, elapsed, 1.0)


def test_criterion_3_example3(capsys):
    start = time.perf_counter()
    code, out, _ = cli("rules", "--input", T1, "--support", "0.4", "--confidence", "0.5")
    texts = {d["text"] for d in lines_of(out)}
    elapsed = time.perf_counter() - start
    checks = {
        "exit 0": code == 0,
        "{Bread, Butter} ⇒ {Cheese, Orange Juice} emitted": "{Bread, Butter} ⇒ {Cheese, Orange Juice}" in texts,
        "{Bread, Butter, Cheese} ⇒ {Orange Juice} absent": "{Bread, Butter, Cheese} ⇒ {Orange Juice}" not in texts,
    }
    verdict(capsys, 3, checks, elapsed, 5.0)


def test_criterion_4_example5(capsys):
    start = time.perf_counter()
    code, out, _ = cli("generalized-rules", "--input", T2, "--schema", S2, "--support", "0.4",
                       "--confidence", "1.0")
    lines = lines_of(out)
    texts = {d["text"] for d in lines}
    elapsed = time.perf_counter() - start
    target = "⟨Age: 34..38⟩ ⇒ ⟨Married: Yes⟩ and ⟨NumCars: 2⟩"
    rule = next((d for d in lines if d["text"] == target), None)
    checks = {
        "exit 0": code == 0,
        "rule emitted": rule is not None,
        "antecedent is Age [34,38] only": rule is not None and rule["antecedent"] == {"Age": "[34,38]"},
        "consequent is Married Yes and NumCars [2,2]":
            rule is not None and rule["consequent"] == {"Married": "Yes", "NumCars": "[2,2]"},
        "variant with Married in the antecedent absent":
            "⟨Age: 34..38⟩ and ⟨Married: Yes⟩ ⇒ ⟨NumCars: 2⟩" not in texts,
    }
    verdict(capsys, 4, checks, elapsed, 5.0)


def test_criterion_5_example6(capsys):
    start = time.perf_counter()
    code, out, _ = cli("generalized-rules", "--input", T1, "--negative", "--support", "0.3", "--confidence", "0.75")
    texts = {d["text"] for d in lines_of(out)}
    elapsed = time.perf_counter() - start
    checks = {
        "exit 0": code == 0,
        "(Butter, ¬Milk) ⇒ (Bread, ¬Yogurt) emitted": "(Butter, ¬Milk) ⇒ (Bread, ¬Yogurt)" in texts,
    }
    verdict(capsys, 5, checks, elapsed, 10.0)


def test_criterion_6_example7(capsys):
    start = time.perf_counter()
    c0, out0, _ = cli("kboxes", "--input", T2, "--columns", "Age,NumCars", "--k", "0")
    c1, out1, _ = cli("kboxes", "--input", T2, "--columns", "Age,NumCars", "--k", "1")
    b0 = [(d["lower"], d["upper"]) for d in lines_of(out0)]
    b1 = [(d["lower"], d["upper"]) for d in lines_of(out1)]
    elapsed = time.perf_counter() - start
    checks = {
        "exit 0": c0 == 0 and c1 == 0,
        "B1 = [(25,0),(39,2)] is a maximal empty box": ([25, 0], [39, 2]) in b0,
        "B2 = [(23,0),(39,2)] is a maximal 1-box": ([23, 0], [39, 2]) in b1,
    }
    verdict(capsys, 6, checks, elapsed, 1.0)


def test_criterion_7_oracle_equivalence(capsys):
    start = time.perf_counter()
    rng = random.Random(20240607)
    n_inst = 1000
    bad = {"apriori": 0, "border": 0, "dual verdict": 0, "dual witness": 0}
    for _ in range(n_inst):
        inst = random_instance(rng, max_factors=4, max_nodes=6, max_rows=20)
        o = Oracle(inst.parents, inst.rows)
        db, t = inst.db, inst.t
        if set(apriori_frequent(db, t)) != o.frequent(t):
            bad["apriori"] += 1
        b = generate_minimal_infrequent(db, t)
        if set(b.X) != o.minimal_infrequent(t) or set(b.Y) != o.maximal_frequent(t):
            bad["border"] += 1
        A = [x for x in b.X if rng.random() < 0.7]
        B = [y for y in b.Y if rng.random() < 0.7]
        r = dual_check(inst.space, A, B, base_size=rng.choice([0, 1, 3]))
        ref = brute_dualizer(inst.space, A, B)
        if r.dual != ref.dual:
            bad["dual verdict"] += 1
        elif not r.dual and not o.is_witness(r.witness, A, B):
            bad["dual witness"] += 1
    elapsed = time.perf_counter() - start
    checks = {f"{k} agreement on {n_inst} instances ({v} mismatches)": v == 0 for k, v in bad.items()}
    verdict(capsys, 7, checks, elapsed, 600.0)


def _fixture_dbs():
    t1 = load_fixture(1)
    return {"table1": t1, "table1-negative": negative_encode(t1), "table2": load_fixture(2),
            "table3": load_fixture(3), "table4": load_fixture(4)}


def _sample_pair(rng, space):
    x = tuple(rng.randrange(f.size) for f in space.factors)
    y = x
    for _ in range(rng.randint(1, 4)):
        succ = space.successors(y)
        if not succ:
            break
        y = rng.choice(succ)
    return x, y


def _rule_ok(db, r, s, c) -> bool:
    zs, xs = db.count(r.z), db.count(r.x)
    n = len(db)
    return (zs, xs) == (r.support_count, r.x_count) and zs >= Fraction(s) * n and zs >= Fraction(c) * xs


def test_criterion_8_invariants(capsys):
    rng = random.Random(8)
    partition_bad = bound_bad = 0
    bound_bad_t0 = 0
    n_runs = 1000
    for _ in range(n_runs):
        inst = random_instance(rng, max_factors=4, max_nodes=6, max_rows=20)
        o = Oracle(inst.parents, inst.rows)
        b = generate_minimal_infrequent(inst.db, inst.t)
        for x in o.elements():
            up = any(o.leq(a, x) for a in b.X)
            down = any(o.leq(x, y) for y in b.Y)
            if up == down:
                partition_bad += 1
                break
        if not dual_bound_holds(b, len(inst.rows), inst.t):
            bound_bad += 1
            bound_bad_t0 += inst.t == 0
    dbs = _fixture_dbs()
    for name, db in dbs.items():
        for t in range(len(db) + 2):
            b = generate_minimal_infrequent(db, t)
            n_runs += 1
            if not dual_bound_holds(b, len(db), t):
                bound_bad += 1
                bound_bad_t0 += t == 0

    mono_bad = 0
    for name, db in dbs.items():
        for _ in range(1000):
            x, y = _sample_pair(rng, db.space)
            if db.count(y) > db.count(x):
                mono_bad += 1

    rule_bad = n_rules = 0
    runs = [(dbs["table1"], "0.4", "0.5", gen_rules), (dbs["table3"], "0.3", "0.6", gen_generalized_rules),
            (dbs["table2"], "0.4", "1", gen_generalized_rules),
            (dbs["table1-negative"], "0.3", "0.75", gen_generalized_rules)]
    for db, s, c, fn in runs:
        for r in fn(db, Fraction(c), Fraction(s)):
            n_rules += 1
            rule_bad += not _rule_ok(db, r, s, c)
    for r in gen_rare_rules(dbs["table1"], RareRuleConfig(Fraction(1, 5), Fraction(1, 2), Fraction(4, 5))):
        n_rules += 1
        rule_bad += not _rule_ok(dbs["table1"], r, "1/5", "4/5")
    for seed in range(100):
        rr = random.Random(seed)
        db = binary_db(random_binary_rows(rr, n_items=6, n_rows=10))
        for r in gen_rules(db, Fraction(1, 2), Fraction(1, 5)):
            n_rules += 1
            rule_bad += not _rule_ok(db, r, "1/5", "1/2")

    checks = {
        f"partition X+ / Y- on 1000 oracle instances ({partition_bad} violations)": partition_bad == 0,
        f"dual bound on {n_runs} runs ({bound_bad} violations, {bound_bad_t0} of them at t=0)": bound_bad == 0,
        f"anti-monotonicity on 1000 pairs x {len(dbs)} datasets ({mono_bad} violations)": mono_bad == 0,
        f"rule inequalities on {n_rules} rules ({rule_bad} violations)": rule_bad == 0,
    }
    verdict(capsys, 8, checks)


def test_criterion_9_determinism(capsys):
    cases = []
    for inp, schema in ((T1, None), (T2, S2), (T3, S3), (T4, S4)):
        base = ["--input", inp] + (["--schema", schema] if schema else [])
        cases += [
            ["frequent", *base, "--threshold", "2"],
            ["infrequent", *base, "--threshold", "2"],
            ["minimal-infrequent", *base, "--threshold", "2"],
            ["generalized-rules", *base, "--support", "0.3", "--confidence", "0.6"],
            ["rules", *base, "--support", "0.3", "--confidence", "0.6"],
            ["rare-rules", *base, "--s1", "0.2", "--s2", "0.5", "--confidence", "0.6"],
        ]
    cases += [
        ["frequent", "--input", T1, "--negative", "--support", "0.3"],
        ["generalized-rules", "--input", T1, "--negative", "--support", "0.3", "--confidence", "0.75"],
        ["kboxes", "--input", T2, "--columns", "Age,NumCars", "--k", "0"],
        ["kboxes", "--input", T2, "--columns", "Age,NumCars", "--k", "1"],
    ]
    differ = []
    for argv in cases:
        a = cli(*argv)
        b = cli(*argv)
        c = cli(*argv, "--workers", "4")
        if not (a == b == c):
            differ.append(" ".join(argv[:1]))
    checks = {f"byte-identical output on {len(cases)} runs x3 ({len(differ)} differ)": not differ}
    verdict(capsys, 9, checks)
