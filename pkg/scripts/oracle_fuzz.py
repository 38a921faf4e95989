"""Compare apriori, border generation and the tree dualizer with brute force on random instances."""

import argparse
import random
import sys
import time
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from oracles import Oracle, random_instance  # noqa: E402
from posetmine import apriori_frequent, brute_dualizer, dual_check, generate_minimal_infrequent  # noqa: E402
from posetmine.dualize import DualStats  # noqa: E402


@dataclass
class FuzzConfig:
    instances: int = 1000
    seed: int = 0
    max_factors: int = 4
    max_nodes: int = 6
    max_rows: int = 20
    base_size: int = 0


def fuzz(cfg: FuzzConfig) -> int:
    rng = random.Random(cfg.seed)
    stats = DualStats()
    failures = 0
    start = time.perf_counter()
    for k in range(cfg.instances):
        inst = random_instance(rng, cfg.max_factors, cfg.max_nodes, cfg.max_rows)
        o = Oracle(inst.parents, inst.rows)
        db, t = inst.db, inst.t
        problems = []
        if set(apriori_frequent(db, t)) != o.frequent(t):
            problems.append("apriori")
        b = generate_minimal_infrequent(db, t, check=True)
        if set(b.X) != o.minimal_infrequent(t) or set(b.Y) != o.maximal_frequent(t):
            problems.append("border")
        A = [x for x in b.X if rng.random() < 0.7]
        B = [y for y in b.Y if rng.random() < 0.7]
        r = dual_check(inst.space, A, B, base_size=cfg.base_size, check=True, stats=stats)
        if r.dual != brute_dualizer(inst.space, A, B).dual:
            problems.append("dual")
        if problems:
            failures += 1
            print(f"instance {k}: {', '.join(problems)}: {inst}")
    print(f"{cfg.instances} instances, {failures} failures, {time.perf_counter() - start:.1f}s")
    print(f"dualizer calls {stats.calls}, max depth {stats.max_depth}, branches {dict(stats.branches)}")
    return failures


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(FuzzConfig()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=int, default=default)
    cfg = FuzzConfig(**vars(p.parse_args(argv)))
    sys.exit(1 if fuzz(cfg) else 0)


if __name__ == "__main__":
    main()
