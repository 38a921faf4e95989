"""Time level-wise mining and border generation on synthetic binary and taxonomy data."""

import argparse
import random
import time
from dataclasses import dataclass

from posetmine import FactorPoset, ProductPoset, TransactionDB, apriori_frequent, generate_minimal_infrequent
from posetmine.apriori import AprioriStats


@dataclass
class BenchConfig:
    items: int = 14
    rows: int = 400
    density: float = 0.35
    support: float = 0.05
    seed: int = 1
    workers: int = 1


def synthetic(cfg: BenchConfig) -> TransactionDB:
    rng = random.Random(cfg.seed)
    space = ProductPoset([FactorPoset.chain(["0", "1"]) for _ in range(cfg.items)])
    rows = [tuple(int(rng.random() < cfg.density) for _ in range(cfg.items)) for _ in range(cfg.rows)]
    return TransactionDB(space, rows)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(BenchConfig()).items():
        p.add_argument(f"--{name}", type=type(default), default=default)
    cfg = BenchConfig(**vars(p.parse_args(argv)))
    db = synthetic(cfg)
    t = max(1, round(cfg.support * cfg.rows))
    stats = AprioriStats()
    start = time.perf_counter()
    n = sum(1 for _ in apriori_frequent(db, t, workers=cfg.workers, stats=stats))
    mid = time.perf_counter()
    b = generate_minimal_infrequent(db, t)
    end = time.perf_counter()
    print(f"{cfg}")
    print(f"apriori: {n} frequent sets, {stats.levels} levels, widths {stats.width}, {mid - start:.2f}s")
    print(f"border: {len(b.X)} minimal infrequent, {len(b.Y)} maximal frequent, "
          f"{b.iterations} duality calls, {end - mid:.2f}s")


if __name__ == "__main__":
    main()
