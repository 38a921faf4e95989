"""Frequent elements, borders, and association rules over products of posets."""

from importlib.resources import files
from pathlib import Path

from .apriori import apriori_frequent, apriori_infrequent, apriori_levels, infrequent_levels
from .border import (Border, generate_minimal_infrequent, joint_generate, max_antichain, maximalize,
                     min_antichain, minimalize)
from .dataset import (Attribute, TransactionDB, ingest_binary, ingest_intervals, ingest_quantitative,
                      ingest_taxonomy, load_database, load_schema, negative_encode, strict_support, support,
                      threshold_from_fraction)
from .dualize import DualResult, brute_dualizer, dual_check, fdtb, pd_exhaustive
from .errors import (DecodeError, IngestError, InvalidElementError, NotDualizableError, PosetMineError,
                     PosetStructureError, PreconditionError, ResourceLimitError)
from .intervals import build_lattice, decode_minimal_infrequent, decode_node
from .poset import FactorPoset, ProductPoset, dual_view, immediate_predecessors, immediate_successors, leq, level, meet
from .rules import (KBox, RareRuleConfig, Rule, check_rule_implication, gen_generalized_rules,
                    gen_maximal_kboxes, gen_rare_rules, gen_rules, rule_text)


def fixture_path(name: str) -> Path:
    """Path of a bundled example dataset (``table1.csv`` ... ``table4.csv`` and their schemas)."""
    return Path(str(files("posetmine.fixtures") / name))


def load_fixture(table: int) -> TransactionDB:
    """Load bundled Table ``table`` (1 to 4) with its schema."""
    data = fixture_path(f"table{table}.csv")
    schema_file = fixture_path(f"table{table}.schema.json")
    if schema_file.exists():
        schema, base = load_schema(schema_file)
        return load_database(data, schema, base)
    return load_database(data)
