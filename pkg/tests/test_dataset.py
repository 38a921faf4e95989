import random

import pytest
from hypothesis import given, settings

from posetmine import IngestError, ingest_binary, ingest_intervals, ingest_taxonomy, strict_support, support
from posetmine.dataset import (TransactionDB, ingest_quantitative, negative_encode, parse_number,
                               threshold_from_fraction)
from oracles import Oracle, instances, items


def test_table1_supports(table1):
    assert len(table1) == 10
    assert support(items(table1, "Bread", "Butter"), table1).count == 8
    assert support(items(table1, "Bread", "Butter", "Cheese", "Orange Juice"), table1).count == 4
    assert support(table1.space.bottom, table1).count == 10


def test_support_witnesses(table1):
    res = support(items(table1, "Bread", "Butter", "Cheese", "Orange Juice"), table1, witnesses=True)
    assert len(res.witnesses) == 4
    assert all(w.startswith("T") for w in res.witnesses)


def test_taxonomy_rows(table3):
    f0, f1 = table3.space.factors
    assert len(table3) == 6
    x = table3.space.parse(["Outwear", "Hiking Boots"])
    assert table3.count(x) == 2
    assert table3.count(table3.space.parse(["Outwear", "Footwear"])) == 2
    assert table3.count(table3.space.parse(["Jacket", "Footwear"])) == 1


def test_quantitative_rows(table2):
    names = [a.name for a in table2.attributes]
    assert names == ["Age", "Married", "NumCars"]
    age = table2.attributes[0]
    assert age.values == (23, 25, 29, 34, 38)
    assert table2.space.n == 5


def test_threshold_is_exact():
    assert threshold_from_fraction(0.4, 10) == 4
    assert threshold_from_fraction(0.3, 10) == 3
    assert threshold_from_fraction(0.3, 6) == 2
    assert threshold_from_fraction(0.7, 10) == 7


def test_strict_support_identity(table1):
    rng = random.Random(3)
    for _ in range(50):
        x = tuple(rng.randint(0, 1) for _ in range(6))
        eq = sum(1 for r in table1.rows if r == x)
        assert strict_support(x, table1).count == support(x, table1).count - eq


def test_negative_encoding(table1_negative):
    db = table1_negative
    x = db.space.parse(["*", "+", "*", "-", "*", "*"])
    assert db.count(x) == 4
    assert db.text(x) == "(Butter, ¬Milk)"


def test_negative_needs_binary(table3):
    with pytest.raises(IngestError):
        negative_encode(table3)


def test_render_quantitative(table2):
    x = (3, 0, table2.space.factors[2].bottom, 0, 0)
    assert table2.text(x) == "⟨Age: 34..38⟩"
    assert table2.render(x)["NumCars"] == "[0,2]"


def test_bad_binary_cell():
    with pytest.raises(IngestError) as e:
        ingest_binary("A,B\n1,0\n2,1\n")
    assert "row 3" in str(e.value) and "'A'" in str(e.value)


def test_ragged_row():
    with pytest.raises(IngestError):
        ingest_binary("A,B\n1,0\n1\n")


def test_empty_input():
    with pytest.raises(IngestError):
        ingest_binary("")
    with pytest.raises(IngestError):
        ingest_binary("A,B\n")


def test_bad_interval_cell():
    with pytest.raises(IngestError):
        ingest_intervals("Mon\n1:00-0:30\n")
    with pytest.raises(IngestError):
        ingest_intervals("Mon\n1:00\n")


def test_bad_number():
    with pytest.raises(IngestError):
        parse_number("abc")
    with pytest.raises(IngestError):
        ingest_quantitative("Age\nold\n", {"columns": {"Age": "quantitative"}})


def test_unknown_taxonomy_item(tmp_path):
    tax = tmp_path / "t.tsv"
    tax.write_text("A\tRoot\n")
    with pytest.raises(IngestError):
        ingest_taxonomy("A,B\n1,0\n", {"T": tax})


def test_incomparable_items_in_one_taxonomy(tmp_path):
    tax = tmp_path / "t.tsv"
    tax.write_text("A\tRoot\nB\tRoot\n")
    with pytest.raises(IngestError):
        ingest_taxonomy("A,B\n1,1\n", {"T": tax})


def test_schema_missing_kind():
    with pytest.raises(IngestError):
        ingest_quantitative("Age,X\n1,2\n", {"columns": {"Age": "quantitative"}})


def test_multiset_rows():
    db = ingest_binary("A,B\n1,0\n1,0\n0,1\n")
    assert db.count((1, 0)) == 2
    assert db.multiplicity((1, 0)) == 2


@settings(max_examples=80, deadline=None)
@given(instances())
def test_support_matches_brute_force(inst):
    db, o = inst.db, Oracle(inst.parents, inst.rows)
    for x in o.elements()[:80]:
        assert db.count(x) == o.support(x)


@settings(max_examples=80, deadline=None)
@given(instances())
def test_support_anti_monotone(inst):
    db, space = inst.db, inst.space
    for x in list(space.elements())[:60]:
        for y in space.successors(x):
            assert db.count(y) <= db.count(x)


@settings(max_examples=30, deadline=None)
@given(instances())
def test_count_many_matches_serial(inst):
    db = inst.db
    xs = list(db.space.elements())
    assert db.count_many(xs, workers=3) == [db.count(x) for x in xs]


def test_transaction_db_validates_rows(table1):
    with pytest.raises(ValueError):
        TransactionDB(table1.space, [(0, 0, 0, 0, 0, 2)])
