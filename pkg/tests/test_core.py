import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mquandle.core import (
    COLUMN_BIJECTIVITY,
    CROSS_DISTRIBUTIVITY,
    IDEMPOTENCY,
    MultiQuandle,
    alexander_multi_quandle,
    check_derived_identities,
    conjugation_diquandle,
    invert,
    load,
    parse,
    parse_tables,
    serialize,
    trivial_multi_quandle,
    validate,
)
from mquandle.errors import InvalidQuandleError, ParseError, StructureError

from oracles import MX, MX_INV, all_quandle_tables, cross_ok, raw_inverse


def as_tuples(tables):
    return tuple(tuple(tuple(r) for r in t) for t in tables)


def test_mx_is_valid_3_quandle():
    report = validate(MX)
    assert report.valid and not report.truncated
    mq = MultiQuandle(MX)
    assert (mq.order, mq.k) == (5, 3)


def test_trivial_tables_valid():
    tables = [[[x] * 4 for x in range(1, 5)] for _ in range(3)]
    assert validate(tables).valid


def test_idempotency_witness_for_corrupted_mx():
    bad = [list(map(list, t)) for t in MX]
    bad[0][0][0] = 2
    report = validate(bad)
    assert not report.valid
    idem = [v for v in report.violations if v.axiom == IDEMPOTENCY]
    assert idem[0].ops == (1,) and idem[0].witness == (1,)
    for v in report.violations:
        assert v.recheck(bad)


def test_column_bijectivity_witness():
    report = validate([[[1, 1], [1, 2]]])
    cols = [v for v in report.violations if v.axiom == COLUMN_BIJECTIVITY]
    assert cols and cols[0].witness == (1, 2, 1)


def test_report_is_sorted_and_capped():
    bad = [[[1] * 4 for _ in range(4)]]
    full = validate(bad, cap=10**6)
    capped = validate(bad, cap=5)
    assert list(full.violations) == sorted(full.violations)
    assert capped.violations == full.violations[:5]
    assert capped.truncated and not full.truncated


def test_structural_errors():
    with pytest.raises(StructureError):
        validate([[[1, 2], [2, 1]], [[1, 1, 1], [2, 2, 2], [3, 3, 3]]])
    with pytest.raises(StructureError):
        validate([[[1, 3], [2, 2]]])
    with pytest.raises(StructureError):
        validate([])


def test_invert_reproduces_reference_inverse():
    assert as_tuples(invert(MultiQuandle(MX))) == as_tuples(MX_INV)


def test_invert_matches_direct_search():
    assert as_tuples(invert(MultiQuandle(MX))) == as_tuples(raw_inverse(MX))


def test_invert_trivial_and_dihedral_are_self_inverse():
    triv = trivial_multi_quandle(4, 2)
    assert tuple(invert(triv)) == triv.tables
    n = 7
    dihedral = MultiQuandle([[[(2 * y - x) % n + 1 for y in range(n)] for x in range(n)]])
    assert tuple(invert(dihedral)) == dihedral.tables


def test_derived_identities_mx():
    assert check_derived_identities(MultiQuandle(MX)).valid


def test_derived_identities_every_order3_quandle():
    for t in all_quandle_tables(3):
        assert check_derived_identities(MultiQuandle([t])).valid


def test_non_cross_distributive_pair_flagged_by_both_checks():
    tables = all_quandle_tables(3)
    pair = next((a, b) for a, b in itertools.product(tables, repeat=2) if not cross_ok(a, b))
    report = validate(pair)
    assert any(v.axiom == CROSS_DISTRIBUTIVITY for v in report.violations)
    mixed = check_derived_identities(MultiQuandle(pair, check=False))
    assert not mixed.valid
    for v in mixed.violations:
        assert v.recheck(pair)


def test_alexander_examples():
    assert validate(alexander_multi_quandle(5, (2, 3)).tables).valid
    assert alexander_multi_quandle(3, (1, 1, 1)) == trivial_multi_quandle(3, 3)
    with pytest.raises(StructureError):
        alexander_multi_quandle(4, (2, 1))


def test_conjugation_diquandle_examples():
    assert conjugation_diquandle(5, (2, 3)) == alexander_multi_quandle(5, (2, 3))
    assert conjugation_diquandle(7, (1, 1)) == trivial_multi_quandle(7, 2)
    inv = conjugation_diquandle(6, (5, 5))
    assert validate(inv.tables).valid
    assert tuple(invert(inv)) == inv.tables
    with pytest.raises(StructureError):
        conjugation_diquandle(6, (2, 5))


def test_constructor_rejects_invalid():
    with pytest.raises(InvalidQuandleError) as exc:
        MultiQuandle([[[1, 1], [1, 2]]])
    assert exc.value.report is not None


def test_parse_and_load_fixture(fixtures):
    mq = load(fixtures / "mx.mq")
    assert mq.tables == as_tuples(MX)


def test_parse_rejects_inconsistent_inverse():
    text = serialize(MultiQuandle(MX), include_inverse=True)
    lines = text.splitlines()
    at = lines.index("inv 1") + 1
    lines[at] = "1 4 5 5 4"
    with pytest.raises(InvalidQuandleError):
        parse("\n".join(lines))


@pytest.mark.parametrize(
    "text",
    [
        "",
        "mq v2\norder 1\nk 1\nop 1\n1\n",
        "mq v1\norder 2\nk 1\nop 1\n1 1\n",
        "mq v1\norder 2\nk 1\nop 1\n1 x\n2 2\n",
        "mq v1\norder 1\nk 2\nop 1\n1\n",
        "mq v1\norder 1\nk 1\nop 1\n1\nop 1\n1\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_tables(text)


@st.composite
def alexander(draw):
    m = draw(st.integers(2, 11))
    unit_list = [t for t in range(1, m) if _is_unit(t, m)]
    k = draw(st.integers(1, 3))
    ts = draw(st.lists(st.sampled_from(unit_list), min_size=k, max_size=k))
    return alexander_multi_quandle(m, ts)


def _is_unit(t, m):
    return any(t * s % m == 1 for s in range(m))


@settings(max_examples=60, deadline=None)
@given(alexander())
def test_property_alexander_valid_with_derived_identities(mq):
    assert validate(mq.tables).valid
    assert check_derived_identities(mq).valid


@settings(max_examples=60, deadline=None)
@given(alexander())
def test_property_columns_are_permutations_and_double_inverse(mq):
    n = mq.order
    for t in mq.tables:
        for y in range(n):
            assert sorted(t[x][y] for x in range(n)) == list(range(1, n + 1))
    twice = MultiQuandle(invert(MultiQuandle(invert(mq), check=False)), check=False)
    assert twice.tables == mq.tables


@settings(max_examples=60, deadline=None)
@given(alexander(), st.booleans())
def test_property_serialization_round_trip(mq, with_inverse):
    assert parse(serialize(mq, include_inverse=with_inverse)) == mq


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(st.integers(1, 3), min_size=9, max_size=9), min_size=1, max_size=2))
def test_property_witnesses_reproduce(flat_tables):
    tables = [[flat[i * 3 : i * 3 + 3] for i in range(3)] for flat in flat_tables]
    report = validate(tables, cap=10**6)
    for v in report.violations:
        assert v.recheck(tables)
    n = 3
    expected_valid = all(
        all(t[x][x] == x + 1 for x in range(n))
        and all(sorted(t[x][y] for x in range(n)) == [1, 2, 3] for y in range(n))
        for t in tables
    ) and all(cross_ok(a, b) for a in tables for b in tables)
    assert report.valid == expected_valid
