import shutil

import pytest

from mquandle.core import load
from mquandle.errors import ParseError
from mquandle.regress import check_table, parse_table, run_regress, table_counts

L9N27 = [77, 77, 95, 95, 125, 125]
L10N107 = [307, 433, 337, 265, 481, 337, 307, 181, 283, 337, 433, 307, 283, 181, 307, 337, 481, 265]


def test_full_fixture_set_passes(fixtures):
    report = run_regress(fixtures)
    assert report.ok, report.text()
    lines = report.text().splitlines()
    assert len(lines) == 9 and all(line.startswith("PASS ") for line in lines)
    assert "PASS braid A: expected 23, computed 23" in lines
    assert "PASS diagram borromean.diag: expected 71, computed 71" in lines


def test_table_multisets(fixtures, mx):
    l9 = parse_table((fixtures / "l9n27.table").read_text())
    l10 = parse_table((fixtures / "l10n107.table").read_text())
    assert sorted(table_counts(l9, mx)) == sorted(L9N27)
    assert sorted(table_counts(l10, mx)) == sorted(L10N107)
    assert sorted(n for _, n in l10.rows) == sorted(L10N107)
    assert "18/18 rows agree individually" in check_table(l10, mx).detail


def test_pd_colors_relabel():
    t = parse_table("table v1\nname t\npd X[1,2,3,4]\nrelabel 2,1\nrow 1,3 5\n")
    assert t.pd_colors((1, 3)) == [3, 1]


def _copy(fixtures, tmp_path):
    dst = tmp_path / "fx"
    shutil.copytree(fixtures, dst)
    return dst


def test_corrupted_row_names_the_row(fixtures, tmp_path, mx):
    dst = _copy(fixtures, tmp_path)
    path = dst / "l9n27.table"
    path.write_text(path.read_text().replace("row 2,1,3 95", "row 2,1,3 96"))
    report = run_regress(dst)
    assert not report.ok
    bad = [c for c in report.checks if not c.passed]
    assert [c.name for c in bad] == ["table L9n27"]
    assert "first divergent row (2,1,3): expected 96" in bad[0].detail


def test_corrupted_braid_count(fixtures, tmp_path):
    dst = _copy(fixtures, tmp_path)
    m = dst / "regress.txt"
    m.write_text(m.read_text().replace("colors=1,3,2\" 29", "colors=1,3,2\" 28"))
    report = run_regress(dst)
    assert "FAIL braid B: expected 28, computed 29" in report.text()


def test_missing_manifest(tmp_path):
    with pytest.raises(FileNotFoundError):
        run_regress(tmp_path)


@pytest.mark.parametrize(
    "body",
    [
        "regress v2\n",
        "regress v1\nbraid A \"strands=1 word= colors=1\" 5\n",
        "regress v1\nquandle mx.mq\nbraid A\n",
        "regress v1\nquandle mx.mq\nwhatever x\n",
        "regress v1\nquandle mx.mq\ntoric l1.toric two 2\n",
    ],
)
def test_malformed_manifest(fixtures, tmp_path, body):
    dst = _copy(fixtures, tmp_path)
    (dst / "regress.txt").write_text(body)
    with pytest.raises(ParseError):
        run_regress(dst)


@pytest.mark.parametrize(
    "text",
    ["", "table v1\nname x\n", "table v1\nname x\npd X[1,2,3,4]\nrow 1,x 3\n", "table v1\nname x\npd p\nrelabel 1,1\nrow 1,2 3\n"],
)
def test_table_parse_errors(text):
    with pytest.raises(ParseError):
        parse_table(text)
