import io
import os
import shutil
import subprocess
import sys

import pytest

from mquandle.cli import run

A = "strands=3 word=-1,-1,2,2 colors=1,2,3"
B = "strands=3 word=-1,-1,2,2 colors=1,3,2"
L6A4 = "X[6,1,7,2] X[12,8,9,7] X[4,12,1,11] X[10,5,11,6] X[8,4,5,3] X[2,9,3,10]"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def mq(fixtures):
    return fixtures / "mx.mq"


@pytest.fixture
def broken(tmp_path, mq):
    lines = mq.read_text().splitlines()
    at = lines.index("op 1") + 1
    lines[at] = "2" + lines[at][1:]
    path = tmp_path / "broken.mq"
    path.write_text("\n".join(lines) + "\n")
    return path


def test_validate(mq):
    assert call("validate", mq) == (0, "valid 3-quandle, order 5\n", "")


def test_validate_invalid(broken):
    code, out, _ = call("validate", broken)
    assert code == 1 and out.startswith("invalid: ")
    assert "idempotency" in out


def test_invert(mq):
    code, out, _ = call("invert", mq)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "inv 1" and lines[1] == "1 5 4 5 4"
    assert len(lines) == 18


def test_count_examples(mq, fixtures):
    assert call("count", "--quandle", mq, "--braid", A)[:2] == (0, "count 23\n")
    assert call("count", "--quandle", mq, "--braid", B)[:2] == (0, "count 29\n")
    assert call("count", "--quandle", mq, "--diagram", fixtures / "borromean.diag")[:2] == (0, "count 71\n")
    assert call("count", "--quandle", mq, "--pd", L6A4, "--colors", "1,2,3")[:2] == (0, "count 71\n")


def test_count_list_solutions(mq):
    code, out, _ = call("count", "--quandle", mq, "--braid", "strands=1 word= colors=1", "--list-solutions")
    assert code == 0
    assert out.splitlines() == ["count 5"] + [f"solution {x}" for x in range(1, 6)]


def test_action(mq):
    assert call("action", "--quandle", mq, "--braid", "strands=2 word=1 colors=2,3", "--input", "1,2")[:2] == (
        0,
        "2,4\n",
    )


def test_toric(fixtures):
    assert call("toric", fixtures / "l1.toric")[:2] == (0, "nonempty dim=2 components=2\n")
    assert call("toric", fixtures / "l2.toric")[:2] == (0, "nonempty dim=1 components=4\n")


def test_fuzz_commands(mq):
    code, out, _ = call("markov-fuzz", "--quandle", mq, "--iters", 10, "--seed", 1)
    assert code == 0 and out.endswith("ok\n") and "conjugate applied=10" in out
    code, out, _ = call("reid-fuzz", "--quandle", mq, "--iters", 5, "--seed", 1)
    assert code == 0 and out.endswith("ok\n") and "R3 applied=5" in out


def test_search(tmp_path):
    code, out, _ = call("search", "--order", 3, "--k", 2, "--out", tmp_path / "s")
    assert code == 0
    assert "quandles 5\n" in out and "multi-quandles 13\n" in out
    code, out, _ = call("search", "--order", 3, "--k", 1, "--iso", "--out", tmp_path / "i")
    assert "mode up-to-isomorphism\n" in out and "quandles 3\n" in out
    code, _, err = call("search", "--order", 7, "--k", 1, "--out", tmp_path / "big")
    assert code == 2 and "soft cap" in err


def test_regress(fixtures):
    code, out, _ = call("regress", fixtures)
    assert code == 0 and len(out.splitlines()) == 9


def test_regress_corrupted_table(fixtures, tmp_path):
    dst = tmp_path / "fx"
    shutil.copytree(fixtures, dst)
    path = dst / "l10n107.table"
    path.write_text(path.read_text().replace(" 481\n", " 480\n", 1))
    code, out, _ = call("regress", dst)
    assert code == 1
    fail = [line for line in out.splitlines() if line.startswith("FAIL")]
    assert len(fail) == 1 and "table L10n107" in fail[0] and "expected 480" in fail[0]


def test_regress_invalid_quandle_exits_1(fixtures, tmp_path, broken):
    dst = tmp_path / "fx"
    shutil.copytree(fixtures, dst)
    shutil.copy(broken, dst / "mx.mq")
    assert call("regress", dst)[0] == 1


def test_regress_empty_dir(tmp_path):
    code, out, err = call("regress", tmp_path)
    assert code == 2 and out == "" and len(err.splitlines()) == 1


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["count", "--quandle", "MQ"],
        ["count", "--quandle", "MQ", "--braid", A, "--diagram", "x"],
        ["count", "--quandle", "MQ", "--braid", "strands=2 word=3 colors=1,1"],
        ["count", "--quandle", "MQ", "--braid", "strands=2 word=1 colors=1,2"],
        ["count", "--quandle", "MQ", "--pd", L6A4],
        ["action", "--quandle", "MQ", "--braid", A, "--input", "1,x,3"],
        ["markov-fuzz", "--quandle", "MQ", "--iters", "many", "--seed", "1"],
        ["toric", "/nonexistent.toric"],
        ["validate", "/nonexistent.mq"],
    ],
)
def test_usage_errors_exit_2(argv, mq):
    argv = [str(mq) if a == "MQ" else a for a in argv]
    code, out, err = call(*argv)
    assert code == 2
    assert len(err.strip().splitlines()) == 1 and err.startswith("error: ")


def test_non_closable_message(mq):
    _, _, err = call("count", "--quandle", mq, "--braid", "strands=2 word=1 colors=1,2")
    assert "cycle {1,2} carries colors {1,2}" in err


@pytest.mark.parametrize("command", ["count", "action", "markov-fuzz", "reid-fuzz", "invert"])
def test_every_quandle_reader_refuses_invalid_input(command, broken):
    argv = {
        "count": ["count", "--quandle", broken, "--braid", A],
        "action": ["action", "--quandle", broken, "--braid", A, "--input", "1,2,3"],
        "markov-fuzz": ["markov-fuzz", "--quandle", broken, "--iters", 1, "--seed", 1],
        "reid-fuzz": ["reid-fuzz", "--quandle", broken, "--iters", 1, "--seed", 1],
        "invert": ["invert", broken],
    }[command]
    code, out, err = call(*argv)
    assert code == 1 and out == "" and "invalid quandle" in err


def _script(*argv, workers):
    env = dict(os.environ, MQ_WORKERS=str(workers))
    exe = shutil.which("mquandle")
    cmd = [exe] if exe else [sys.executable, "-m", "mquandle"]
    return subprocess.run(cmd + [str(a) for a in argv], capture_output=True, text=True, env=env)


def test_output_identical_across_runs_and_workers(mq, fixtures, tmp_path):
    big = "strands=8 word=1,3,5,7,1,3,5,7 colors=1,1,2,2,3,3,1,1"
    for argv in (
        ["count", "--quandle", mq, "--braid", big, "--list-solutions"],
        ["regress", fixtures],
    ):
        outs = {(r.returncode, r.stdout) for r in (_script(*argv, workers=w) for w in (1, 1, 3))}
        assert len(outs) == 1
        assert next(iter(outs))[0] == 0
    a = _script("search", "--order", 4, "--k", 2, "--out", tmp_path / "a", workers=1)
    b = _script("search", "--order", 4, "--k", 2, "--out", tmp_path / "b", workers=3)
    assert a.stdout == b.stdout
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert files == sorted(p.name for p in (tmp_path / "b").iterdir())
    assert all((tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes() for f in files)


def test_module_entry_point(mq):
    r = subprocess.run([sys.executable, "-m", "mquandle", "validate", str(mq)], capture_output=True, text=True)
    assert (r.returncode, r.stdout) == (0, "valid 3-quandle, order 5\n")


def test_regress_missing_referenced_file(fixtures, tmp_path):
    dst = tmp_path / "fx"
    shutil.copytree(fixtures, dst)
    (dst / "l6a4.table").unlink()
    code, _, err = call("regress", dst)
    assert code == 2 and "l6a4.table" in err
