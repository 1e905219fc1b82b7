import csv
import random
import subprocess
import sys

import pytest

from semicirc.circuit import find_mismatch, parse
from semicirc.cli import BENCH_FIELDS, run
from semicirc.matrix import format_matrix, parse_matrix

from helpers import EXAMPLE_MATRIX, EXAMPLE_TEXT, random_case


@pytest.fixture
def example_files(tmp_path):
    mat = tmp_path / "a.mat"
    mat.write_text(format_matrix(EXAMPLE_MATRIX))
    circ = tmp_path / "a.circ"
    circ.write_text(EXAMPLE_TEXT)
    return mat, circ


def test_verify_example(example_files, capsys):
    mat, circ = example_files
    assert run(["verify", "--matrix", str(mat), "--circuit", str(circ)]) == 0


def test_verify_detects_missing_wire(example_files, capsys):
    mat, circ = example_files
    circ.write_text(EXAMPLE_TEXT.replace("g2: g0 x4", "g2: g0"))
    assert run(["verify", "--matrix", str(mat), "--circuit", str(circ)]) == 1
    assert "row 1 column 4 multiplicity 0" in capsys.readouterr().out


def test_eval_example(example_files, tmp_path, capsys):
    _, circ = example_files
    values = tmp_path / "x.txt"
    values.write_text("1\n2\n3\n4\n5\n")
    assert run(["eval", "--circuit", str(circ), "--input", str(values),
                "--semigroup", "int-sum"]) == 0
    assert capsys.readouterr().out == "0 10\n1 14\n2 9\n"


def test_eval_wrong_value_count(example_files, tmp_path, capsys):
    _, circ = example_files
    values = tmp_path / "x.txt"
    values.write_text("1\n2\n")
    assert run(["eval", "--circuit", str(circ), "--input", str(values),
                "--semigroup", "int-min"]) == 1
    assert "5 inputs" in capsys.readouterr().err


def test_eval_multiset(example_files, tmp_path, capsys):
    _, circ = example_files
    values = tmp_path / "x.txt"
    values.write_text("".join(f"x{j}\n" for j in range(5)))
    assert run(["eval", "--circuit", str(circ), "--input", str(values),
                "--semigroup", "multiset"]) == 0
    assert capsys.readouterr().out.splitlines()[2] == "2 {x3:1,x4:1}"


def test_synth_is_reproducible(example_files, tmp_path, capsys):
    mat, _ = example_files
    outs = []
    for name in ("one.circ", "two.circ"):
        out = tmp_path / name
        assert run(["synth", "--matrix", str(mat), "--mode", "rand", "--seed", "7",
                    "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert "wires=" in capsys.readouterr().err


def test_synth_outputs_verify(tmp_path, capsys):
    rng = random.Random(2024)
    mat = tmp_path / "m.mat"
    circ = tmp_path / "m.circ"
    for k in range(200):
        a = random_case(rng, n_max=40, m_max=40)
        mat.write_text(format_matrix(a))
        mode = "rand" if k % 2 else "det"
        assert run(["synth", "--matrix", str(mat), "--mode", mode, "--seed", str(k),
                    "--out", str(circ)]) == 0
        assert run(["verify", "--matrix", str(mat), "--circuit", str(circ)]) == 0


def test_synth_empty_rows_flag(tmp_path, capsys):
    mat = tmp_path / "e.mat"
    mat.write_text("semicirc-matrix v1\ndims 2 2\nzero 0 0\nzero 0 1\n")
    out = tmp_path / "e.circ"
    assert run(["synth", "--matrix", str(mat), "--out", str(out)]) == 1
    assert run(["synth", "--matrix", str(mat), "--allow-empty-rows", "--out", str(out)]) == 0
    text = out.read_text()
    assert "# virtual-input x2" in text
    assert find_mismatch(parse(text), parse_matrix(mat.read_text())) is None


def test_bench_csv_is_append_safe(tmp_path, capsys):
    path = tmp_path / "bench.csv"
    argv = ["bench", "--n", "16,32", "--zeros-per-row", "2", "--mode", "det", "rand",
            "--seeds", "3", "--csv", str(path)]
    assert run(argv) == 0
    assert run(argv) == 0
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == BENCH_FIELDS
    assert BENCH_FIELDS == ["n", "m", "z", "mode", "wires", "gates", "short_total",
                            "fallback_count", "retries", "build_millis"]
    body = rows[1:]
    assert len(body) == 2 * 2 * 2 * 3
    for n in ("16", "32"):
        for mode in ("det", "rand"):
            assert sum(1 for r in body if r[0] == n and r[3] == mode) == 6
    # runs are deterministic apart from timing
    half = len(body) // 2
    assert [r[:-1] for r in body[:half]] == [r[:-1] for r in body[half:]]


def test_bench_refuses_foreign_csv(tmp_path, capsys):
    path = tmp_path / "other.csv"
    path.write_text("a,b\n1,2\n")
    assert run(["bench", "--n", "8", "--zeros-per-row", "1", "--csv", str(path)]) == 1


def test_matmul_command(tmp_path, capsys):
    mat = tmp_path / "a.mat"
    mat.write_text("semicirc-matrix v1\ndims 2 2\nzero 0 1\n")
    dense = tmp_path / "b.txt"
    dense.write_text("semicirc-dense v1\ndims 2 2\n0 5\n2 1\n")
    out = tmp_path / "c.txt"
    assert run(["matmul", "--matrix", str(mat), "--dense", str(dense), "--semiring", "tropical",
                "--out", str(out)]) == 0
    assert out.read_text() == "semicirc-dense v1\ndims 2 2\n0 5\n0 1\n"


def test_matmul_dimension_mismatch(tmp_path, capsys):
    mat = tmp_path / "a.mat"
    mat.write_text("semicirc-matrix v1\ndims 2 3\n")
    dense = tmp_path / "b.txt"
    dense.write_text("semicirc-dense v1\ndims 2 1\n1\n2\n")
    assert run(["matmul", "--matrix", str(mat), "--dense", str(dense), "--semiring", "int-ring",
                "--out", str(tmp_path / "c.txt")]) == 1


def test_graph_commands(tmp_path, capsys):
    mat = tmp_path / "g.mat"
    mat.write_text("semicirc-matrix v1\ndims 3 3\nzero 0 0\nzero 1 0\nzero 1 1\nzero 1 2\n")
    expr = tmp_path / "g.expr"
    assert run(["graph", "--matrix", str(mat), "--out", str(expr)]) == 0
    assert "isolated_rows=[1]" in capsys.readouterr().err
    assert run(["graph-eval", "--expr", str(expr)]) == 0
    assert capsys.readouterr().out == (
        "V: 0\nV: 1\nV: 2\nE: 0 1\nE: 0 2\nE: 2 0\nE: 2 1\nE: 2 2\n")


def test_graph_rejects_rectangular(tmp_path, capsys):
    mat = tmp_path / "g.mat"
    mat.write_text("semicirc-matrix v1\ndims 2 3\n")
    assert run(["graph", "--matrix", str(mat), "--out", str(tmp_path / "x")]) == 1


@pytest.mark.parametrize("argv", [[], ["synth"], ["frobnicate"], ["eval", "--circuit", "c",
                                  "--input", "i", "--semigroup", "int-xor"],
                                  ["synth", "--matrix", "m", "--out", "o", "--seed", "-1"],
                                  ["bench", "--n", "8", "--zeros-per-row", "1", "--seeds", "0",
                                   "--csv", "x"]])
def test_usage_errors_exit_2(argv, capsys):
    assert run(argv) == 2


def test_missing_file_is_exit_1(tmp_path, capsys):
    assert run(["verify", "--matrix", str(tmp_path / "nope"), "--circuit", "x"]) == 1
    assert "error" in capsys.readouterr().err


def test_malformed_matrix_is_exit_1(tmp_path, capsys):
    mat = tmp_path / "bad.mat"
    mat.write_text("semicirc-matrix v1\ndims 2 2\nzero 5 0\n")
    assert run(["synth", "--matrix", str(mat), "--out", str(tmp_path / "o")]) == 1
    assert "line 3" in capsys.readouterr().err


def test_console_entry_point(example_files):
    mat, circ = example_files
    proc = subprocess.run([sys.executable, "-m", "semicirc.cli", "verify", "--matrix", str(mat),
                           "--circuit", str(circ)], capture_output=True, text=True)
    assert proc.returncode == 0
