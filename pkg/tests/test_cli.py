from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from cbnet.cli import main
from cbnet.formats import parse_edge_list

DATA = Path(__file__).parent / "data"
FIXTURE = str(DATA / "fixture_network.csv")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


def test_analyze_fixture_is_byte_identical(capsys):
    code, first, _ = run(capsys, "analyze", FIXTURE)
    _, second, _ = run(capsys, "analyze", FIXTURE)
    assert code == 0 and first == second
    doc = json.loads(first)
    assert doc["structure"]["k"] == 45 and doc["structure"]["gscc_order"] == 26
    assert "bounds" in doc and "profile" in doc


def test_text_format(capsys):
    code, out, _ = run(capsys, "scc", "--format", "text", FIXTURE)
    assert code == 0 and "scc.count = " in out and not out.lstrip().startswith("{")


def test_construct_mka_report(capsys, tmp_path):
    edges = tmp_path / "mka.csv"
    code, out, _ = run(capsys, "construct", "mka", "--n", "10", "--k", "6", "--edges", str(edges))
    doc = json.loads(out)["construction"]
    assert code == 0 and doc["mean_acc"] == 6.3 and doc["msd"] == 0.3
    with open(edges, encoding="utf-8") as fh:
        assert parse_edge_list(fh).size == 10


def test_generate_is_deterministic(capsys, tmp_path):
    args = ["generate", "--seed", "9", "--parents", "5", "--branches-mean", "3",
            "--sender-banks", "2", "--receiver-banks", "4", "--senders", "5", "--receivers", "5"]  # fmt: skip
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b and a.startswith("#!vertex,")
    out = tmp_path / "g.csv"
    run(capsys, *args, "--out", str(out))
    assert out.read_text(encoding="utf-8") == a


def test_reduce_and_bounds(capsys, tmp_path):
    k5 = write(tmp_path, "k5.csv", "".join(f"{u},{v}\n" for u in "abcde" for v in "abcde" if u != v))
    code, out, _ = run(capsys, "reduce", k5)
    removal = json.loads(out)["removal"]
    assert code == 0 and removal["feasible"] and len(removal["removed"]) == 3
    code, out, _ = run(capsys, "reduce", "--remove", "a", k5)
    assert json.loads(out)["removal"]["diameter_after"] == 1
    code, out, _ = run(capsys, "bounds", str(DATA / "engineered_scc.csv"))
    bounds = json.loads(out)["bounds"]
    assert code == 0 and bounds["applicable"] and bounds["n_prime"] == 33


def test_mstar_and_oracle(capsys, tmp_path):
    cache = tmp_path / "cache.txt"
    code, out, _ = run(capsys, "mstar", "--n", "5", "--p", "2", "--oracle", "--cache", str(cache))
    assert code == 0 and json.loads(out)["mstar"]["formula_value"] == 8
    code, out, _ = run(capsys, "oracle", "--n", "4", "--p", "3")
    assert code == 0 and json.loads(out)["oracle"]["min_edges"] == 4


def test_export_dot(capsys):
    code, out, _ = run(capsys, "export-dot", "--highlight", FIXTURE)
    assert code == 0 and out.startswith("digraph") and 'gscc="true"' in out


@pytest.mark.parametrize(
    "argv, text, expected",
    [
        (["analyze"], "a,a\n", 1),
        (["analyze"], "a,b\nc\n", 1),
        (["analyze", "--min-core-size", "2"], "a,b\nb,a\nb,c\nx,y\ny,x\ny,z\n", 2),
        (["bounds"], "a,b\nb,c\n", 1),
        (["reduce", "--remove", "zz"], "a,b\nb,c\nc,a\n", 1),
    ],
)
def test_exit_codes(capsys, tmp_path, argv, text, expected):
    path = write(tmp_path, "in.csv", text)
    code, _, err = run(capsys, *argv, path)
    assert code == expected and err.startswith("cbnet:")


def test_exit_codes_without_input(capsys, tmp_path):
    assert run(capsys, "oracle", "--n", "7", "--p", "3")[0] == 3
    assert run(capsys, "construct", "mka", "--n", "10", "--k", "4")[0] == 1
    assert run(capsys, "analyze", str(tmp_path / "missing.csv"))[0] == 1


def test_console_entry_point_reads_stdin():
    proc = subprocess.run(
        [sys.executable, "-m", "cbnet.cli", "scc", "-"],
        input="a,b\nb,a\n",
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["scc"]["orders"] == [2]
