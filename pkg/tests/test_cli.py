"""Command-line behaviour, exit codes, and byte-identical golden outputs.

Set ``SYZ_UPDATE_GOLDEN=1`` to rewrite the golden files after an intended
output change.
"""

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from syz.cli import build_parser, main

HERE = Path(__file__).parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"
LINE = str(DATA / "line.json")
WIN = ["--window", "-3", "3", "-3", "3"]

GOLDEN_CASES = {
    "amoeba_line.svg": ["amoeba", "--poly", LINE, *WIN, "--resolution", "64"],
    "amoeba_line.csv": ["amoeba", "--poly", LINE, *WIN, "--resolution", "24", "--format", "csv"],
    "spine_line.svg": ["spine", "--poly", LINE, *WIN, "--resolution", "64", "--grid", "128",
                       "--format", "svg"],
    "spine_line.json": ["spine", "--poly", LINE, *WIN, "--resolution", "64", "--grid", "128"],
    "components_line.json": ["components", "--poly", LINE, *WIN, "--resolution", "64", "--grid", "128"],
    "ronkin_origin.json": ["ronkin", "--poly", LINE, "--point", "0", "0", "--grid", "128", "--order"],
    "ronkin_far.json": ["ronkin", "--poly", LINE, "--point", "10", "0", "--grid", "128", "--order"],
    "compactify_line.svg": ["compactify", "--poly", LINE, "--resolution", "48", "--angles", "64"],
    "gamma_build_d2.json": ["gamma", "build", "--degree", "2"],
    "gamma_build_d1.dot": ["gamma", "build", "--degree", "1", "--format", "dot"],
    "gamma_build_d1.svg": ["gamma", "build", "--degree", "1", "--format", "svg"],
    "gamma_stats_d2.json": ["gamma", "stats", str(DATA / "gamma_d2.json")],
    "gamma_mirror_d2.json": ["gamma", "mirror", str(DATA / "gamma_d2.json")],
    "gamma_flop_d2.json": ["gamma", "flop", str(DATA / "gamma_d2.json"), "--edge", "0"],
    "gamma_conifold_d2.json": ["gamma", "conifold", str(DATA / "gamma_d2.json"), "--edge", "0"],
    "monodromy_fixed_edge.json": ["monodromy", "fixed", str(DATA / "edge_matrix.json")],
    "monodromy_classify_positive.json": ["monodromy", "classify", str(DATA / "triple_positive.json")],
    "monodromy_classify_negative.json": ["monodromy", "classify", str(DATA / "triple_negative.json")],
    "monodromy_mirror_positive.json": ["monodromy", "mirror", str(DATA / "triple_positive.json")],
    "monodromy_k3_generate.json": ["monodromy", "k3check", "--generate"],
    "local_hl_sample.json": ["local", "hl", "--point", "1.1", "1", "1", "--samples", "5", "--seed", "2"],
    "local_hl_eval.json": ["local", "hl", "--z", "0", "0", "2+1j"],
    "local_hl_classify.json": ["local", "hl-classify", "--x", "0", "3", "3"],
    "local_joyce_roundtrip.json": ["local", "joyce", "--sign", "-", "--roundtrip", "500", "--seed", "4"],
    "local_joyce_point.json": ["local", "joyce", "--sign", "+", "--z", "1+1j", "0", "3"],
    "local_slag_hl.json": ["local", "slag", "--model", "hl", "--target", "1.1", "1", "1",
                           "--samples", "300"],
    "local_slag_joyce.json": ["local", "slag", "--model", "joyce", "--sign", "-", "--target",
                              "0.5", "0", "1", "--samples", "300", "--optimize-phase"],
}


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("threads", ["1", "2", "8"])
@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden(name, threads, capsys):
    code, out, _ = run(["--threads", threads, *GOLDEN_CASES[name]], capsys)
    assert code == 0
    path = GOLDEN / name
    if os.environ.get("SYZ_UPDATE_GOLDEN") and threads == "1":
        path.write_text(out, newline="\n")
    assert out == path.read_text(), f"{name} differs from golden at --threads {threads}"


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("SYZ_THREADS", "8")
    code, out, _ = run(GOLDEN_CASES["amoeba_line.svg"], capsys)
    assert code == 0 and out == (GOLDEN / "amoeba_line.svg").read_text()


class TestContent:
    def test_spine_three_rays(self, tmp_path, capsys):
        out = tmp_path / "spine.svg"
        code, stdout, _ = run(["spine", "--poly", LINE, *WIN, "--resolution", "64", "--grid", "128",
                               "--out", str(out)], capsys)
        assert code == 0
        summary = json.loads(stdout)
        assert summary == {"vertices": 1, "edges": 3, "bounded_faces": 0, "retract_check": True}
        svg = out.read_text()
        assert svg.count("<polyline") == 3

    def test_gamma_pipeline(self, tmp_path, capsys):
        g = tmp_path / "g.json"
        code, stdout, _ = run(["gamma", "build", "--degree", "5", "--out", str(g)], capsys)
        assert code == 0
        code, stdout, _ = run(["gamma", "stats", str(g)], capsys)
        stats = json.loads(stdout)
        assert (stats["negative"], stats["positive"], stats["euler_characteristic"]) == (250, 50, -200)

    def test_mirror_pipeline(self, tmp_path, capsys):
        m = tmp_path / "m.json"
        code, _, _ = run(["monodromy", "mirror", str(DATA / "triple_positive.json"), "--out", str(m)], capsys)
        assert code == 0
        code, stdout, _ = run(["monodromy", "classify", str(m)], capsys)
        assert json.loads(stdout)["classification"] == "Negative"

    def test_format_from_extension(self, tmp_path, capsys):
        out = tmp_path / "a.csv"
        code, stdout, _ = run(["amoeba", "--poly", LINE, *WIN, "--resolution", "16", "--out", str(out)], capsys)
        assert code == 0 and out.read_text().startswith("x,y,member,hits")
        assert json.loads(stdout)["resolution"] == 16


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        ["amoeba", "--poly", "missing.json"],
        ["bogus"],
        ["amoeba"],
        ["gamma", "flop", str(DATA / "gamma_d2.json")],
        ["local", "hl", "--z", "0", "0", "nonsense"],
        ["monodromy", "k3check"],
        ["ronkin", "--poly", LINE, "--point", "0"],
        ["amoeba", "--poly", LINE, "--format", "dot"],
        ["--threads"],
    ])
    def test_usage(self, argv, capsys):
        code, out, err = run(argv, capsys)
        assert code == 2 and err

    @pytest.mark.parametrize("argv", [
        ["monodromy", "fixed", str(DATA / "not_unimodular.json")],
        ["gamma", "flop", str(DATA / "gamma_d2.json"), "--edge", "99999"],
        ["local", "hl", "--point", "0", "0", "-1"],
        ["amoeba", "--poly", LINE, "--window", "1", "0", "0", "1"],
    ])
    def test_computation_error(self, argv, capsys):
        code, out, _ = run(argv, capsys)
        assert code == 1
        doc = json.loads(out)
        assert set(doc) == {"error", "message"}

    def test_failed_check(self, capsys):
        code, out, _ = run(["monodromy", "k3check", str(DATA / "k3_short.json")], capsys)
        assert code == 1
        doc = json.loads(out)
        assert doc["all_k_one"] and not doc["product_identity"] and doc["warnings"]

    def test_stdin(self, monkeypatch, capsys):
        import io

        monkeypatch.setattr(sys, "stdin", io.StringIO((DATA / "edge_matrix.json").read_text()))
        code, out, _ = run(["monodromy", "fixed", "-"], capsys)
        assert code == 0 and json.loads(out)["dimension"] == 2


SUBCOMMANDS = {
    (): ["amoeba", "spine", "ronkin", "components", "compactify", "gamma", "monodromy", "local"],
    ("gamma",): ["build", "stats", "mirror", "flop", "conifold"],
    ("monodromy",): ["fixed", "classify", "mirror", "k3check"],
    ("local",): ["hl", "hl-classify", "joyce", "slag"],
}


@pytest.mark.parametrize("path", list(SUBCOMMANDS))
def test_help_lists_subcommands(path, capsys):
    code, out, _ = run([*path, "--help"], capsys)
    assert code == 0
    for name in SUBCOMMANDS[path]:
        assert name in out
    for name in SUBCOMMANDS[path]:
        code, sub_out, _ = run([*path, name, "--help"], capsys)
        assert code == 0 and "usage:" in sub_out


def test_help_flags_parse():
    """Every optional flag shown in help is accepted by the parser."""
    parser = build_parser()
    sub = parser._subparsers._group_actions[0]
    for name, p in sub.choices.items():
        text = p.format_help()
        for action in p._actions:
            for opt in action.option_strings:
                assert opt in text


def test_console_script_entry():
    r = subprocess.run([sys.executable, "-m", "syz.cli", "monodromy", "classify",
                        str(DATA / "triple_positive.json")], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["classification"] == "Positive"


@pytest.mark.parametrize("name", ["ronkin_origin.json", "components_line.json", "spine_line.json",
                                  "amoeba_line.svg"])
def test_golden_with_python_kernels(name, monkeypatch, capsys):
    from syz import _fallback, kernels

    monkeypatch.setattr(kernels, "aberth_batch", _fallback.aberth_batch)
    monkeypatch.setattr(kernels, "torus_logabs_rows", _fallback.torus_logabs_rows)
    code, out, _ = run(GOLDEN_CASES[name], capsys)
    assert code == 0 and out == (GOLDEN / name).read_text()
