import json

import pytest

from bssram.cli import main
from bssram.programs import program_text

NU_TEXT = """\
1: Z2 := nu[O](Z1,...,Z[I1]);
2: Z1 := Z2;
3: stop.
"""

BRANCH_TEXT = """\
1: goto 2 or goto 4;
2: goto 3 or goto 5;
3: if I1 = I1 then goto 3 else goto 3;
4: if I1 = I1 then goto 4 else goto 4;
5: stop.
"""

FINITE_CFG = """\
universe: a b
constants: a b
op flip/1:
a -> b
b -> a
rel same/2:
a a
b b
"""


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    monkeypatch.delenv("BSSRAM_MAX_STEPS", raising=False)


@pytest.fixture
def shipped(tmp_path):
    def write(name):
        path = tmp_path / f"{name}.bssram"
        path.write_text(program_text(name), encoding="utf-8")
        return str(path)

    return write


@pytest.fixture
def custom(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write


def test_run_decider(shipped, capsys):
    path = shipped("nonneg-oracle-decider")
    code = main(["run", path, "--input", "4,6,7", "--oracle", "nonneg-singletons"])
    assert code == 0
    assert capsys.readouterr().out == "(0)\n"
    assert main(["run", path, "--input", "4", "--oracle", "nonneg-singletons"]) == 0
    assert capsys.readouterr().out == "(1)\n"


def test_run_uses_single_cell_output_for_finite_programs(shipped, capsys):
    assert main(["run", shipped("sum3"), "--input", "1,2,3"]) == 0
    assert capsys.readouterr().out == "(6)\n"


def test_run_budget_exit(shipped, capsys):
    code = main(["run", shipped("loop"), "--input", "1,2", "--max-steps", "25"])
    assert code == 2
    out = capsys.readouterr().out
    assert out == "no stop within 25 steps (last at instruction 1)\n"


def test_run_trace(shipped, capsys):
    code = main(["run", shipped("sum3"), "--input", "1,2,3", "--trace"])
    assert code == 0
    assert capsys.readouterr().out.splitlines() == [
        "1 | 3 | 1,2 | tail=⟨3⟩",
        "2 | 3 | 3,2 | tail=⟨3⟩",
        "3 | 3 | 6,2 | tail=⟨3⟩",
        "(6)",
    ]


def test_run_json_record(shipped, capsys):
    code = main(["run", shipped("nonneg-oracle-decider"), "--input", "4,6,7",
                 "--oracle", "nonneg-singletons", "--json"])
    assert code == 0
    record = json.loads(capsys.readouterr().out)
    assert record == {"command": "run", "status": "halted",
                      "output": ["0"], "steps": 5}


def test_run_respects_env_budget(shipped, capsys, monkeypatch):
    monkeypatch.setenv("BSSRAM_MAX_STEPS", "3")
    code = main(["run", shipped("loop"), "--input", "1,2"])
    assert code == 2
    assert "no stop within 3 steps" in capsys.readouterr().out
    monkeypatch.setenv("BSSRAM_MAX_STEPS", "zero")
    assert main(["run", shipped("loop"), "--input", "1,2"]) == 1
    monkeypatch.setenv("BSSRAM_MAX_STEPS", "0")
    assert main(["run", shipped("loop"), "--input", "1,2"]) == 1


def test_search_nd(shipped, capsys):
    path = shipped("nonneg-nd")
    assert main(["search", path, "--input", "4"]) == 0
    assert capsys.readouterr().out == "accepted in 3 steps, guesses (2)\n"
    assert main(["search", path, "--input", "-1", "--budget", "200"]) == 2
    assert capsys.readouterr().out == "not accepted within budget 200\n"


def test_search_dnd(shipped, capsys):
    assert main(["search", shipped("nonneg-nd"), "--input", "1",
                 "--engine", "dnd"]) == 0
    assert capsys.readouterr().out == "accepted in 3 steps, guesses ()\n"


def test_search_branch(custom, capsys):
    path = custom("gadget.bssram", BRANCH_TEXT)
    assert main(["search", path, "--input", "1", "--engine", "branch"]) == 0
    assert capsys.readouterr().out == "accepted in 2 steps, choices 01\n"
    trivial = custom("trivial.bssram", "1: stop.")
    assert main(["search", trivial, "--input", "1", "--engine", "branch"]) == 0
    assert capsys.readouterr().out == "accepted in 0 steps, choices (none)\n"


def test_search_nu(custom, capsys):
    path = custom("root.bssram", NU_TEXT)
    assert main(["search", path, "--input", "4", "--engine", "nu",
                 "--oracle", "squares-pairs"]) == 0
    assert capsys.readouterr().out == "accepted in 2 steps, nu-choices (2)\n"
    assert main(["search", path, "--input", "4", "--engine", "nu",
                 "--oracle", "squares-pairs", "--json"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record == {
        "command": "search", "engine": "nu", "status": "accepted",
        "witness": [{"choice": "2", "extension": ["2"]}], "steps": 2,
    }


def test_search_engine_mismatch(custom, shipped, capsys):
    path = custom("gadget.bssram", BRANCH_TEXT)
    assert main(["search", path, "--input", "1", "--engine", "nd"]) == 1
    assert capsys.readouterr().err.startswith("error:")
    oracle = shipped("nonneg-oracle-semi")
    assert main(["search", oracle, "--input", "4", "--engine", "branch",
                 "--oracle", "universal"]) == 1
    assert capsys.readouterr().err.startswith("error:")


def test_validate_reports(shipped, capsys):
    assert main(["validate", shipped("sum3")]) == 0
    assert capsys.readouterr().out == "ok: k_P=1 j_max=3\n"
    assert main(["validate", shipped("boolpda"), "--structure", "bool-symbols"]) == 0
    assert capsys.readouterr().out == "ok: k_P=9 j_max=4\n"


def test_validate_finite_mode_lists_offending_labels(shipped, capsys):
    assert main(["validate", shipped("sumn-c"), "--mode", "finite"]) == 1
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 6
    assert all(line.startswith("label ") for line in lines)
    assert "label 4: CopyIndirect is not allowed in a finite machine" in lines


def test_validate_json(shipped, capsys):
    assert main(["validate", shipped("sumn-c"), "--json"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record == {"command": "validate", "ok": True, "k_P": 3,
                      "j_max": 2, "errors": []}


def test_encode_goldens(capsys):
    cases = [
        (["encode", "--mode", "cantor", "2", "1"], "7\n"),
        (["encode", "--mode", "cantor-inv", "7"], "(2,1)\n"),
        (["encode", "--mode", "bin", "6"], "110\n"),
        (["encode", "--mode", "bin-inv", "110"], "6\n"),
        # the final 1 equals the tail, so the printed prefix stops before it
        (["encode", "--mode", "in-star", "110"], "1 | 6 | 0,0,0,1,0 | tail=⟨1⟩\n"),
        (["encode", "--mode", "in-nat", "6"], "1 | 6 | 0,0,0,1,0 | tail=⟨1⟩\n"),
    ]
    for argv, expected in cases:
        assert main(argv) == 0, argv
        assert capsys.readouterr().out == expected, argv


def test_encode_json(capsys):
    assert main(["encode", "--mode", "bin", "6", "--json"]) == 0
    assert json.loads(capsys.readouterr().out) == {
        "command": "encode", "mode": "bin", "result": "110",
    }


def test_encode_domain_errors(capsys):
    for argv in [
        ["encode", "--mode", "cantor-inv", "5"],
        ["encode", "--mode", "bin-inv", "0110"],
        ["encode", "--mode", "cantor", "3"],
        ["encode", "--mode", "bin", "0"],
        ["encode", "--mode", "in-nat", "six"],
    ]:
        assert main(argv) == 1, argv
        captured = capsys.readouterr()
        assert captured.err.startswith("error:")
    assert main(["encode", "--mode", "bin-inv", "0110"]) == 1
    assert "'0110' is not in the range of bin" in capsys.readouterr().err


def test_error_paths(shipped, custom, capsys):
    assert main(["run", shipped("sum3"), "--input", "1,2,3",
                 "--structure", "klein"]) == 1
    assert capsys.readouterr().err.startswith("error:")
    assert main(["run", "/nowhere/missing.bssram", "--input", "1"]) == 1
    capsys.readouterr()
    assert main(["run", shipped("sum3"), "--input", "one,2,3"]) == 1
    capsys.readouterr()
    assert main(["run", shipped("sum3"), "--input", ""]) == 1
    capsys.readouterr()
    bad = custom("bad.bssram", "1: Z1 := ;\n2: stop.")
    assert main(["run", bad, "--input", "1"]) == 1
    assert "line" in capsys.readouterr().err


def test_oracle_file(shipped, custom, capsys):
    table = custom("members.txt", "# members\n4\n")
    path = shipped("nonneg-oracle-decider")
    assert main(["run", path, "--input", "4", "--oracle", table]) == 0
    assert capsys.readouterr().out == "(1)\n"
    assert main(["run", path, "--input", "5", "--oracle", table]) == 0
    assert capsys.readouterr().out == "(0)\n"


def test_structure_config(custom, capsys):
    cfg = custom("two.cfg", FINITE_CFG)
    flip = custom("flip.bssram", "1: Z1 := f1^1(Z1);\n2: stop.")
    assert main(["run", flip, "--input", "a", "--structure-config", cfg]) == 0
    assert capsys.readouterr().out == "(b)\n"
