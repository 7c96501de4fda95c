import csv
import json
import subprocess
import sys

import pytest

from heyting_ecc.cli import QueryReport, main
from heyting_ecc.topology import builtin

from corpus import EM, LINEARITY


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out.strip().splitlines()
    report = QueryReport.from_json(out[-1])
    return code, report, out[:-1]


# ------------------------------------------------------------------- check


def test_check(capsys):
    code, rep, text = run(capsys, "check", EM)
    assert code == 0 and rep.data["type"] == "Prop"
    code, rep, _ = run(capsys, "check", "fun P : Prop => P")
    assert code == 0 and rep.data["type"] == "Prop -> Prop"


def test_check_restricted_product(capsys):
    code, rep, text = run(capsys, "check", "--ctx", "P : Prop; Q : P -> Prop", "forall h : P, Q h")
    assert code == 1
    assert rep.data["error"] == "RestrictedPiViolation"
    assert rep.data["span"] == "1:1"
    assert "RestrictedPiViolation" in text[0]


def test_check_errors(capsys):
    code, rep, _ = run(capsys, "check", "forall P Prop, P")
    assert code == 1 and rep.data["error"] == "ParseError" and "span" in rep.data
    code, rep, _ = run(capsys, "check", "--ctx", "P : Prop", "f P")
    assert code == 1 and rep.data["error"] == "UnboundVariable"
    code, rep, _ = run(capsys, "check", "--ctx", "h : P", "h")
    assert code == 1 and rep.data["error"] == "IllFormedContext"


# -------------------------------------------------------------------- eval


@pytest.mark.parametrize(
    "model, term, rendered",
    [
        ("sierpinski", "False", "Open {}"),
        ("sierpinski", EM, "Open {0}"),
        ("three_point", LINEARITY, "Open {a,b}"),
        ("sierpinski", "Prop", "FinSet{Open {}, Open {0}, Open {0,1}}"),
        ("classical", "fun P : Prop => fun q : P => q", "Point"),
    ],
)
def test_eval(capsys, model, term, rendered):
    code, rep, text = run(capsys, "eval", "--model", model, term)
    assert code == 0
    assert text == [rendered]
    assert rep.data["rendered"] == rendered


def test_eval_errors(capsys):
    code, rep, _ = run(capsys, "eval", "fun A : Type0 => A")
    assert code == 1 and rep.data["error"] == "NonEnumerableDomain"
    code, rep, _ = run(capsys, "eval", "--model", "nowhere", "False")
    assert code == 1 and rep.data["error"] == "UnknownModel"
    code, rep, _ = run(capsys, "eval", "x x")
    assert code == 1 and rep.data["error"] == "PreconditionViolated"


def test_eval_figure(capsys, tmp_path):
    path = tmp_path / "lattice.png"
    code, rep, _ = run(capsys, "eval", "--model", "three_point", "--figure", str(path), LINEARITY)
    assert code == 0 and path.stat().st_size > 0
    assert rep.data["figure"] == str(path)


# ------------------------------------------------------------------- valid


@pytest.mark.parametrize(
    "model, term, code, result",
    [
        ("classical", EM, 0, "valid"),
        ("sierpinski", EM, 2, "invalid"),
        ("sierpinski", LINEARITY, 0, "valid"),
        ("three_point", LINEARITY, 2, "invalid"),
        ("sierpinski", f"({LINEARITY}) -> ({EM})", 2, "invalid"),
    ],
)
def test_valid(capsys, model, term, code, result):
    got, rep, text = run(capsys, "valid", "--model", model, term)
    assert got == code and rep.result == result
    if result == "invalid":
        assert "is not in" in text[0]
        assert rep.data["reference_point"] == builtin(model).reference_name


def test_valid_with_context(capsys):
    code, rep, text = run(capsys, "valid", "--ctx", "P : Prop", "P \\/ ~P")
    assert code == 2
    assert rep.data["environment"] == [{"kind": "Open", "points": ["0"]}]
    assert text[1] == "  under P = Open {0}"
    code, rep, text = run(capsys, "valid", "--ctx", "h : False", "False")
    assert code == 0 and rep.result == "vacuous" and rep.data["vacuous"]


def test_valid_rejects_non_propositions(capsys):
    code, rep, _ = run(capsys, "valid", "Prop")
    assert code == 1 and rep.result == "error"


# ------------------------------------------------------------------- table


def test_table_sierpinski(capsys):
    code, rep, text = run(capsys, "table", "--model", "sierpinski", "--op", "exp")
    assert code == 0
    assert rep.data["rows"] == [["2", "0", "0"], ["2", "2", "1"], ["2", "2", "2"]]
    assert len(text) == 2 + 3


def test_table_three_point(capsys):
    code, rep, _ = run(capsys, "table", "--model", "three_point")
    assert [o["name"] for o in rep.data["opens"]] == ["φ", "α", "β", "γ", "X"]
    assert rep.data["rows"][4] == ["X"] * 5
    assert rep.data["rows"][3] == ["X", "X", "X", "X", "γ"]


def test_table_classical(capsys):
    code, rep, _ = run(capsys, "table", "--model", "classical")
    assert code == 0
    assert {c for row in rep.data["rows"] for c in row} <= {"0", "1"}
    assert rep.data["rows"] == [["1", "0"], ["1", "1"]]


def test_table_other_ops(capsys):
    _, rep, _ = run(capsys, "table", "--model", "three_point", "--op", "meet")
    assert rep.data["rows"][1][2] == "φ"
    _, rep, _ = run(capsys, "table", "--model", "three_point", "--op", "join")
    assert rep.data["rows"][1][2] == "γ"


def test_table_files(capsys, tmp_path):
    csv_path, fig = tmp_path / "t.csv", tmp_path / "t.png"
    code, rep, _ = run(capsys, "table", "--model", "sierpinski", "--csv", str(csv_path), "--figure", str(fig))
    assert code == 0 and fig.stat().st_size > 0
    with open(csv_path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["x^y", "0", "1", "2"]
    assert rows[1:] == [["0", "2", "0", "0"], ["1", "2", "2", "1"], ["2", "2", "2", "2"]]
    code, rep, _ = run(capsys, "table", "--op", "meet", "--figure", str(fig))
    assert code == 1


# ------------------------------------------------------------------ search


def test_search_excluded_middle(capsys):
    code, rep, _ = run(capsys, "search", "--goal", EM, "--max-points", "2")
    assert code == 0 and rep.result == "countermodel"
    assert len(rep.data["model"]["points"]) == 2


def test_search_round_trip(capsys, tmp_path):
    path = tmp_path / "cm.json"
    code, rep, _ = run(capsys, "search", "--axiom", LINEARITY, "--goal", EM, "--max-points", "2", "--output", str(path))
    assert code == 0
    assert len(json.loads(path.read_text())["points"]) <= 2
    assert run(capsys, "valid", "--model", str(path), LINEARITY)[0] == 0
    assert run(capsys, "valid", "--model", str(path), EM)[0] == 2


def test_search_nothing_found(capsys):
    code, rep, text = run(capsys, "search", "--goal", "False -> False", "--max-points", "4")
    assert code == 3 and rep.result == "none"


def test_search_rejects_non_propositions(capsys):
    code, rep, _ = run(capsys, "search", "--goal", "Prop")
    assert code == 1


def test_search_figure(capsys, tmp_path):
    fig = tmp_path / "cm.png"
    code, rep, _ = run(capsys, "search", "--goal", EM, "--max-points", "2", "--figure", str(fig))
    assert code == 0 and fig.stat().st_size > 0


# --------------------------------------------------------- point condition


@pytest.mark.parametrize(
    "model, hood",
    [("sierpinski", ["0", "1"]), ("three_point", ["a", "b", "x"]), ("classical", ["·"])],
)
def test_point_condition(capsys, model, hood):
    code, rep, text = run(capsys, "point-condition", "--model", model)
    assert code == 0
    assert rep.data["minimal_neighborhood"] == hood
    assert rep.data["holds"] is True
    assert text[-1] == "point condition holds"


# ------------------------------------------------------------------ report


def test_report_round_trip():
    rep = QueryReport("eval False", "X = {0,1}", "ok", {"value": [1, {"a": None}]}, ["Open {}"])
    assert QueryReport.from_json(rep.to_json()) == rep


def test_json_flag_prints_only_json(capsys):
    code = main(["--json", "eval", "False"])
    out = capsys.readouterr().out.strip().splitlines()
    assert code == 0 and len(out) == 1
    assert json.loads(out[0])["data"]["rendered"] == "Open {}"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "heyting_ecc", "valid", "--model", "sierpinski", EM],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 2
    assert json.loads(proc.stdout.strip().splitlines()[-1])["result"] == "invalid"


def test_fuel_from_environment():
    # the argument's type only matches the domain after six beta steps
    redex = "(fun P : Prop => P) ((fun P : Prop => P) ((fun P : Prop => P) False))"
    term = f"(fun h : False -> False => h) (fun x : {redex} => x)"
    codes = []
    for fuel in ("3", "100"):
        proc = subprocess.run(
            [sys.executable, "-m", "heyting_ecc", "check", term],
            capture_output=True,
            text=True,
            env={"HEYTING_ECC_FUEL": fuel},
            check=False,
        )
        codes.append((proc.returncode, json.loads(proc.stdout.strip().splitlines()[-1])))
    assert codes[0][0] == 1 and codes[0][1]["data"]["error"] == "FuelExhausted"
    assert codes[1][0] == 0 and codes[1][1]["data"]["type"] == "(forall P : Prop, P) -> forall P : Prop, P"
