import json
import subprocess
import sys

import pytest

from k3aut.cli import main
from k3aut.report import SCHEMA_VERSION, ReportDocument, render_text


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_l3_json(capsys):
    code, out, _ = run(["compute", "--family", "L", "--d", "3", "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == SCHEMA_VERSION
    assert doc["report"]["presentation"]["structure"] == "Z2"
    assert doc["report"]["aut_generators"] == {"-S0-": [1, 3, 0, -1]}


def test_compute_m5_text(capsys):
    code, out, _ = run(["compute", "--family", "M", "--d", "5"], capsys)
    assert code == 0
    assert "structure: Z2_star_Z2" in out
    assert "X^2 = [[24, 5], [-5, -1]]" in out
    assert "DISCREPANCY" in out


def test_json_deterministic(capsys):
    docs = []
    for _ in range(2):
        _, out, _ = run(["compute", "--family", "M", "--d", "7", "--format", "json"], capsys)
        docs.append(ReportDocument.from_json(out).to_json(include_timing=False))
    assert docs[0] == docs[1]


def test_roundtrip(capsys):
    _, out, _ = run(["compute", "--gram", "4,2,-6", "--format", "json"], capsys)
    doc = ReportDocument.from_json(out)
    assert ReportDocument.from_json(doc.to_json()) == doc
    assert doc.to_json() == out


def test_text_and_json_agree(capsys):
    for argv in (["--family", "L", "--d", "5"], ["--family", "M", "--d", "5"], ["--gram", "2,2,0"]):
        _, js, _ = run(["compute", *argv, "--format", "json"], capsys)
        _, text, _ = run(["compute", *argv], capsys)
        doc = json.loads(js)
        assert f"structure: {doc['report']['presentation']['structure']} " in text
        for name, (a, b, c, d) in doc["report"]["aut_generators"].items():
            assert f"{name} = [[{a}, {b}], [{c}, {d}]]" in text


def test_depth_env(capsys, monkeypatch):
    monkeypatch.setenv("K3AUT_DEPTH", "5")
    _, out, _ = run(["compute", "--family", "M", "--d", "5", "--format", "json"], capsys)
    assert json.loads(out)["report"]["presentation"]["certificate_depth"] == 5
    _, out, _ = run(["compute", "--family", "M", "--d", "5", "--format", "json", "--depth", "6"], capsys)
    assert json.loads(out)["report"]["presentation"]["certificate_depth"] == 6


def test_out_file(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = run(["compute", "--family", "L", "--d", "3", "--format", "json", "--out", str(target)], capsys)
    assert code == 0 and out == ""
    assert ReportDocument.from_json(target.read_text(encoding="utf-8")).report["gram"] == [2, 3, -2]


@pytest.mark.parametrize(
    "argv,code",
    [
        (["compute", "--gram", "2,1,2"], 3),  # definite
        (["compute", "--gram=-2,1,-2"], 3),  # negative definite
        (["compute", "--gram", "1,3,2"], 3),  # odd diagonal
        (["compute", "--gram", "2,2,2"], 3),  # degenerate
        (["compute", "--gram", "2,3"], 2),
        (["compute", "--gram", "a,b,c"], 2),
        (["compute", "--family", "L", "--d", "4"], 2),
        (["compute", "--family", "M"], 2),
        (["compute"], 2),
        (["compute", "--family", "M", "--d", "1"], 3),
        (["pell", "--D", "16", "--N", "4"], 2),
        (["pell", "--D", "13", "--N", "3"], 2),
        (["verify-paper", "--case", "xx"], 2),
        (["verify-paper", "--case", "ld:4"], 2),
        (["oracle", "--family", "L", "--d", "3", "--bound", "-1"], 2),
        (["nonsense"], 2),
    ],
)
def test_exit_codes(argv, code, capsys):
    assert run(argv, capsys)[0] == code


def test_pell_command(capsys):
    code, out, _ = run(["pell", "--D", "13", "--N", "-4", "--count", "2"], capsys)
    assert code == 0
    assert "(3, 1)" in out and "(36, 10)" in out
    code, out, _ = run(["pell", "--D", "21", "--N", "-4"], capsys)
    assert code == 0 and "unsolvable" in out and "modulo 3" in out


def test_oracle_command(capsys):
    code, out, _ = run(["oracle", "--family", "L", "--d", "3", "--bound", "12"], capsys)
    assert code == 0 and "matched to generator words: 10/10" in out
    code, out, _ = run(["oracle", "--family", "L", "--d", "3", "--bound", "0", "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["isometries"] == []
    code, out, _ = run(["oracle", "--family", "M", "--d", "5", "--bound", "6", "--format", "json"], capsys)
    mats = [r["matrix"] for r in json.loads(out)["isometries"]]
    assert [5, 1, -1, 0] in mats and [0, 1, 1, 0] in mats


def test_verify_paper_cases(capsys):
    code, out, _ = run(["verify-paper", "--case", "l3"], capsys)
    assert code == 0
    assert "PASS        l3     roots (0,1) and (3,-1)" in out
    assert "PASS        l3     Kahler cone is 3x - 2y > 0" in out
    code, out, _ = run(["verify-paper", "--case", "md:3"], capsys)
    assert code == 0
    assert "DISCREPANCY md:3   no (-2)-classes" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "k3aut", "pell", "--D", "5", "--N", "-4"], capture_output=True, text=True)
    assert proc.returncode == 0 and "(1, 1)" in proc.stdout


def test_render_text_has_schema():
    doc = ReportDocument(input={}, report={}, discrepancies=[])
    with pytest.raises(KeyError):
        render_text(doc)
    with pytest.raises(ValueError):
        ReportDocument.from_json('{"schema_version": "other/9"}')
