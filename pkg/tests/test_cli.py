import json

import pytest

from glaprolong.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_json(capsys):
    code, out, _ = run(capsys, "build", "H1:H:1,0", "--format", "json")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["dims"] == {"-2": 3, "-1": 4}
    assert rep["verdicts"]["clifford"]["ok"] is True
    assert rep["properties"]["j2"]["ok"] is True


def test_build_reports_j2_failure_without_failing(capsys):
    code, out, _ = run(capsys, "build", "H2:C:1,0:-1", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["properties"]["j2"]["ok"] is False


def test_json_output_is_deterministic(capsys):
    a = run(capsys, "prolong", "H1:C:1,0", "--conformal", "--format", "json")[1]
    b = run(capsys, "prolong", "H1:C:1,0", "--conformal", "--format", "json")[1]
    assert a == b
    assert json.loads(a)["structure"]["killing_signature"] == [4, 4, 0]


def test_prolong_conformal_quaternionic(capsys):
    code, out, _ = run(capsys, "prolong", "H1:H:1,0", "--conformal", "--format", "json")
    rep = json.loads(out)
    assert code == EXIT_OK
    assert rep["dims_vector"] == [3, 4, 7, 4, 3]
    assert rep["structure"]["simple"] is True


def test_prolong_cutoff_limited(capsys):
    rep = json.loads(run(capsys, "prolong", "H1:C:1,0", "--cutoff", "3", "--format", "json")[1])
    assert rep["status"] == "cutoff-limited"


def test_prolong_second_class_g2_vanishes(capsys):
    rep = json.loads(run(capsys, "prolong", "H2:C:1,0:-1", "--conformal", "--format", "json")[1])
    assert rep["g2_dim"] == 0 and rep["structure"]["semisimple"] is False


def test_table_text(capsys):
    code, out, _ = run(capsys, "table", "t38")
    assert code == EXIT_OK
    assert "PASS  t38:H" in out and "SKIP  t38:O" in out


def test_compare(capsys):
    code, out, _ = run(capsys, "compare", "H1:C:1,1", "H1:C':1,1", "--format", "json")
    rep = json.loads(out)
    assert code == EXIT_FAIL and rep["match"] is False
    assert rep["left"]["conformal_prolongation"]["dims"] == rep["right"]["conformal_prolongation"]["dims"]
    code, out, _ = run(capsys, "compare", "H1:H:1,0", "H1:H:1,0", "--format", "json")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["match"] and rep["maps"]["congruence(+1)"]["isomorphism"]
    assert rep["maps"]["congruence(+1)"]["scale_minus1"] == {"exact": "1", "decimal": 1.0}


def test_compare_across_classes(capsys):
    code, out, _ = run(capsys, "compare", "H1:H:1,0", "H2:C:1,0:-1")
    assert code == EXIT_FAIL and "differ" in out


def test_out_file(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "build", "H1:C:1,0", "--format", "json", "--out", str(path))
    assert code == EXIT_OK and out == ""
    assert json.loads(path.read_text())["name"]


def test_file_input(capsys, tmp_path):
    path = tmp_path / "a.json"
    path.write_text(json.dumps({"class": 3, "field": "H'", "S": [["1"]]}))
    code, out, _ = run(capsys, "build", str(path), "--format", "json")
    assert code == EXIT_OK and json.loads(out)["signature_minus2"] == [1, 3]


@pytest.mark.parametrize(
    "argv",
    [
        ("build", "H9:H:1,0"),
        ("table", "t99"),
        ("prolong", "H1:C:1,0", "--cutoff", "0"),
        ("compare", "H1:C:1,0"),
        ("frobnicate", "x"),
        ("build", "missing.json"),
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE and "error" in err


def test_malformed_json_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert run(capsys, "build", str(path))[0] == EXIT_USAGE
