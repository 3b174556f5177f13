import json
import os
import subprocess
import sys

import pytest

from ringext.cli import build_report, check_witnesses, dumps, main
from ringext.fixtures import BUILTINS, builtin

HERE = os.path.dirname(__file__)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, obj, name="spec.json"):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def explicit_e1(**over):
    spec = {"kind": "explicit", "name": "E1x", "dimA": 2, "dimB": 1,
            "multA": [[0, 0, 0, "1"], [1, 1, 1, "1"]], "unitA": ["1", "1"],
            "multB": [[0, 0, 0, "1"]], "unitB": ["1"], "iota": [["1"], ["1"]]}
    spec.update(over)
    return spec


def test_analyze_e3(capsys):
    code, out, err = run(capsys, "analyze", "builtin:E3", "--format", "machine")
    rep = json.loads(out)
    assert code == 0 and rep["schema"] == "ringext.report/1"
    assert rep["properties"]["left_d2"] and rep["properties"]["right_d2"]
    assert rep["coring"]["all_pass"] and rep["coring"]["coinvariants"]["equals_B"]
    assert "elapsed" in err


def test_analyze_e4_has_no_coring(capsys):
    code, out, _ = run(capsys, "analyze", "builtin:E4", "--format", "machine")
    rep = json.loads(out)
    assert code == 0 and not rep["properties"]["left_d2"] and "coring" not in rep


def test_human_output(capsys):
    code, out, _ = run(capsys, "analyze", "builtin:E1")
    assert code == 0 and "left_d2" in out and "[pass] can o beta = id" in out


def test_bad_scalar_exit_2(capsys, tmp_path):
    spec = explicit_e1(iota=[["1/0"], ["1"]])
    code, _, err = run(capsys, "analyze", write(tmp_path, spec))
    assert code == 2 and "iota[0][0]" in err


def test_float_scalar_rejected(capsys, tmp_path):
    code, _, err = run(capsys, "analyze", write(tmp_path, explicit_e1(unitA=[1.0, "1"])))
    assert code == 2 and "unitA[0]" in err


def test_json_syntax_error_located(capsys, tmp_path):
    code, _, err = run(capsys, "analyze", write(tmp_path, '{"kind":\n  "explicit",, }'))
    assert code == 2 and ":2:" in err


def test_validation_error_names_triple(capsys, tmp_path):
    spec = explicit_e1(multA=[[0, 0, 0, "1"], [0, 0, 1, "1"], [1, 1, 1, "1"]])
    code, _, err = run(capsys, "analyze", write(tmp_path, spec))
    assert code == 2 and "associativity" in err


def test_unknown_builtin(capsys):
    code, _, err = run(capsys, "analyze", "builtin:E9")
    assert code == 2 and "E9" in err


def test_explicit_matches_builtin(capsys, tmp_path):
    a = build_report(builtin("E1"))
    code, out, _ = run(capsys, "analyze", write(tmp_path, explicit_e1(name="E1")), "--format",
                       "machine")
    assert code == 0 and json.loads(out) == json.loads(dumps(a))


def test_group_spec(capsys, tmp_path):
    spec = {"kind": "group", "degree": 3, "generators_G": [[1, 2, 0], [1, 0, 2]],
            "generators_H": [[1, 2, 0]], "name": "S3/A3"}
    code, out, _ = run(capsys, "analyze", write(tmp_path, spec), "--format", "machine")
    rep = json.loads(out)
    assert code == 0 and rep["properties"]["left_d2"] and rep["extension"]["dimB"] == 3
    spec["generators_H"] = [[1, 0]]
    code, _, err = run(capsys, "analyze", write(tmp_path, spec))
    assert code == 2 and "generators_H[0]" in err
    spec["generators_H"] = [[0, 1, 2]]
    spec["generators_G"] = [[1, 2, 0]]
    spec["generators_H"] = [[1, 0, 2]]
    code, _, err = run(capsys, "analyze", write(tmp_path, spec))
    assert code == 2 and "not contained" in err


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_deterministic_bytes(capsys, name):
    _, a, _ = run(capsys, "analyze", f"builtin:{name}", "--format", "machine")
    _, b, _ = run(capsys, "analyze", f"builtin:{name}", "--format", "machine")
    assert a == b


def test_subprocess_determinism():
    cmd = [sys.executable, "-m", "ringext", "analyze", "builtin:E3", "--format", "machine"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and b"elapsed" not in a


@pytest.mark.parametrize("name", ["E5", "E6"])
def test_golden(capsys, name):
    _, out, _ = run(capsys, "analyze", f"builtin:{name}", "--format", "machine")
    with open(os.path.join(HERE, "golden", f"{name}.json")) as fh:
        assert out == fh.read()


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_witness_roundtrip(capsys, tmp_path, name):
    _, out, _ = run(capsys, "analyze", f"builtin:{name}", "--format", "machine")
    path = write(tmp_path, out, "report.json")
    code, res, _ = run(capsys, "analyze", f"builtin:{name}", "--check-witness", path,
                       "--format", "machine")
    res = json.loads(res)
    assert code == 0 and res["all_verified"]
    rep = json.loads(out)
    assert "split_p" in res["witness_check"]
    assert ("quasibase.left" in res["witness_check"]) == rep["properties"]["left_d2"]


def test_tampered_witness_fails(capsys, tmp_path):
    rep = json.loads(dumps(build_report(builtin("E2"))))
    rep["witnesses"]["frobenius"]["xs"][0][0] = "7"
    rep["witnesses"]["h_separable"][0]["r"] = ["0", "0", "0", "0", "9"]  # outside A
    res = check_witnesses(builtin("E2"), rep)
    assert not res["frobenius"] and not res["h_separable"] and res["split_p"]
    path = write(tmp_path, rep, "r.json")
    code, _, _ = run(capsys, "analyze", "builtin:E2", "--check-witness", path)
    assert code == 3


def test_report_for_other_extension(capsys, tmp_path):
    _, out, _ = run(capsys, "analyze", "builtin:E6", "--format", "machine")
    code, _, err = run(capsys, "analyze", "builtin:E3", "--check-witness",
                       write(tmp_path, out, "r.json"))
    assert code == 2 and "E6" in err


def test_self_check_mode(capsys):
    code, out, _ = run(capsys, "analyze", "builtin:E3", "--check-witness")
    assert code == 0 and "FAIL" not in out


def test_sweep_examples(capsys):
    code, out, _ = run(capsys, "sweep-groups", "--max-order", "6", "--format", "machine")
    rows = json.loads(out)["rows"]
    assert code == 0 and json.loads(out)["all_agree"]
    d3 = [r for r in rows if r["G"] == "D3"]
    assert any(r["order_H"] == 3 and r["normal"] and r["d2"] for r in d3)
    assert any(r["order_H"] == 2 and not r["normal"] and not r["d2"] for r in d3)
    code, out, _ = run(capsys, "sweep-groups", "--max-order", "1", "--format", "machine")
    assert len(json.loads(out)["rows"]) == 1
    code, _, _ = run(capsys, "sweep-groups", "--max-order", "13")
    assert code == 2


def test_verify_coring(capsys):
    for name in ("E1", "E6"):
        code, out, _ = run(capsys, "verify-coring", f"builtin:{name}", "--format", "machine")
        rec = json.loads(out)
        assert code == 0 and rec["outcome"] == "D2" and all(rec["items"].values()), name
        assert len(rec["items"]) == 8
    code, out, _ = run(capsys, "verify-coring", "builtin:E4")
    assert code == 0 and "not D2" in out


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0 and all(k in out for k in BUILTINS)
