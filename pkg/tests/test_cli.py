import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from plap.cli import (
    CURVE_COLUMNS,
    SOLUTION_COLUMNS,
    emit_results,
    load_config,
    main,
    parse_config,
    read_csv,
    write_atomic,
)
from plap.errors import ConfigError

DOCS = Path(__file__).resolve().parents[1] / "docs"


def cfg(command="solve", nonlinearity=None, **extra):
    raw = {
        "command": command,
        "problem": {
            "p": 2,
            "n": 1,
            "lambda": 1.0,
            "nonlinearity": nonlinearity or {"kind": "autonomous", "coefficients": [0, -1, 0, 1]},
        },
    }
    raw.update(extra)
    return raw


def write(tmp_path, raw, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(raw))
    return str(path)


def test_minimal_config_defaults(tmp_path):
    rc = load_config(write(tmp_path, cfg()))
    assert rc.command == "solve"
    assert rc.tolerances == {"rtol": 1e-10, "atol": 1e-12, "boundary": 1e-9, "root": 1e-13, "epsilon": 1e-6}
    assert rc.formats == ("csv", "json")
    assert rc.spec.lam == 1.0


def test_p_below_one_names_field():
    raw = cfg()
    raw["problem"]["p"] = 0.9
    with pytest.raises(ConfigError) as exc:
        parse_config(raw)
    assert exc.value.field == "problem.p"


def test_unknown_tag():
    with pytest.raises(ConfigError) as exc:
        parse_config(cfg(nonlinearity={"kind": "cubic"}))
    assert exc.value.field == "problem.nonlinearity.kind"


def test_parse_error_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"command": "solve",\n  "problem": {p: 2}}')
    with pytest.raises(ConfigError) as exc:
        load_config(str(path))
    assert "line 2, column 15" in str(exc.value)


def test_supercritical_rejected_except_for_check():
    nl = {"kind": "model_ab", "a": [1], "b": [1], "q": 7}
    raw = cfg(nonlinearity=nl)
    raw["problem"]["n"] = 3
    with pytest.raises(ConfigError) as exc:
        parse_config(raw)
    assert exc.value.field == "problem.nonlinearity.q"
    raw["command"] = "check"
    assert parse_config(raw).spec.nonlinearity.q == 7


def test_bad_tolerance_and_missing_fields():
    with pytest.raises(ConfigError) as exc:
        parse_config(cfg(tolerances={"rtol": -1}))
    assert exc.value.field == "tolerances.rtol"
    with pytest.raises(ConfigError) as exc:
        parse_config(cfg("curve"))
    assert exc.value.field == "lambdaRange"


def test_rational_coefficients():
    rc = parse_config(cfg(nonlinearity={"kind": "pure_b", "b": ["2", 0, "-1/1"], "q": 3}))
    assert rc.spec.nonlinearity.b.coeffs[2] == -1


def check_cfg(q):
    raw = cfg("check", {"kind": "model_ab", "a": [1], "b": [1], "q": q})
    raw["problem"]["n"] = 3
    return raw


def test_check_pass_exit_zero(tmp_path):
    code = main(["check", "--config", write(tmp_path, check_cfg(3)), "--out", str(tmp_path / "o")])
    assert code == 0
    doc = json.loads((tmp_path / "o" / "check.json").read_text())
    entries = doc["report"]["entries"]
    assert entries and all(e["pass"] for e in entries)
    assert all({"name", "pass", "witness"} <= set(e) for e in entries)


def test_check_supercritical_exit_two(tmp_path):
    code = main(["check", "--config", write(tmp_path, check_cfg(7)), "--out", str(tmp_path / "o")])
    assert code == 2
    doc = json.loads((tmp_path / "o" / "check.json").read_text())
    failed = [e["name"] for e in doc["report"]["entries"] if not e["pass"]]
    assert "(49)" in failed


def test_impossible_bracket_exit_one(tmp_path):
    raw = cfg(alphaBracket=[0.1, 0.2])
    code = main(["solve", "--config", write(tmp_path, raw), "--out", str(tmp_path / "o")])
    assert code == 1
    diag = json.loads((tmp_path / "o" / "diagnostic.json").read_text())["diagnostic"]
    assert diag["error"] == "BracketError" and "bracket" in diag["message"]
    assert not (tmp_path / "o" / "solution.csv").exists()


def test_config_error_exit_one(tmp_path, capsys):
    raw = cfg()
    raw["problem"]["p"] = 0.9
    assert main(["solve", "--config", write(tmp_path, raw)]) == 1
    assert "problem.p" in capsys.readouterr().err


def test_solution_csv_contract(tmp_path):
    out = tmp_path / "o"
    assert main(["solve", "--config", write(tmp_path, cfg()), "--out", str(out)]) == 0
    raw_bytes = (out / "solution.csv").read_bytes()
    assert b"\r" not in raw_bytes
    header, data = read_csv(out / "solution.csv")
    assert tuple(header) == SOLUTION_COLUMNS
    assert data[0, 0] == 1e-6
    first = raw_bytes.decode().splitlines()[1].split(",")
    assert all(float(x) == float(format(float(x), ".17g")) for x in first)
    doc = json.loads((out / "solution.json").read_text())
    assert doc["config"]["problem"]["p"] == 2
    assert set(doc["versions"]) >= {"plap", "numpy", "scipy", "python"}
    assert doc["solution"]["uPrimeAtOne"] < 0


def test_deterministic_csv(tmp_path):
    path = write(tmp_path, cfg())
    main(["solve", "--config", path, "--out", str(tmp_path / "a")])
    main(["solve", "--config", path, "--out", str(tmp_path / "b")])
    assert (tmp_path / "a" / "solution.csv").read_bytes() == (tmp_path / "b" / "solution.csv").read_bytes()


def test_curve_round_trip(tmp_path, cubic_curve):
    rc = parse_config(cfg("curve", lambdaRange=[0.5, 50], output={"directory": str(tmp_path)}))
    curve = cubic_curve.value
    emit_results(curve, rc)
    header, data = read_csv(tmp_path / "curve.csv")
    assert tuple(header) == CURVE_COLUMNS
    expect = np.array([[pt.parameter, pt.alpha, pt.u_prime_at_one, pt.degeneracy_margin] for pt in curve.points])
    assert np.array_equal(data, expect)
    doc = json.loads((tmp_path / "curve.json").read_text())
    assert [pt["alpha"] for pt in doc["curve"]["points"]] == [pt.alpha for pt in curve.points]


def test_format_override(tmp_path):
    out = tmp_path / "o"
    assert main(["solve", "--config", write(tmp_path, cfg()), "--out", str(out), "--format", "json"]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["solution.json"]


def test_atomic_write_leaves_nothing_on_failure(tmp_path):
    target = tmp_path / "x" / "file.csv"

    with pytest.raises(TypeError):
        write_atomic(target, 12345)  # not text: fails inside the write
    assert list(target.parent.iterdir()) == []
    write_atomic(target, "a,b\n")
    write_atomic(target, "c,d\n")
    assert target.read_text() == "c,d\n"
    assert [p.name for p in target.parent.iterdir()] == ["file.csv"]


def test_timemap_identities_homotopy_commands(tmp_path):
    out = tmp_path / "o"
    assert main(["timemap", "--config", write(tmp_path, cfg("timemap", alphas=[1.5, 2.0])), "--out", str(out)]) == 0
    header, data = read_csv(out / "timemap.csv")
    assert header == ["alpha", "lambda", "errorEstimate"] and data.shape == (2, 3)
    assert main(["identities", "--config", write(tmp_path, cfg("identities")), "--out", str(out)]) == 0
    doc = json.loads((out / "identities.json").read_text())
    assert max(doc["residuals"].values()) < 1e-6
    assert doc["oneDimensional"]["qAtX0"] < 0
    hom = cfg("homotopy", {"kind": "pure_b", "b": [2, 0, -1], "q": 3, "bPower": 0}, homotopy={"kind": "coefficientPower", "steps": 4})
    hom["problem"]["n"] = 2
    assert main(["homotopy", "--config", write(tmp_path, hom), "--out", str(out)]) == 0
    header, data = read_csv(out / "homotopy.csv")
    assert data[0, 0] == 0.0 and data[-1, 0] == 1.0


def test_classify_command(tmp_path):
    raw = cfg("classify", {"kind": "autonomous", "coefficients": [0, 0, 0, 1]}, lambdaRange=[1, 4], steps=4)
    assert main(["classify", "--config", write(tmp_path, raw), "--out", str(tmp_path)]) == 0
    shape = json.loads((tmp_path / "classify.json").read_text())["shape"]
    assert shape["folds_detected"] == 0 and shape["alpha_monotone"]


def test_docs_examples_match_schema(tmp_path):
    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads((DOCS / "config.schema.json").read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    for name in ("solve", "curve", "check"):
        raw = json.loads((DOCS / "examples" / f"{name}.json").read_text())
        jsonschema.validate(raw, schema)
        assert parse_config(raw).command == name
    bad = cfg()
    bad["problem"]["p"] = 0.9
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(bad, schema)


def test_console_script(tmp_path):
    raw = check_cfg(3)
    proc = subprocess.run(
        [sys.executable, "-m", "plap.cli", "check", "--config", write(tmp_path, raw), "--out", str(tmp_path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
