import json
import math
from fractions import Fraction
from pathlib import Path

import jsonschema
import numpy as np
import pytest

from qmeasure.cli import main, render_text
from qmeasure.report import Check, ScenarioReport, dumps, load_schema, to_jsonable
from qmeasure.scenarios import SCENARIOS, absorption_energy_check, run_scenario
from qmeasure.state import maximally_mixed

ROOT = Path(__file__).resolve().parents[1]

FAST = {
    "ghz-trace": [],
    "w-trace": [],
    "povm-three": [],
    "erasure": ["--trials", "4000", "--samples", "20"],
    "trace-equivalence": ["--samples", "20"],
    "entropy-gain": ["--samples", "20"],
    "conservation-demo": ["--e0", "1/3", "--e1", "7/4"],
    "demon": ["--steps", "40"],
}


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


@pytest.mark.parametrize("name", SCENARIOS)
def test_every_scenario_validates_against_schema(name, capsys):
    code, out = _run(capsys, name, *FAST[name])
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema())
    assert doc["scenario"] == name
    assert code == 0
    assert doc["passed"] is True


def test_docs_schema_matches_packaged_schema():
    docs = json.loads((ROOT / "docs" / "report.schema.json").read_text())
    assert docs == load_schema()


@pytest.mark.parametrize("name", ["erasure", "trace-equivalence", "demon"])
def test_output_is_byte_identical_for_same_seed(name, capsys):
    args = ["--trials", "300", "--samples", "5"] if name == "erasure" else FAST[name]
    _, a = _run(capsys, name, "--seed", "17", *args)
    _, b = _run(capsys, name, "--seed", "17", *args)
    _, c = _run(capsys, name, "--seed", "18", *args)
    assert a == b
    assert a != c


def test_ghz_report_contents(capsys):
    _, out = _run(capsys, "--scenario", "ghz-trace")
    doc = json.loads(out)
    np.testing.assert_allclose(doc["results"]["eigenvalues"], [0.5, 0.5, 0.0, 0.0], atol=1e-10)


def test_demon_zero_steps(capsys):
    code, out = _run(capsys, "demon", "--steps", "0")
    doc = json.loads(out)
    assert code == 0
    assert all(v == [] for v in doc["results"]["series"].values())
    led = doc["results"]["final_ledger"]
    assert led["total"] == led["gas_entropy"] == led["environment_entropy"] == 0.0


def test_demon_inert_threshold(capsys):
    code, out = _run(capsys, "demon", "--steps", "100", "--threshold", "inf")
    doc = json.loads(out)
    assert code == 0
    assert doc["results"]["config"]["speed_threshold"] == "inf"


def test_demon_config_document(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_molecules": 400, "steps": 10, "seed": 3}))
    _, out = _run(capsys, "demon", "--config", str(cfg), "--steps", "5")
    doc = json.loads(out)
    assert doc["seed"] == 3
    assert doc["results"]["config"]["n_molecules"] == 400
    assert len(doc["results"]["series"]["step"]) == 5


def test_exit_code_usage_errors(tmp_path, capsys):
    for argv in (["bogus"], [], ["ghz-trace", "--seed", "-1"], ["demon", "--molecules", "0"],
                 ["ghz-trace", "--scenario", "w-trace"], ["ghz-trace", "--config", "x.json"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    with pytest.raises(SystemExit) as exc:
        main(["demon", "--config", str(bad)])
    assert exc.value.code == 2
    capsys.readouterr()


def test_exit_code_failed_check(capsys):
    # a 300-molecule gas has too few gate arrivals per step for the per-step bound
    code, out = _run(capsys, "demon", "--molecules", "300", "--steps", "50",
                     "--memory-bits", "32", "--seed", "4")
    doc = json.loads(out)
    assert code == 1
    assert doc["passed"] is False
    failed = [c["name"] for c in doc["checks"] if not c["passed"]]
    assert failed == ["second_law_every_step"]


def test_text_format_and_out_file(tmp_path, capsys):
    out = tmp_path / "r.txt"
    code, printed = _run(capsys, "povm-three", "--format", "text", "--out", str(out))
    assert code == 0 and printed == ""
    text = out.read_text()
    assert text.startswith("scenario: povm-three")
    header = text.splitlines()[2]
    assert header.split() == ["check", "status", "value", "tolerance"]


def test_demon_csv(tmp_path, capsys):
    path = tmp_path / "d.csv"
    _run(capsys, "demon", "--steps", "7", "--csv", str(path))
    rows = path.read_text().splitlines()
    assert len(rows) == 8
    assert rows[0].split(",")[0] == "step"


def test_run_scenario_unknown_name():
    with pytest.raises(KeyError):
        run_scenario("nope")


def test_conservation_bookkeeping_is_exact():
    book = absorption_energy_check(Fraction(1, 3), Fraction(7, 4))
    delta = Fraction(7, 4) - Fraction(1, 3)
    assert book["photon_energy"] == delta / 2
    assert book["superposition_deficit"] == 0
    assert book["ground_deficit"] == -delta / 2
    assert book["excited_deficit"] == delta / 2


def test_json_encoding_round_trips_floats():
    values = [0.1, 1 / 3, 2.0**-1074, 1.7976931348623157e308, -0.0]
    back = json.loads(dumps({"x": values}))["x"]
    assert back == values
    assert json.loads(dumps({"z": 1 + 2j})) == {"z": {"re": 1.0, "im": 2.0}}
    assert json.loads(dumps({"v": math.inf}))["v"] == "inf"


def test_to_jsonable_types():
    out = to_jsonable({"f": Fraction(3, 4), "a": np.arange(3), "b": np.bool_(True),
                       "rho": maximally_mixed((2,))})
    assert out["f"] == "3/4"
    assert out["a"] == [0, 1, 2]
    assert out["b"] is True
    assert out["rho"]["dims"] == [2]
    with pytest.raises(TypeError):
        to_jsonable(object())


def test_report_needs_checks():
    rep = ScenarioReport("ghz-trace", 0, {}, {}, [])
    assert rep.passed is False
    rep.checks.append(Check("x", True, 1.0, None))
    assert rep.passed
    assert "PASS" in render_text(rep)
