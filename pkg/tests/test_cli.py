import csv
import io
import json
from fractions import Fraction

import pytest

from tsirelson_norms.cli import main
from tsirelson_norms.spaces import registry

from conftest import ALPHA, THETA


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv, "--json")
    return code, (json.loads(out) if out else None), err


@pytest.fixture
def space_files(tmp_path):
    files = {}
    for name, cfg in registry(THETA, ALPHA).items():
        path = tmp_path / (name.replace(":", "_") + ".json")
        path.write_text(cfg.to_json())
        files[name] = str(path)
    return files


def test_eval_e234(space_files):
    code, report, _ = run_json("eval", "--space", space_files["V"], "--vector", "2:1,3:1,4:1")
    assert code == 0
    assert report["outputs"]["value"] == "15/8"
    assert report["display"]["value"] == 1.875
    assert report["space"]["name"] == "V"


def test_eval_iterate(space_files):
    code, report, _ = run_json("eval", "--space", space_files["V"], "--vector", "2:1,3:1,4:1", "--m", "1")
    assert code == 0 and report["outputs"]["value"] == "27/16"


def test_unit_vector_everywhere(space_files):
    for name, path in space_files.items():
        code, report, _ = run_json("eval", "--space", path, "--vector", "5:1")
        assert code == 0 and report["outputs"]["value"] == "1/1", name


def test_vector_from_file(space_files, tmp_path):
    vec = tmp_path / "x.txt"
    vec.write_text("2:1,3:1,4:1\n")
    code, report, _ = run_json("eval", "--space", space_files["V"], "--vector", str(vec))
    assert code == 0 and report["outputs"]["value"] == "15/8"


def test_input_errors(space_files, tmp_path):
    assert run("eval", "--space", space_files["V"], "--vector", "2:3/0")[0] == 2
    assert run("eval", "--space", space_files["V"])[0] == 2
    assert run("eval", "--space", str(tmp_path / "missing.json"), "--vector", "2:1")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "V", "theta": {"kind": "geometric", "ratio": "3/4"}, "extra": 1}')
    code, _, err = run("eval", "--space", str(bad), "--vector", "2:1")
    assert code == 2 and "extra" in err
    assert run("no-such-command")[0] == 2


def test_guard_exit_code(space_files):
    vector = ",".join(f"{j}:1" for j in range(1, 13))
    code, _, err = run("eval", "--space", space_files["V"], "--vector", vector)
    assert code == 3 and "guard" in err


def test_certificate_round_trip(space_files, tmp_path):
    cert = tmp_path / "cert.json"
    code, report, _ = run_json("eval", "--space", space_files["Vprime"], "--vector", "2:1,3:1,4:1",
                               "--emit-certificate", str(cert))
    assert code == 0 and report["certificate_path"] == str(cert)
    code, report, _ = run_json("certify", "--certificate", str(cert))
    assert code == 0 and report["outputs"]["matches"] and report["outputs"]["recomputed"] == "57/32"


def test_certify_detects_tampering(space_files, tmp_path):
    cert = tmp_path / "cert.json"
    run("eval", "--space", space_files["V"], "--vector", "2:1,3:1,4:1", "--emit-certificate", str(cert))
    data = json.loads(cert.read_text())
    data["certificate"]["weight"] = "4/5"
    cert.write_text(json.dumps(data))
    code, report, _ = run_json("certify", "--certificate", str(cert))
    assert code == 1 and not report["outputs"]["valid"]
    assert "weight" in report["outputs"]["reason"]


def test_certify_wrong_vector(space_files, tmp_path):
    cert = tmp_path / "cert.json"
    run("eval", "--space", space_files["V"], "--vector", "2:1,3:1,4:1", "--emit-certificate", str(cert))
    code, report, _ = run_json("certify", "--certificate", str(cert), "--vector", "2:1,3:1,4:1/2")
    assert code == 1
    assert "mismatch" in report["outputs"]["reason"]


def test_oracle_agrees(space_files):
    for name in ("V", "W", "T"):
        code, report, _ = run_json("oracle", "--space", space_files[name], "--vector", "2:1,3:-1/2,5:1/3,6:1", "--m", "3")
        assert code == 0 and report["outputs"]["agree"], name


def test_oracle_guard(space_files):
    code, _, _ = run("oracle", "--space", space_files["V"], "--vector", "2:1,3:1,4:1", "--oracle-max", "2")
    assert code == 3


def test_iterate_listing(space_files):
    code, report, _ = run_json("iterate", "--space", space_files["V"], "--vector", "2:1,3:1,4:1", "--m", "3")
    assert [r["value"] for r in report["outputs"]["iterates"]] == ["1/1", "27/16", "15/8", "15/8"]


def test_schreier_commands():
    code, report, _ = run_json("schreier", "enumerate", "--window", "1,2,3", "--n", "1")
    assert report["outputs"]["maximal_members"] == [[1], [2, 3]]
    code, report, _ = run_json("schreier", "member", "--set", "1,2", "--n", "1")
    assert report["outputs"]["member"] is False
    code, report, _ = run_json("schreier", "norm", "--vector", "1:1,2:1,3:1", "--n", "1")
    assert report["outputs"]["value"] == "2/1"


def test_witness_commands(space_files):
    code, report, _ = run_json("witness-c0", "--space", space_files["V"], "--m", "0", "--n", "3")
    assert code == 0 and report["outputs"]["low_value"] == "1/1" and report["outputs"]["high_value"] == "9/4"
    code, report, _ = run_json("witness-l1", "--space", space_files["Vprime"], "--vector", "4:1")
    assert code == 0 and (report["outputs"]["p"], report["outputs"]["q"]) == (1, 1)
    assert report["outputs"]["mass"] == "1/2"
    code, report, _ = run_json("witness-l1", "--space", space_files["Vprime"], "--vector", "4:1", "--threshold", "1")
    assert report["outputs"]["found"] is False


def test_compare_and_noniso(space_files):
    code, report, _ = run_json("compare", "--space", space_files["V"], "--vector", "2:1,3:1,4:1")
    assert code == 0 and Fraction(report["outputs"]["ratio"]) >= 1
    code, report, _ = run_json("experiment-noniso", "--theta", "harmonic", "--n-max", "10")
    assert report["outputs"]["first_failure"] == 2
    code, report, _ = run_json("experiment-noniso", "--theta", "geometric:1/2", "--n-max", "30")
    assert report["outputs"]["first_failure"] is None
    assert run("experiment-noniso", "--theta", "cubic")[0] == 2


def test_json_and_csv_agree(space_files):
    args = ("eval", "--space", space_files["Vprime"], "--vector", "2:1,3:-1/2,5:1/3")
    _, report, _ = run_json(*args)
    _, text, _ = run(*args, "--csv")
    rows = dict(csv.reader(io.StringIO(text)))
    assert rows["outputs.value"] == report["outputs"]["value"]
    assert float(rows["display.value"]) == report["display"]["value"]
    assert rows["space.hash"] == report["space"]["hash"]


def test_reports_deterministic_modulo_timing(space_files, tmp_path):
    args = ("eval", "--space", space_files["W"], "--vector", "2:1,4:1/2,5:1", "--out", str(tmp_path / "o"))
    first = run_json(*args)[1]
    second = run_json(*args)[1]
    first.pop("timing_seconds"), second.pop("timing_seconds")
    assert first == second
    assert (tmp_path / "o" / "report.json").exists()


def test_suite_command():
    code, report, _ = run_json("suite", "--seed", "3", "--count", "2", "--battery", "fast_growing", "--battery", "oracle")
    assert code == 0
    assert set(report["outputs"]["batteries"]) == {"fast_growing", "oracle"}
    assert report["outputs"]["failed"] == 0
