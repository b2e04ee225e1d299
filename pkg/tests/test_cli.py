"""Command-line surface: exit codes, determinism, report schema."""

import io
import json
import subprocess
import sys
from contextlib import redirect_stdout

import jsonschema
import pytest

from schwarz_atlas import cli


def run_cli(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli.main(argv)
    return code, buf.getvalue()


def test_enumerate_text_rows():
    code, out = run_cli(["schwarz", "enumerate", "--p-max", "10"])
    assert code == 0
    lines = [ln for ln in out.splitlines() if ln.strip()]
    assert len(lines) == 4
    assert lines[0].startswith("p =   3 :")
    assert lines[-1] == "p =  10 : A2"


def test_enumerate_csv():
    code, out = run_cli(["schwarz", "enumerate", "--p-max", "10", "--format", "csv"])
    assert code == 0
    rows = out.strip().splitlines()
    assert rows[0] == "p,type"
    assert "3,A2" in rows and "10,A2" in rows


def test_enumerate_json_and_schema():
    code, out = run_cli(["schwarz", "enumerate", "--p-max", "12", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, cli.report_schema())
    assert payload["results"]["documented_anomalies_only"] is True


def test_byte_identical_reruns():
    argv = ["schwarz", "enumerate", "--p-max", "30", "--format", "json"]
    _, out1 = run_cli(argv)
    _, out2 = run_cli(argv)
    assert out1 == out2


def test_roots_dump_json():
    code, out = run_cli(["roots", "dump", "--type", "E", "--rank", "7", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, cli.report_schema())
    res = payload["results"]
    assert res["positive_root_count"] == 63
    assert res["coxeter_number"] == 18
    assert res["toric_distances"] == [1, 2, 3]


def test_gauss_monodromy_exit_codes():
    code, out = run_cli(["gauss", "monodromy", "--alpha", "1/84", "--beta", "13/84",
                         "--gamma", "1/2", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, cli.report_schema())
    assert payload["residuals"]["relation_residual"] < 1e-7
    # impossible tolerance forces the numeric-failure exit code
    code, _ = run_cli(["gauss", "monodromy", "--alpha", "1/84", "--beta", "13/84",
                       "--gamma", "1/2", "--tol", "1e-18"])
    assert code == 1


def test_malformed_rational_rejected():
    with pytest.raises(SystemExit) as info:
        cli.main(["gauss", "monodromy", "--alpha", "1/0", "--beta", "1/3",
                  "--gamma", "1/2"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        cli.main(["gauss", "monodromy", "--alpha", "x", "--beta", "1/3",
                  "--gamma", "1/2"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        cli.main(["gauss", "monodromy", "--alpha", "0.25", "--beta", "1/3",
                  "--gamma", "1/2"])
    assert info.value.code == 2


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as info:
        cli.main(["frobnicate"])
    assert info.value.code == 2


def test_torus_flatness_override_fails_numerically():
    code, out = run_cli(["torus", "flatness", "--type", "A", "--rank", "2",
                         "--k", "1/6", "--samples", "2", "--format", "json"])
    assert code == 0
    code, _ = run_cli(["torus", "flatness", "--type", "A", "--rank", "2",
                       "--k", "1/6", "--samples", "2", "--a-override", "7",
                       "--format", "json"])
    assert code == 1


def test_torus_monodromy_json():
    code, out = run_cli(["torus", "monodromy", "--type", "A", "--rank", "2",
                         "--k", "1/4", "--root", "1", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, cli.report_schema())
    assert payload["residuals"]["hecke_residual"] < 1e-6


def test_torus_form_json():
    code, out = run_cli(["torus", "form", "--type", "A", "--rank", "2",
                         "--k", "1/4", "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["results"]["signature"] == [2, 1]
    assert payload["results"]["ball_all_negative"] is True


def test_triangle_tessellate_files(tmp_path):
    svg = tmp_path / "out.svg"
    rep = tmp_path / "report.json"
    code, out = run_cli(["triangle", "tessellate", "--k", "2", "--l", "3", "--m", "7",
                         "--depth", "6", "--svg", str(svg), "--json", str(rep),
                         "--format", "json"])
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, cli.report_schema())
    assert svg.exists()
    side = json.loads(rep.read_text())
    assert side["geometry"] == "hyperbolic"
    assert side["tile_count"] == payload["results"]["tile_count"]
    assert side["max_orthogonality_residual"] < 1e-9


def test_gauss_schwarz_triangle_svg(tmp_path):
    svg = tmp_path / "tri.svg"
    code, out = run_cli(["gauss", "schwarz-triangle", "--kappa", "1/2",
                         "--lambda", "1/3", "--mu", "1/7", "--svg", str(svg),
                         "--format", "json"])
    assert code == 0
    assert json.loads(out)["results"]["geometry"] == "hyperbolic"
    assert svg.read_text().count("<path") == 1


def test_schwarz_check_and_dm():
    code, out = run_cli(["schwarz", "check", "--type", "A", "--rank", "7",
                         "--p", "3", "--format", "json"])
    assert code == 0
    assert json.loads(out)["results"]["passed"] is True
    code, out = run_cli(["schwarz", "dm", "--n", "5", "--p", "4", "--format", "json"])
    assert code == 0
    res = json.loads(out)["results"]
    assert res["hidden_symmetry"] is True and res["verdict"] is True
    code, out = run_cli(["schwarz", "dm", "--n", "5", "--p", "6", "--format", "json"])
    assert code == 0
    assert json.loads(out)["results"]["verdict"] is None  # degenerate weights


def test_dm_scan_cli():
    code, out = run_cli(["schwarz", "dm-scan", "--format", "json"])
    assert code == 0
    res = json.loads(out)["results"]
    assert res["identities_hold"] and res["verdicts_agree"]
    assert res["hidden_symmetry_cases"] == [[10, 2], [6, 3], [4, 5]]


def test_schema_self_describes():
    code, out = run_cli(["schema"])
    assert code == 0
    schema = json.loads(out)
    jsonschema.Draft7Validator.check_schema(schema)


def test_console_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "schwarz_atlas.cli", "schwarz", "enumerate",
         "--p-max", "10"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert "p =  10 : A2" in proc.stdout
