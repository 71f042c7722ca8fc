import json
import math
import subprocess
import sys

import pytest

from oddgon.cli import main
from oddgon.geometry import vsub
from oddgon.surface import UPPER, build_surface


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run_cli(capsys, *argv)
    return code, json.loads(out)


def test_surface_json(capsys):
    code, data = run_json(capsys, "surface", "--n", "7")
    assert code == 0
    assert data["n"] == 7
    assert len(data["polygons"]["upper"]) == 7


def test_derive_text_fixture(capsys):
    code, out = run_cli(capsys, "derive", "--seq", "BECE", "--cyclic", "--n", "5")
    assert code == 0
    assert out.strip() == "BC"


def test_derive_empty_status(capsys):
    code, out = run_cli(capsys, "derive", "--seq", "ABC", "--cyclic", "--n", "5")
    assert code == 0
    assert out.strip() == ""
    code, data = run_json(capsys, "derive", "--seq", "ABC", "--cyclic", "--n", "5", "--format", "json")
    assert code == 0
    assert data["status"] == "empty"
    assert data["derived"] == ""


def test_derive_method_diagram_agrees(capsys):
    code, out = run_cli(capsys, "derive", "--seq", "BECE", "--cyclic", "--method", "diagram")
    assert code == 0
    assert out.strip() == "BC"


def test_derive_method_diagram_invalid_path_is_failure(capsys):
    code, out = run_cli(capsys, "derive", "--seq", "ACAC", "--cyclic", "--method", "diagram")
    assert code == 1
    assert json.loads(out)["error"] == "invalid-path"


def test_trace_periodic_orbit(capsys):
    code, data = run_json(
        capsys, "trace", "--edge", "S2", "--t", "0.55", "--theta", str(math.pi / 10)
    )
    assert code == 0
    assert data["letters"] == list("BECE")
    assert data["periodic"] is True


def test_trace_corner_hit_is_failure(capsys):
    s = build_surface(5)
    p = s.edge_seg(UPPER, 2).point_at(0.5)
    d = vsub(s.vertices(UPPER)[3], p)
    theta = math.atan2(d[1], d[0])
    code, data = run_json(capsys, "trace", "--edge", "S2", "--t", "0.5", "--theta", str(theta))
    assert code == 1
    assert data["error"] == "corner-hit"


def test_derive_geometric(capsys):
    code, data = run_json(
        capsys, "derive-geometric", "--edge", "S2", "--t", "0.55", "--theta", str(math.pi / 10)
    )
    assert code == 0
    assert data["derived"] == "BC"
    assert data["cyclic"] is True


def test_diagram_stages(capsys):
    code, data = run_json(capsys, "diagram", "--stage", "arrows")
    assert code == 0
    assert len(data["arrows"]) == 8
    code, data = run_json(capsys, "diagram", "--stage", "primed")
    assert code == 0
    assert data["stage"] == "primed"
    assert len(data["arrows"]) == 12
    code, out = run_cli(capsys, "diagram", "--stage", "dual", "--format", "dot")
    assert code == 0
    assert out.startswith("digraph")


def test_guide_point_count(capsys):
    code, data = run_json(capsys, "guide", "--n", "9")
    assert code == 0
    assert len(data["points"]) == 4 * ((9 - 1) // 2 + 1)


def test_verify_passes(capsys):
    code, data = run_json(capsys, "verify", "--n", "5", "--checks", "moduli,reassembly", "--seed", "42")
    assert code == 0
    assert data["checks"]["moduli"]["pass"] is True
    assert data["checks"]["reassembly"]["pass"] is True
    assert data["precision_digits"] in (64, 128)


def test_verify_failure_exits_one(capsys):
    # a tolerance below float resolution must fail honestly
    code, data = run_json(capsys, "verify", "--n", "5", "--checks", "moduli", "--tol", "1e-20")
    assert code == 1
    assert data["checks"]["moduli"]["pass"] is False


def test_verify_unknown_check_is_usage_error(capsys):
    code = main(["verify", "--checks", "bogus"])
    assert code == 2


def test_verify_reports_extended_precision(capsys, monkeypatch):
    monkeypatch.setenv("ODDGON_PRECISION", "extended")
    code, data = run_json(capsys, "verify", "--n", "5", "--checks", "moduli")
    assert code == 0
    assert data["precision_digits"] == 128


def test_torus_rule_via_cli(capsys):
    code, data = run_json(capsys, "torus", "derive", "--seq", "ABBB", "--cyclic")
    assert code == 0
    assert data["derived"] == "ABB"


def test_torus_geometric_via_cli(capsys):
    code, data = run_json(capsys, "torus", "derive", "--slope", "1/3")
    assert code == 0
    assert data["derived"] == "ABB"
    assert data["topology"] == "cyclic"


def test_torus_trace_via_cli(capsys):
    code, data = run_json(capsys, "torus", "trace", "--theta", "0.3", "--crossings", "12")
    assert code == 0
    assert set("".join(data["letters"])) <= {"A", "B"}


def test_torus_without_direction_is_usage_error(capsys):
    assert main(["torus", "trace"]) == 2


def test_render_writes_svg(tmp_path, capsys):
    out = tmp_path / "fig.svg"
    code = main(["render", "--n", "5", "--theta", "0.31", "--aux", "--out", str(out)])
    assert code == 0
    text = out.read_text()
    assert text.startswith("<svg")
    assert "polyline" in text or "line" in text


def test_usage_error_exit_codes(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["not-a-command"])
    assert exc.value.code == 2
    assert main(["trace", "--edge", "Q", "--t", "0.5", "--theta", "0.1"]) == 2


def test_seeded_runs_are_byte_identical(capsys):
    args = ["verify", "--n", "5", "--checks", "moduli,identities", "--seed", "9"]
    _, first = run_cli(capsys, *args)
    _, second = run_cli(capsys, *args)
    assert first == second


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "oddgon.cli", "derive", "--seq", "BECE", "--cyclic", "--n", "5"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "BC"
