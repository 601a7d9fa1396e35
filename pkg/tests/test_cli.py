import json
import math

import pytest

from slicekit.cli import main
from slicekit.paths import Line, beta_path, make_npart_path
from slicekit.quat import Quaternion


@pytest.fixture
def beta_file(tmp_path):
    target = tmp_path / "beta.json"
    target.write_text(beta_path().to_json())
    return str(target)


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_monodromy_sqrt_beta(capsys, beta_file):
    code, out, _ = _run(
        capsys,
        ["monodromy", "--model", "sqrt", "--path", beta_file, "--units", "[1,0,0];[0,1,0]"],
    )
    assert code == 0
    payload = json.loads(out)
    # j^-1 * i = -j*i = k
    value = Quaternion.from_list(payload["value"])
    assert (value - Quaternion(0, 0, 0, 1)).norm() < 1e-9
    assert payload["parts"] == 2
    assert (Quaternion.from_list(payload["germ_key"]["point"]) - Quaternion(1)).norm() < 1e-9


def test_monodromy_log_beta_with_analytic(capsys, beta_file):
    code, out, _ = _run(
        capsys,
        [
            "monodromy",
            "--model",
            "log",
            "--path",
            beta_file,
            "--units",
            "[1,0,0];[0,1,0]",
            "--check-analytic",
        ],
    )
    assert code == 0
    payload = json.loads(out)
    expected = Quaternion(0, math.pi, -math.pi, 0)
    assert (Quaternion.from_list(payload["value"]) - expected).norm() < 1e-9
    assert payload["analytic_deviation"] < 1e-9


def test_monodromy_csv(capsys, beta_file):
    code, out, _ = _run(
        capsys,
        [
            "monodromy",
            "--model",
            "sqrt",
            "--path",
            beta_file,
            "--units",
            "[1,0,0];[0,1,0]",
            "--format",
            "csv",
        ],
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("value_w,")
    assert len(lines) == 2


def test_monodromy_parse_error(capsys):
    code, _, err = _run(
        capsys, ["monodromy", "--model", "sqrt", "--path", "{bad", "--units", "[1,0,0]"]
    )
    assert code == 2
    assert "error" in err


def test_monodromy_branch_crossing(capsys, tmp_path):
    crossing = make_npart_path([Line(1 + 0j, -1 + 0j)])
    target = tmp_path / "crossing.json"
    target.write_text(crossing.to_json())
    code, _, err = _run(
        capsys,
        ["monodromy", "--model", "sqrt", "--path", str(target), "--units", "[1,0,0]"],
    )
    assert code == 3
    assert "domain error" in err


def test_monodromy_polynomial(capsys, beta_file):
    code, out, _ = _run(
        capsys,
        [
            "monodromy",
            "--model",
            "poly",
            "--coeffs",
            '{"coeffs": [[0,0,0,0],[0,0,0,0],[1,0,0,0]]}',
            "--path",
            beta_file,
            "--units",
            "[1,0,0];[0,1,0]",
        ],
    )
    assert code == 0
    value = Quaternion.from_list(json.loads(out)["value"])
    assert (value - Quaternion(1)).norm() < 1e-9  # (beta ends at 1) squared


def test_repformula_log(capsys, beta_file):
    code, out, _ = _run(
        capsys,
        ["repformula", "--model", "log", "--path", beta_file, "--units", "[1,0,0];[0,1,0]"],
    )
    assert code == 0
    payload = json.loads(out)
    g = [Quaternion.from_list(entry) for entry in payload["G"]]
    expected = [Quaternion(), Quaternion(math.pi), Quaternion(), Quaternion(math.pi)]
    assert all((a - b).norm() < 1e-9 for a, b in zip(g, expected))
    assert payload["invariance_dev"] < 1e-8
    value = Quaternion.from_list(payload["value"])
    assert (value - Quaternion(0, math.pi, -math.pi, 0)).norm() < 1e-9


def test_repformula_with_explicit_reference_file(capsys, beta_file, tmp_path):
    from slicekit.quat import ImaginaryUnit
    from slicekit.sliceunits import eta

    j_file = tmp_path / "reference.json"
    j_file.write_text(eta(2, ImaginaryUnit(0, 0, 1)).to_json())
    code, out, _ = _run(
        capsys,
        ["repformula", "--model", "sqrt", "--path", beta_file, "--J", str(j_file)],
    )
    assert code == 0
    payload = json.loads(out)
    g = [Quaternion.from_list(entry) for entry in payload["G"]]
    expected = [Quaternion(), Quaternion(), Quaternion(-1), Quaternion()]
    assert all((a - b).norm() < 1e-9 for a, b in zip(g, expected))


def test_monodromy_one_part_counterexample(capsys, tmp_path):
    from slicekit.paths import half_turns, make_npart_path

    path_file = tmp_path / "five.json"
    path_file.write_text(make_npart_path([half_turns(5)]).to_json())
    code, out, _ = _run(
        capsys,
        ["monodromy", "--model", "log", "--path", str(path_file), "--units", "[0.8,0.6,0]"],
    )
    assert code == 0
    payload = json.loads(out)
    key_point = Quaternion.from_list(payload["germ_key"]["point"])
    key_value = Quaternion.from_list(payload["germ_key"]["value"])
    assert (key_point - Quaternion(-1)).norm() < 1e-9
    expected = 5 * math.pi * Quaternion(0, 0.8, 0.6, 0)
    assert (key_value - expected).norm() < 1e-9


def test_starprod_symmetrization(capsys):
    code, out, _ = _run(
        capsys,
        ["starprod", "--f", '{"coeffs": [[0,-1,0,0],[1,0,0,0]]}', "--op", "sym"],
    )
    assert code == 0
    coeffs = json.loads(out)["coeffs"]
    assert coeffs == [[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]]


def test_starprod_product(capsys):
    code, out, _ = _run(
        capsys,
        [
            "starprod",
            "--f",
            '{"coeffs": [[0,0,0,0],[0,1,0,0]]}',
            "--g",
            '{"coeffs": [[0,0,0,0],[0,0,1,0]]}',
        ],
    )
    assert code == 0
    coeffs = json.loads(out)["coeffs"]
    assert coeffs == [[0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]]


def test_stem_command(capsys, beta_file, tmp_path):
    out_file = tmp_path / "system.json"
    code, out, _ = _run(
        capsys,
        [
            "stem",
            "--model",
            "sqrt",
            "--path",
            beta_file,
            "--radius",
            "0.8",
            "--extra-truncations",
            "0.25,0.75",
            "--out",
            str(out_file),
        ],
    )
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is True
    assert {c["name"] for c in report["conditions"]} == {
        "holomorphy",
        "local-compatibility",
        "axial-compatibility",
        "initial-compatibility",
    }
    assert out_file.exists()
    saved = json.loads(out_file.read_text())
    assert set(saved) == {"x0", "paths", "radii", "samples"}


def test_check_suite_passes(capsys):
    code, out, _ = _run(capsys, ["check", "--suite", "unitarity", "--seed", "7"])
    assert code == 0
    assert "pass  eta-unitarity" in out


def test_check_json_deterministic(capsys):
    code1, out1, _ = _run(capsys, ["check", "--suite", "ring", "--seed", "3", "--format", "json"])
    code2, out2, _ = _run(capsys, ["check", "--suite", "ring", "--seed", "3", "--format", "json"])
    assert code1 == code2 == 0
    assert out1 == out2


def test_seed_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("SLICEKIT_SEED", "11")
    _, with_env, _ = _run(capsys, ["check", "--suite", "ring", "--format", "json"])
    monkeypatch.delenv("SLICEKIT_SEED")
    _, explicit, _ = _run(capsys, ["check", "--suite", "ring", "--seed", "11", "--format", "json"])
    assert with_env == explicit


def test_corrupted_structure_matrix_fails_check(capsys, monkeypatch):
    import numpy as np

    from slicekit import checks
    from slicekit.sliceunits import StemStructureMatrix, stem_structure_sigma

    def corrupted(n):
        good = stem_structure_sigma(n).matrix.copy()
        good[0, :] = -good[0, :]  # sign bug
        return StemStructureMatrix(n, good)

    monkeypatch.setattr(checks, "stem_structure_sigma", corrupted)
    result = checks.check_structure_identities(np.random.default_rng(0))
    assert not result.passed
    assert result.name == "structure-identities"


def test_tolerance_flag_gates_exit_code(capsys, beta_file):
    base = [
        "monodromy",
        "--model",
        "sqrt",
        "--path",
        beta_file,
        "--units",
        "[1,0,0];[0,1,0]",
        "--check-analytic",
    ]
    assert main(base + ["--tol", "1e-9"]) == 0
    capsys.readouterr()
    assert main(base + ["--tol", "1e-30"]) == 1
    capsys.readouterr()


def test_usage_error_exit_code(capsys):
    assert main(["monodromy", "--model", "sqrt"]) == 2
    assert main(["nonsense"]) == 2
