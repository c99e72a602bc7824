import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from zitterkit import __version__
from zitterkit.cli import main


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    body = [ln for ln in text.splitlines() if not ln.startswith("#")]
    rows = list(csv.DictReader(io.StringIO("\n".join(body))))
    return rows


def summary(text):
    out = {}
    for ln in text.splitlines():
        if ln.startswith("# summary: "):
            k, v = ln[len("# summary: "):].split("=")
            out[k] = float(v)
    return out


def test_check_algebra_default(capsys):
    code, out, _ = run(capsys, "check-algebra")
    assert code == 0
    rows = table(out)
    assert {r["status"] for r in rows} == {"pass"}
    assert all(float(r["residual"]) <= 1e-12 for r in rows)
    assert out.startswith(f"# zitterkit {__version__}\n")


def test_check_algebra_fault_injection(capsys):
    code, _, err = run(capsys, "check-algebra", "--inject-fault", "spin")
    assert code == 1
    assert "spin1_commutation" in err


def test_gfv_zero_n_is_config_error(capsys):
    code, _, err = run(capsys, "check-algebra", "--rep", "gfv", "--gfv-n", "0")
    assert code == 2
    assert "N must be nonzero" in err


@pytest.mark.parametrize(
    "args",
    [
        ["spectrum", "--rep", "fv", "--mass", "0"],
        ["spectrum", "--spin", "1/3"],
        ["spectrum", "--p", "1,2"],
        ["spectrum", "--rep", "tachyon"],
        ["spectrum", "--sigma", "-1"],
        ["evolve-packet", "--mix", "0,0"],
        ["nonsense"],
    ],
)
def test_config_errors(capsys, args):
    code, _, _ = run(capsys, *args)
    assert code == 2


def test_singular_hamiltonian_exit_3(capsys):
    code, _, err = run(capsys, "evolve-operator", "--rep", "photon", "--p", "0,0,0")
    assert code == 3
    assert "singular" in err


def test_indefinite_norm_exit_3(capsys):
    code, _, err = run(capsys, "evolve-packet", "--rep", "gfv", "--spin", "0", "--gfv-n", "1", "--mass", "0",
                       "--p", "3,0,4", "--sigma", "0.3", "--mix", "1,1", "--steps", "8")
    assert code == 3
    assert "indefinite" in err


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"rep": "fv", "mass": 2.0, "sweep_points": 3}))
    code, out, _ = run(capsys, "spectrum", "--config", str(cfg), "--mass", "1.0")
    assert code == 0
    rows = table(out)
    assert len(rows) == 3
    assert float(rows[0]["lambda_1"]) == 1.0
    cfg.write_text(json.dumps({"colour": "red"}))
    assert run(capsys, "spectrum", "--config", str(cfg))[0] == 2
    cfg.write_text("{not json")
    assert run(capsys, "spectrum", "--config", str(cfg))[0] == 2


def test_spectrum_dirac_rest_row(capsys):
    code, out, _ = run(capsys, "spectrum")
    rows = table(out)
    first = rows[0]
    assert float(first["p_abs"]) == 0.0
    assert [float(first[f"lambda_{k}"]) for k in range(1, 5)] == [1.0, 1.0, -1.0, -1.0]


def test_spectrum_photon_and_fw(capsys):
    _, out, _ = run(capsys, "spectrum", "--rep", "photon")
    photon = table(out)
    _, out, _ = run(capsys, "spectrum", "--rep", "fw", "--mass", "0", "--spin", "1")
    fw = table(out)
    for a, b in zip(photon, fw):
        pa = float(a["p_abs"])
        vals = sorted(float(a[f"lambda_{k}"]) for k in range(1, 7))
        assert np.allclose(vals, [-pa, -pa, 0, 0, pa, pa], atol=1e-12)
        fw_vals = sorted(float(b[f"lambda_{k}"]) for k in range(1, 7))
        transversal = [v for v in vals if abs(v) > 1e-12]
        assert set(np.round(fw_vals, 12)) == set(np.round(transversal, 12))


def test_evolve_operator_columns(capsys):
    code, out, _ = run(capsys, "evolve-operator", "--rep", "gfv", "--mass", "0.5", "--spin", "1/2",
                       "--gfv-n", "0.7", "--steps", "40")
    assert code == 0
    rows = table(out)
    assert list(rows[0]) == [
        "t", "v_closed_re", "v_closed_im", "v_numeric_re", "v_numeric_im",
        "dr_closed_re", "dr_closed_im", "dr_quad_re", "dr_quad_im", "residual", "dr_residual",
    ]
    assert float(rows[0]["dr_closed_re"]) == 0.0 and float(rows[0]["dr_quad_im"]) == 0.0
    assert max(float(r["residual"]) for r in rows) <= 1e-10
    assert max(float(r["dr_residual"]) for r in rows) <= 1e-9


def test_evolve_operator_fw_constant(capsys):
    _, out, _ = run(capsys, "evolve-operator", "--rep", "fw", "--spin", "1/2", "--steps", "16")
    rows = table(out)
    assert len({(r["v_closed_re"], r["v_closed_im"]) for r in rows}) == 1


def test_evolve_packet_massless_dirac(capsys):
    code, out, _ = run(capsys, "evolve-packet", "--mass", "0", "--p", "3,0,4", "--sigma", "0.5")
    assert code == 0
    s = summary(out)
    assert abs(s["frequency"] - s["expected_frequency"]) <= s["frequency_bin"]
    assert s["expected_frequency"] == 10.0
    rows = table(out)
    assert len(rows) == 512


def test_evolve_packet_pure_branch(capsys):
    _, out, _ = run(capsys, "evolve-packet", "--mix", "1,0", "--steps", "64")
    assert summary(out)["amplitude"] <= 1e-10


def test_transform_identity_at_eps(capsys):
    _, out, _ = run(capsys, "transform", "--rep", "gfv", "--spin", "0", "--mass", "1")
    rows = [r for r in table(out) if r["quantity"] == "U"]
    u = np.zeros((2, 2), dtype=complex)
    for r in rows:
        u[int(r["row"]), int(r["col"])] = float(r["re"]) + 1j * float(r["im"])
    assert np.abs(u - np.eye(2)).max() < 1e-15


def test_transform_photon_coefficients(capsys):
    _, out, _ = run(capsys, "transform", "--rep", "photon", "--p", "0,0,2", "--gfv-n", "0.5")
    vals = {r["quantity"]: float(r["re"]) for r in table(out) if r["row"] == "0" and r["col"] == "0"}
    assert vals["gfv_plus_phi_coefficient"] == pytest.approx(1.25, abs=1e-15)
    assert vals["gfv_plus_chi_coefficient"] == pytest.approx(-0.75, abs=1e-15)
    assert vals["gfv_plus_residual"] <= 1e-12 and vals["gfv_minus_residual"] <= 1e-12
    assert vals["pseudo_unitarity_residual"] <= 1e-12


def test_json_twin(capsys):
    _, csv_out, _ = run(capsys, "spectrum", "--rep", "fv")
    _, json_out, _ = run(capsys, "spectrum", "--rep", "fv", "--format", "json")
    doc = json.loads(json_out)
    assert doc["meta"]["version"] == __version__
    assert doc["meta"]["config"]["rep"] == "fv"
    rows = table(csv_out)
    assert [list(r) for r in doc["rows"]][0] == list(rows[0])
    for a, b in zip(rows, doc["rows"]):
        for k in a:
            assert float(a[k]) == b[k]


def test_seed_changes_check_sample(capsys, monkeypatch):
    monkeypatch.setenv("ZITTERKIT_SEED", "5")
    _, a, _ = run(capsys, "check-algebra")
    monkeypatch.setenv("ZITTERKIT_SEED", "6")
    _, b, _ = run(capsys, "check-algebra")
    assert "# seed: 5" in a and "# seed: 6" in b
    monkeypatch.setenv("ZITTERKIT_SEED", "x")
    assert run(capsys, "check-algebra")[0] == 2


def test_out_file_byte_identical_subprocess(tmp_path):
    paths = []
    for k in range(2):
        path = tmp_path / f"run{k}.csv"
        subprocess.run(
            [sys.executable, "-m", "zitterkit.cli", "evolve-packet", "--rep", "gfv", "--spin", "1",
             "--mass", "0", "--p", "3,0,4", "--sigma", "0.3", "--steps", "64", "--out", str(path)],
            check=True,
            env={"ZITTERKIT_SEED": "3", "PATH": ""},
        )
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert b"# seed: 3" in paths[0].read_bytes()
