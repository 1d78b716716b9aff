import json
import subprocess
import sys

import pytest

from ampcat import __version__
from ampcat.cli import main


def run_json(capsys, *argv):
    assert main(list(argv)) == 0
    return json.loads(capsys.readouterr().out)


def test_measure_purity(capsys):
    out = run_json(capsys, "measure", "--purity", "--g", "7.10", "--lambdas", "1.0")
    assert out["purity"] == pytest.approx(0.01002, abs=1e-5)


def test_project_thermal_parity(capsys):
    out = run_json(capsys, "project", "--alpha", "0", "--g", "1.4142", "--lambdas", "1.0")
    assert out["p_plus"] == pytest.approx(0.6667, abs=1e-4)


def test_classical_interference(capsys):
    out = run_json(capsys, "classical", "--slot", "10", "--radius", "1", "--n", "100", "--interference")
    assert out["ratio"] == 0.0 and out["suppressed"] is True


def test_amplify_reports_bound(capsys):
    out = run_json(capsys, "amplify", "--alpha", "1", "--g", "2", "--lambdas", "1.0")
    assert out["variance"] == pytest.approx(out["caves_bound"])
    assert out["mean"] == pytest.approx([2.0, 0.0])


def test_flag_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["measure", "--g", "not-a-number"])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err
    assert main(["measure", "--g", "2", "--lambdas", "0.5", "0.6"]) == 2
    assert main(["measure", "--g", "0.5"]) == 2


def test_config_errors_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"gain": 3}')
    assert main(["reproduce", "gains", "--config", str(bad), "--out-dir", str(tmp_path)]) == 2
    bad.write_text("{not json")
    assert main(["reproduce", "gains", "--config", str(bad), "--out-dir", str(tmp_path)]) == 2
    assert main(["reproduce", "gains", "--config", str(tmp_path / "missing.json"), "--out-dir", str(tmp_path)]) == 2


def test_numerical_failure_exit_3(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"target_purity": 1e-9}))
    assert main(["reproduce", "gains", "--config", str(cfg), "--out-dir", str(tmp_path)]) == 3


def test_reproduce_gains(tmp_path):
    assert main(["reproduce", "gains", "--out-dir", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    gains = summary["matched_gains"]
    assert gains["ideal"] == pytest.approx(7.10, abs=0.02)
    assert gains["two_term"] == pytest.approx(5.28, abs=0.02)
    assert gains["three_term"] == pytest.approx(4.56, abs=0.02)
    assert summary["version"] == __version__
    assert summary["parameters"]["target_purity"] == 0.01


def test_reproduce_fig4_writes_eight_panels(tmp_path):
    assert main(["reproduce", "fig4", "--out-dir", str(tmp_path)]) == 0
    csvs = sorted(p.name for p in tmp_path.glob("*.csv"))
    assert len(csvs) == 8
    assert csvs == sorted(f"fig4_{s}_{a}.csv" for s in ("thermal", "ideal", "two_term", "three_term") for a in "xp")
    lines = (tmp_path / "fig4_ideal_x.csv").read_text().splitlines()
    assert lines[0] == "coordinate,density"
    coords = [float(line.split(",")[0]) for line in lines[1:]]
    assert coords == sorted(coords)
    summary = json.loads((tmp_path / "summary.json").read_text())
    for block in summary["states"].values():
        assert set(block) >= {"p_plus", "p_minus", "purity", "macroscopicity", "quadrature_orders", "panels"}
        for panel in block["panels"].values():
            assert set(panel["grid"]) == {"lo", "hi", "n"}


def test_reproduce_fig3_is_byte_identical(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    for out in (first, second):
        assert main(["reproduce", "fig3", "--out-dir", str(out)]) == 0
    names = sorted(p.name for p in first.iterdir())
    assert names == sorted(p.name for p in second.iterdir())
    assert len(names) == 7
    for name in names:
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_reproduce_fig5_small_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"alpha": 2.0, "g_values": [1.5, 3.0], "lambdas": [[1.0], [0.2, 0.3, 0.5]]}))
    assert main(["reproduce", "fig5", "--config", str(cfg), "--out-dir", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert set(summary["curves"]) == {"ideal", "three_term"}
    assert (tmp_path / "fig5_ideal.csv").read_text().splitlines()[0] == "coordinate,density"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ampcat", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == __version__
