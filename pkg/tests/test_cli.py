import json

import numpy as np
import pytest

from logfactor.cli import main


def _result(capsys):
    return json.loads(capsys.readouterr().out)


def test_factor_iterative(capsys):
    assert main(["factor", "--N", "385", "--L", "3", "--mode", "iterative", "--seed", "7"]) == 0
    first = capsys.readouterr().out
    d = json.loads(first)
    assert d["result"]["factors"] == [5, 7, 11]
    assert d["config"]["params"]["seed"] == 7
    main(["factor", "--N", "385", "--L", "3", "--mode", "iterative", "--seed", "7"])
    assert capsys.readouterr().out == first


def test_factor_other_modes(capsys):
    assert main(["factor", "--N", "125", "--mode", "known-n", "--n", "3", "--multiplicities", "3"]) == 0
    assert _result(capsys)["result"]["factors"] == [5, 5, 5]
    assert main(["factor", "--N", "35", "--mode", "prime-spectrum", "--seed", "1"]) == 0
    assert _result(capsys)["result"]["factors"] == [5, 7]


def test_domain_error_exit_code(capsys):
    assert main(["factor", "--N", "21"]) == 1
    assert "error [domain]" in capsys.readouterr().err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as err:
        main(["factor", "--bogus"])
    assert err.value.code == 2


def test_pt_curve(tmp_path, monkeypatch):
    monkeypatch.setenv("LOGFACTOR_OUTPUT_DIR", str(tmp_path))
    assert main(["pt-curve", "--max-omega-t", "20", "--points", "400", "--out", "pt.csv"]) == 0
    data = np.loadtxt(tmp_path / "pt.csv", delimiter=",", skiprows=1)
    x, p = data[1:, 0], data[1:, 1]
    assert data.shape == (400, 2)
    assert np.allclose(p, 0.5 - np.sin(2 * x) / (4 * x))
    assert (tmp_path / "pt.csv.config.json").exists()


def test_feasibility_defaults(capsys, tmp_path):
    assert main(["feasibility", "--out", str(tmp_path / "f.csv")]) == 0
    out = capsys.readouterr().out
    d = json.loads(out[out.index("{"):])
    assert 6e3 <= d["result"]["max_feasible_N"] <= 2.4e4
    assert (tmp_path / "f.csv").read_text().startswith("N,gamma,omega_rabi,rwa_ok,dec_ok,feasible")


def test_degeneracy(capsys):
    assert main(["degeneracy", "--N", "245", "--k", "2", "--L", "3"]) == 0
    assert _result(capsys)["result"]["solutions"] == [[5, 49], [7, 35]]


def test_build_potential(tmp_path, capsys):
    assert main(["build-potential", "--M", "5", "--numerov", "--out-dir", str(tmp_path)]) == 0
    d = json.loads((tmp_path / "spectrum.json").read_text())
    assert d["result"]["numerov_max_diff"] < 1e-5
    assert (tmp_path / "potential.csv").read_text().startswith("xi,v")


@pytest.mark.filterwarnings("ignore:basis cutoff")
def test_simulate(tmp_path):
    assert main(["simulate", "--periods", "0.5", "--samples", "51", "--cutoff", "10", "--out-dir", str(tmp_path)]) == 0
    d = json.loads((tmp_path / "simulate.json").read_text())
    assert d["result"]["sup_ground_deviation"] < 0.05
    assert (tmp_path / "full.csv").exists() and (tmp_path / "rwa.csv").exists()


def test_validate(capsys):
    assert main(["validate"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines and all(line.startswith("PASS") for line in lines)
