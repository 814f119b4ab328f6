import json
import subprocess
import sys

import pytest

from genfree.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(out):
    return [line.split(",") for line in out.splitlines() if line and not line.startswith("#")]


def test_enumerate_and_cache_reuse(capsys, tmp_path):
    cache = tmp_path / "f2.npz"
    code, out, _ = run(capsys, "enumerate", "--model", "free2", "--radius", "12", "--cache", str(cache))
    assert code == 0 and cache.exists()
    assert out.startswith("# genfree 0.1.0 enumerate config=")
    table = rows(out)
    assert table[-1][0] == "12" and int(table[-1][1]) == 2 * 3 ** 12 - 1
    stamp = cache.stat().st_mtime_ns
    code, again, _ = run(capsys, "enumerate", "--model", "free2", "--radius", "12", "--cache", str(cache))
    assert code == 0 and again == out and cache.stat().st_mtime_ns == stamp


def test_invalid_presentation_reports_line(capsys, tmp_path):
    pres = tmp_path / "bad.txt"
    pres.write_text("family=small-cancellation\nrank=2\nthis line is broken\n")
    code, _, err = run(capsys, "enumerate", "--presentation", str(pres), "--radius", "2")
    assert code == 1 and "line 3" in err


def test_density_T_nonincreasing(capsys):
    code, out, _ = run(capsys, "density", "--model", "free2", "--set", "T", "--ns", "6-10")
    assert code == 0
    dens = [float(r[3]) for r in rows(out)[1:]]
    assert len(dens) == 5
    assert all(a >= b for a, b in zip(dens, dens[1:]))


def test_density_U_cocompact_is_zero(capsys):
    code, out, _ = run(capsys, "density", "--model", "abelian2", "--set", "U", "--suborbit", "all",
                       "--ns", "2-6")
    assert code == 0
    assert all(r[1] == "0" for r in rows(out)[1:])


def test_sampled_density_is_deterministic(capsys):
    argv = ["density", "--model", "free2", "--set", "Z", "--ns", "6,8", "--mode", "sampled",
            "--samples", "500", "--seed", "4"]
    _, one, _ = run(capsys, *argv)
    _, two, _ = run(capsys, *argv)
    _, four, _ = run(capsys, *argv, "--workers", "3")
    assert one == two == four


def test_ehyp_free_group_fit(capsys, tmp_path):
    fit = tmp_path / "fit.json"
    code, out, _ = run(capsys, "ehyp", "--model", "free2", "--ns", "1-8", "--kinds", "annulus",
                       "--fit-out", str(fit))
    assert code == 0 and "n,e_ball,e_annulus,se,mode" in out
    doc = json.loads(fit.read_text())
    f = doc["fits"]["annulus"]
    assert f["verdict"] == "inverse_n" and f["c"] == pytest.approx(0.75, abs=1e-6)
    assert doc["config_hash"] in out


def test_ehyp_abelian_plateau(capsys):
    code, out, _ = run(capsys, "ehyp", "--model", "abelian2", "--ns", "2-12", "--kinds", "ball")
    assert code == 0
    fit_line = [line for line in out.splitlines() if line.startswith("# fit ")][0]
    doc = json.loads(fit_line[len("# fit "):])
    assert doc["fits"]["ball"]["verdict"] == "plateau"
    assert doc["fits"]["ball"]["plateau"] < 2


def test_missing_cache_suggests_enumerate(capsys, tmp_path):
    code, _, err = run(capsys, "ehyp", "--model", "free2", "--ns", "2-4",
                       "--cache", str(tmp_path / "none.npz"))
    assert code == 2 and "genfree enumerate" in err


def test_cache_too_small_is_range_error(capsys, tmp_path):
    cache = tmp_path / "b3.npz"
    run(capsys, "enumerate", "--model", "free2", "--radius", "3", "--cache", str(cache))
    code, _, _ = run(capsys, "ehyp", "--model", "free2", "--ns", "2-6", "--cache", str(cache))
    assert code == 3


def test_certify_examples(capsys):
    code, out, _ = run(capsys, "certify", "free2", "a", "a2")
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] == "falsified" and doc["relation"]
    code, out, _ = run(capsys, "certify", "free2", "a")
    assert json.loads(out)["verdict"] == "certified"
    code, out, _ = run(capsys, "certify", "--L", "3", "free2", "a10", "b10")
    doc = json.loads(out)
    assert doc["verdict"] != "falsified" and "config_hash" in doc


def test_regime_rejection_quotes_constraint(capsys):
    code, _, err = run(capsys, "certify", "--rho", "1/2", "free2", "a", "b")
    assert code == 1 and "8/9 < rho < 1" in err
    code, _, err = run(capsys, "density", "--model", "free2", "--set", "T", "--C", "2", "--D", "20")
    assert code == 1 and "D > 16C" in err


def test_usage_errors(capsys):
    assert run(capsys, "density", "--set", "Q")[0] == 1
    assert run(capsys)[0] == 1
    assert run(capsys, "certify", "--model", "free2", "a!")[0] == 1


def test_console_script_runs():
    res = subprocess.run([sys.executable, "-m", "genfree.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "0.1.0" in res.stdout
