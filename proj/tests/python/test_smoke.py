import math
import os
import subprocess

import numpy as np
import pytest

import lrdcma


def test_kernel_and_autocovariance():
    k = lrdcma.make_kernel("power_law", d=0.3)
    assert k.d == 0.3
    assert k(2.0) == pytest.approx(2.0 ** -0.7)
    # gamma(0) = C^2 (1 + 1/(1 - 2d)) for the power-law kernel
    assert lrdcma.autocovariance(k, 1.0, 0.0) == pytest.approx(1.0 + 1.0 / 0.4, rel=1e-6)
    with pytest.raises(lrdcma.ParameterError):
        lrdcma.make_kernel("power_law", d=0.6)


def test_simulate_and_estimate():
    k = lrdcma.make_kernel("fln_increment", d=0.3)
    x = lrdcma.simulate(k, lrdcma.brownian(), m=4, N=4096, H=1, seed=3)
    assert x.shape == (4097,)
    again = lrdcma.simulate(k, lrdcma.brownian(), m=4, N=4096, H=1, seed=3)
    np.testing.assert_array_equal(x, again)
    g = lrdcma.sample_acv(list(x), 4096, 1)
    d_hat, in_range = lrdcma.estimate_d(g[1] / g[0])
    assert in_range
    assert abs(d_hat - 0.3) < 0.15


def test_regimes_and_limits():
    assert lrdcma.classify_regime(0.35, lrdcma.brownian()) == "rosenblatt"
    assert lrdcma.classify_regime(0.1, lrdcma.pareto_jumps(1.0, 2.5)) == "stable"
    law = lrdcma.theoretical_limits(lrdcma.make_kernel(d=0.35), lrdcma.brownian(), 0)
    assert law["rate_exponent"] == pytest.approx(0.3)
    draws = lrdcma.rosenblatt_draws(0.35, 200, seed=2, n_grid=128)
    assert draws.shape == (200,)
    assert lrdcma.ks_two_sample(list(draws), list(draws)) == 0.0


def test_config_and_experiment():
    text = "kernel.d = 0.35\ngrid.m = 2\ngrid.N = 256\nexperiment.replicates = 100\n"
    cfg = lrdcma.parse_config_text(text)
    assert len(cfg["hash"]) == 16
    with pytest.raises(lrdcma.ConfigError, match="unknown key"):
        lrdcma.parse_config_text("kernel.dd = 0.3\n")
    res = lrdcma.run_experiment(text)
    assert res["regime"] == "rosenblatt"
    assert len(res["scaled"][0]) == 100
    assert res["scale"] == pytest.approx(256 ** 0.3)


def test_cli_in_process():
    code, out, err = lrdcma.run_cli(["nope"])
    assert code == 1
    assert "unknown subcommand" in err


@pytest.mark.skipif("LRDCMA_CLI" not in os.environ, reason="CLI binary path not given")
def test_cli_binary(tmp_path):
    series = tmp_path / "x.csv"
    series.write_text("\n".join(str(math.sin(i)) for i in range(64)) + "\n")
    proc = subprocess.run([os.environ["LRDCMA_CLI"], "acv", str(series), "--H", "2", "--out", str(tmp_path / "o")],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "o" / "acv.csv").read_text().startswith("h,gamma_hat,gamma,rho_hat\n")
    assert (tmp_path / "o" / "manifest.json").exists()
