import math
import os
import subprocess

import numpy as np
import pytest

import bandit_lab as bl


def test_ae_pmf_normalized_and_sampling_matches():
    for a in (0.1, 0.3, 0.7):
        pmf = np.array(bl.ae_pmf(a, 16))
        assert abs(pmf.sum() - 1.0) < 1e-12
        counts = np.bincount(bl.ae_outcomes(a, 16, 20000, seed=3), minlength=16)
        assert 0.5 * np.abs(counts / 20000 - pmf).sum() < 0.03


def test_qme_is_exact_at_zero_and_charges_queries():
    estimate, queries = bl.qme(0.0, 32, 0.05, seed=1)
    assert estimate == 0.0
    assert queries == 11 * 32  # 2 * ceil(log2 20) + 1 passes


def test_qtme_close_to_mean():
    alpha = 1.55
    scale = (alpha - 1) * 0.9 / alpha
    out = bl.qtme_pareto(alpha, scale, v=0.5, n=1024, delta=0.05, seed=2)
    assert out["mean"] == pytest.approx(0.9, abs=1e-6)
    assert abs(out["estimate"] - 0.9) < 0.1
    assert out["queries_actual"] > 0 and out["queries_declared"] > 0


def test_truncated_mean_and_truncation_level():
    assert bl.default_truncation(1.0, 4.0, 10, math.exp(-1)) == pytest.approx(20.0)
    estimate, radius = bl.truncated_mean([0.0] * 10, 0.5, 2.0, 0.1)
    assert estimate == 0.0 and radius > 0.0


def test_mab_algorithms_and_determinism():
    heavy = bl.heavy_qucb("S1", v=0.5, T=200000, delta=5e-6, seed=4)
    again = bl.heavy_qucb("S1", v=0.5, T=200000, delta=5e-6, seed=4)
    assert heavy.checkpoints == again.checkpoints
    regrets = [r for _, r in heavy.checkpoints]
    assert regrets == sorted(regrets)
    assert heavy.checkpoints[-1][0] == 200000
    robust = bl.robust_ucb("S1", v=0.5, T=20000, delta=5e-5, seed=4)
    assert robust.queries_actual == 20000
    assert bl.instance_means("S3") == pytest.approx([0.9, 0.85, 0.7, 0.45, 0.1])


def test_slb_algorithms():
    trace, covered, epochs = bl.heavy_qlinucb("theta1", T=100000, seed=5)
    assert covered
    assert epochs <= bl.epoch_bound(2, 1.0, 100000, 1.0, 1.0)
    assert trace.final_regret >= 0.0
    lin = bl.linucb("theta1", T=2000, seed=5)
    assert lin.final_regret >= 0.0


def test_wls_update_hand_solved():
    theta, V = bl.wls_update([([1.0, 0.0], 2.0, 1.0), ([0.0, 1.0], 3.0, 0.5)], 1.0, 2)
    assert np.allclose(theta, [1.0, 2.4])
    assert np.allclose(V, [[2.0, 0.0], [0.0, 5.0]])


def test_config_and_run_experiment():
    config = bl.parse_config("kind = mab\nT = 1e4\nrepeats = 2\nseed = 7\n")
    assert config.delta == pytest.approx(1e-4)
    result = bl.run_experiment(config, threads=1)
    assert [row["algorithm"] for row in result["summary"]] == ["heavy-qucb", "robust-ucb"]
    assert result["csv"].startswith("experiment,instance,algorithm,v,delta,seed,round,cum_regret")
    assert bl.run_experiment(config, threads=1)["csv"] == result["csv"]
    with pytest.raises(ValueError, match="line 2|:2:"):
        bl.parse_config("kind = mab\nbogus = 1\n")


@pytest.mark.skipif("BANDIT_LAB_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_run_and_summarize(tmp_path):
    cli = os.environ["BANDIT_LAB_CLI"]
    cfg = tmp_path / "run.cfg"
    cfg.write_text("kind = mab\ninstance = S2\nT = 5000\nrepeats = 2\n")
    out = tmp_path / "out"
    run = subprocess.run([cli, "run", "--config", str(cfg), "--out", str(out)],
                         capture_output=True, text=True)
    assert run.returncode == 0, run.stderr
    assert (out / "mab_S2.csv").exists()
    assert (out / "mab_S2_summary.csv").read_text().startswith(
        "algorithm,mean_final_regret,std_final_regret,mean_queries")
    summary = subprocess.run([cli, "summarize", "--in", str(out)], capture_output=True, text=True)
    assert summary.returncode == 0 and "heavy-qucb" in summary.stdout
    bad = tmp_path / "bad.cfg"
    bad.write_text("kind = mab\nv = 7\n")
    assert subprocess.run([cli, "run", "--config", str(bad)], capture_output=True).returncode == 2
