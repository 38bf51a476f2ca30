import math

import numpy as np
import pytest

from noiselab.errors import ConfigurationError
from noiselab.experiments import (
    EXPERIMENTS,
    REGISTRY,
    CouplingError,
    ExperimentConfig,
    Verdict,
    fit_slope,
    mean_se,
    run,
    tail_sigma,
)
from noiselab.experiments.runners import weak_variance_bounds


def test_defaults():
    cfg = ExperimentConfig(experiment="lln_besov", d=1)
    assert (cfg.p, cfg.seed, cfg.trials, cfg.Jmax, cfg.N) == (2.0, 0, 100, 12, 2**13)
    assert set(REGISTRY) == set(EXPERIMENTS)


def test_coupling_and_domain_errors():
    with pytest.raises(CouplingError):
        ExperimentConfig(Jmax=12, N=100)
    for bad in ({"q": 0.5}, {"p": 0.9}, {"d": 5}, {"experiment": "nope"}, {"partition": "x"}, {"tolerances": {"nope": 1}}, {"trials": 0}):
        with pytest.raises(ConfigurationError):
            ExperimentConfig(**bad)


def test_replace_recouples_N():
    cfg = ExperimentConfig(Jmax=5)
    assert cfg.replace(Jmax=7).N == 2**8


def test_config_hash_ignores_output_location():
    a = ExperimentConfig(out="x", threads=1)
    b = ExperimentConfig(out="y", threads=4)
    assert a.config_hash() == b.config_hash()
    assert a.config_hash() != ExperimentConfig(seed=1).config_hash()


def test_verdict_trichotomy():
    from noiselab.experiments import ExperimentSummary

    s = ExperimentSummary("x", {}, "h")
    assert s.status == "pass"
    s.add(Verdict("a", "inconclusive", None, None))
    assert s.status == "inconclusive"
    s.add(Verdict.check("b", False, 1.0, 0.5))
    assert s.status == "fail"
    assert s.verdict("b").tolerance == 0.5


def test_fit_slope_and_mean_se():
    x = np.arange(10)
    fit = fit_slope(x, 0.25 * x + 3)
    assert fit["slope"] == pytest.approx(0.25)
    m, se = mean_se(np.ones((5, 2)))
    assert np.all(m == 1) and np.all(se == 0)


def test_tail_sigma_values():
    assert tail_sigma("besov", 1, 2) == pytest.approx(1.0)
    assert tail_sigma("fourier_besov", 1, 2) == 1.0
    assert tail_sigma("besov", 1, 1) == pytest.approx((2 * math.pi) ** 0.5)
    assert tail_sigma("fourier_besov", 1, 1) == pytest.approx(2**1.5)


def test_weak_variance_sequence_p2():
    sig = weak_variance_bounds(1, 2.0, 6)["sigma"]
    assert sig[0] == pytest.approx(2**1.5 * 2**-1.5)
    assert np.allclose(sig[1:] / sig[:-1], 2**-0.5)
    alt = weak_variance_bounds(1, 1.0, 3)
    assert alt["sigma"][0] == pytest.approx((2 * math.pi) ** 0.5)


def test_lln_single_trial_is_inconclusive_for_mean():
    s = run(ExperimentConfig(experiment="lln_besov", Jmax=10, trials=1))
    assert s.verdict("lln_limit").passed
    assert s.verdict("lln_exact_mean").status == "inconclusive"
    assert s.status == "inconclusive"


def test_lln_exact_mean_d1_j4():
    s = run(ExperimentConfig(experiment="lln_besov", Jmax=4, trials=1000, seed=2))
    assert s.verdict("lln_exact_mean").passed
    assert s.stats["exact_means"][3] == 22 / 16


def test_lln_besov_d2():
    s = run(ExperimentConfig(experiment="lln_besov", d=2, Jmax=6, trials=1))
    limit = s.stats["oracle_limit"]
    assert limit == pytest.approx(1.5 * math.pi)
    assert abs(s.stats["means"][-1] / limit - 1) < 0.1


def test_lln_fb_p4():
    s = run(ExperimentConfig(experiment="lln_fb", Jmax=12, trials=10, p=4.0))
    assert s.stats["oracle_limit"] == pytest.approx(6.0)
    assert s.verdict("fb_lln_limit").passed


def test_frontier_insufficient_octaves():
    s = run(ExperimentConfig(experiment="frontier", Jmax=8, J_min=6, trials=3))
    assert all(v.status == "inconclusive" for v in s.verdicts)


def test_frontier_p_inf_critical_is_inconclusive():
    s = run(ExperimentConfig(experiment="frontier", p=math.inf, Jmax=11, J_min=6, trials=3, q_values=(math.inf,), s_offsets=(0.0,)))
    assert s.verdicts[0].status == "inconclusive"


def test_frontier_table_schema():
    s = run(ExperimentConfig(experiment="frontier", Jmax=10, trials=2, s_offsets=(0.0,), q_values=(math.inf,)))
    (name, (cols, rows)), = s.tables.items()
    assert cols == ["J", "trial", "level_j", "block_norm", "weighted", "norm_value"]
    assert name.startswith("frontier_besov")


def test_mean_identity_needs_trials():
    s = run(ExperimentConfig(experiment="mean_identity", Jmax=3, trials=50))
    assert any(v.status == "inconclusive" for v in s.verdicts)
    assert s.verdict("parseval_residual").passed
    assert s.stats["parseval_residual_var"] < 1e-28


def test_tail_inconclusive_with_few_trials():
    s = run(ExperimentConfig(experiment="tail", Jmax=5, trials=100))
    assert s.verdict("tail_bound").status == "inconclusive"


def test_weak_variance_and_equivalence_small():
    for exp in ("weak_variance", "equivalence"):
        s = run(ExperimentConfig(experiment=exp, Jmax=5, trials=30))
        assert s.status == "pass", s.report()


def test_divergence_and_logsup_small():
    s = run(ExperimentConfig(experiment="divergence", Jmax=9, trials=200, seed=3))
    assert s.verdict("q_finite_levels_bounded_below").passed
    assert s.verdict("variance_floor").passed
    s = run(ExperimentConfig(experiment="logsup", Jmax=13, trials=100))
    assert s.status == "pass"


@pytest.mark.parametrize("exp", EXPERIMENTS)
def test_reproducible_summaries(exp):
    cfg = ExperimentConfig(experiment=exp, Jmax=7, trials=12, seed=5)
    a, b = run(cfg), run(cfg)
    assert [v.to_dict() for v in a.verdicts] == [v.to_dict() for v in b.verdicts]
    for k in a.tables:
        assert a.tables[k] == b.tables[k]


def test_threads_do_not_change_results():
    a = run(ExperimentConfig(experiment="hv_check", Jmax=6, trials=20, threads=1))
    b = run(ExperimentConfig(experiment="hv_check", Jmax=6, trials=20, threads=3))
    assert a.tables == b.tables
