import pytest

from gen import gen_er
from graphlets import (
    AdaptiveConfig,
    adaptive_estimate,
    brute_force_counts,
    from_edges,
)


def test_config_validation():
    with pytest.raises(ValueError):
        AdaptiveConfig(beta=-0.1)
    with pytest.raises(ValueError):
        AdaptiveConfig(beta=1.5)
    with pytest.raises(ValueError):
        AdaptiveConfig(loss="mse")
    with pytest.raises(ValueError):
        AdaptiveConfig(phi0=0)
    with pytest.raises(ValueError):
        AdaptiveConfig(eps=0)
    with pytest.raises(ValueError):
        AdaptiveConfig(t_max=0)


def test_exhaustion_is_exact():
    g = gen_er(20, 0.3, 70)
    res = adaptive_estimate(g, AdaptiveConfig(beta=0.0, phi0=1.0))
    assert res.reason == "exhausted" and res.converged
    assert res.sampled_edges == g.m
    assert res.estimate.X == brute_force_counts(g)
    assert res.iterations == 1


def test_beta_zero_runs_to_exhaustion():
    g = gen_er(20, 0.3, 70)
    res = adaptive_estimate(g, AdaptiveConfig(beta=0.0, phi0=0.4, t_max=500))
    assert res.reason == "exhausted"
    assert res.estimate.X == brute_force_counts(g)


def test_trace_shape_and_monotonicity():
    g = gen_er(40, 0.2, 71)
    res = adaptive_estimate(g, AdaptiveConfig(beta=0.0, phi0=0.3, t_max=6))
    assert res.reason == "t_max"
    assert not res.converged
    assert len(res.trace) == 6
    phis = [row["phi"] for row in res.trace]
    sampled = [row["sampled"] for row in res.trace]
    for a, b in zip(phis, phis[1:]):
        assert b == pytest.approx(a / 2)
    assert all(a < b for a, b in zip(sampled, sampled[1:]))
    assert res.trace[0]["delta"] == 1.0
    assert res.sampled_edges == sampled[-1]


def test_converges_and_is_deterministic():
    g = gen_er(60, 0.15, 72)
    cfg = AdaptiveConfig(beta=0.05, phi0=0.5, seed=4)
    a = adaptive_estimate(g, cfg)
    b = adaptive_estimate(g, cfg)
    assert a.reason == "converged"
    assert a.delta - cfg.eps <= cfg.beta
    assert a.estimate.X == b.estimate.X
    assert [r["sampled"] for r in a.trace] == [r["sampled"] for r in b.trace]


@pytest.mark.parametrize("loss", ["max_rel", "ks", "l1"])
def test_losses_run(loss):
    g = gen_er(50, 0.2, 73)
    res = adaptive_estimate(g, AdaptiveConfig(beta=0.1, phi0=0.5, loss=loss))
    assert res.converged


def test_gfd_loss_degenerate_graph():
    # a triangle has no 4-vertex sets at all, so the distribution losses
    # cannot certify convergence and the loop must fall through to exhaustion
    g = from_edges([(0, 1), (0, 2), (1, 2)])
    res = adaptive_estimate(g, AdaptiveConfig(beta=0.5, phi0=0.4, loss="ks",
                                              t_max=100))
    assert res.reason == "exhausted"
    assert res.estimate.X == brute_force_counts(g)


def test_variance_available_at_end():
    g = gen_er(50, 0.2, 74)
    res = adaptive_estimate(g, AdaptiveConfig(beta=0.05, phi0=0.4))
    if res.sampled_edges < g.m:
        assert res.estimate.variance is not None
        assert any(v > 0 for v in res.estimate.variance)
