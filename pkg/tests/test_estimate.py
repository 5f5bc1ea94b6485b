import math
from fractions import Fraction

import numpy as np
import pytest

from gen import gen_er, named_graphs
from graphlets import (
    SampleDesign,
    accumulate,
    brute_force_counts,
    confidence_bounds,
    estimate_counts,
    exact_counts,
    from_edges,
    gfd,
    ks_statistic,
    relative_error,
    sample_and_estimate,
    sample_edges,
    scaled_contributions,
    unrestricted_counts,
)
from graphlets.estimate import _resolve_workers


# --- designs ---------------------------------------------------------------

def test_design_validation():
    with pytest.raises(ValueError):
        SampleDesign()
    with pytest.raises(ValueError):
        SampleDesign(p=0.5, size=10)
    with pytest.raises(ValueError):
        SampleDesign(p=0.0)
    with pytest.raises(ValueError):
        SampleDesign(p=1.5)
    with pytest.raises(ValueError):
        SampleDesign(size=0)
    with pytest.raises(ValueError):
        SampleDesign(p=0.5, weighting="degree")
    with pytest.raises(ValueError):
        SampleDesign(p=0.5, weighting="custom")  # missing weights
    with pytest.raises(ValueError):
        SampleDesign(p=0.5, weights=(1.0,))  # weights without custom


def test_bernoulli_determinism_and_rate():
    g = gen_er(40, 0.3, 1)
    a = sample_edges(g, SampleDesign(p=0.4, seed=7))
    b = sample_edges(g, SampleDesign(p=0.4, seed=7))
    assert np.array_equal(a, b)
    assert len(np.unique(a)) == len(a)
    drawn = [len(sample_edges(g, SampleDesign(p=0.4, seed=s))) for s in range(50)]
    assert abs(np.mean(drawn) / g.m - 0.4) < 0.05


def test_fixed_size_prefix_nesting():
    g = gen_er(40, 0.3, 1)
    small = sample_edges(g, SampleDesign(size=15, seed=3))
    big = sample_edges(g, SampleDesign(size=40, seed=3))
    assert small.tolist() == big[:15].tolist()
    kco_small = sample_edges(g, SampleDesign(size=15, weighting="kcore", seed=3))
    kco_big = sample_edges(g, SampleDesign(size=40, weighting="kcore", seed=3))
    assert kco_small.tolist() == kco_big[:15].tolist()


def test_fixed_size_too_large():
    g = gen_er(10, 0.3, 1)
    with pytest.raises(ValueError):
        sample_edges(g, SampleDesign(size=g.m + 1))
    # but fine with replacement
    ids = sample_edges(g, SampleDesign(size=g.m + 5, replacement=True))
    assert len(ids) == g.m + 5


def test_custom_weights_validation_and_zero_exclusion():
    g = gen_er(12, 0.4, 2)
    with pytest.raises(ValueError):
        sample_edges(g, SampleDesign(size=2, weighting="custom", weights=(1.0,) * (g.m - 1)))
    w = [1.0] * g.m
    w[3] = 0.0
    ids = [
        sample_edges(g, SampleDesign(size=g.m - 1, weighting="custom",
                                     weights=tuple(w), seed=s))
        for s in range(20)
    ]
    assert all(3 not in set(s.tolist()) for s in ids)
    with pytest.raises(ValueError):
        sample_edges(g, SampleDesign(size=g.m, weighting="custom", weights=tuple(w)))


def test_kcore_draw_frequency():
    # triangle with a pendant: core weights (2,2,1,2) make the pendant edge
    # land 1/7 of replacement draws
    g = from_edges([(0, 1), (0, 2), (1, 2), (0, 3)])
    pendant = g.edge_id(0, 3)
    ids = sample_edges(g, SampleDesign(size=100_000, replacement=True,
                                       weighting="kcore", seed=0))
    freq = np.mean(ids == pendant)
    se = math.sqrt((1 / 7) * (6 / 7) / 100_000)
    assert abs(freq - 1 / 7) < 4 * se


# --- accumulation ----------------------------------------------------------

def test_accumulate_range_check():
    g = gen_er(10, 0.4, 3)
    with pytest.raises(ValueError):
        accumulate(g, [g.m], inclusion=Fraction(1))


def test_accumulate_merge_mismatch():
    g = gen_er(10, 0.4, 3)
    a = accumulate(g, [0], with_sq=True, inclusion=Fraction(1, 2))
    b = accumulate(g, [1], with_sq=False, inclusion=Fraction(1, 2))
    with pytest.raises(ValueError):
        a.merge(b)
    merged = a.merge(accumulate(g, [1], with_sq=True, inclusion=Fraction(1, 2)))
    assert merged.k_used == 2


def test_parallel_bitwise_identity():
    g = gen_er(35, 0.25, 4)
    ids = sample_edges(g, SampleDesign(p=0.8, seed=1))
    ref = accumulate(g, ids, workers=1, with_sq=True, inclusion=Fraction(4, 5))
    for w in (2, 3, 5):
        alt = accumulate(g, ids, workers=w, with_sq=True, inclusion=Fraction(4, 5))
        assert alt.counts == ref.counts
        assert alt.sq == ref.sq


def test_resolve_workers_env(monkeypatch):
    monkeypatch.setenv("GRAPHLET_WORKERS", "3")
    assert _resolve_workers(None) == 3
    assert _resolve_workers(2) == 2
    with pytest.raises(ValueError):
        _resolve_workers(0)


def test_scaled_contributions_match_chain():
    # single-edge accumulators: X - const must equal z / (12 p) slot by slot
    g = gen_er(16, 0.35, 5)
    p = Fraction(1, 3)
    const = [Fraction(g.m), Fraction(math.comb(g.n, 2) - g.m), 0, 0, 0,
             Fraction(math.comb(g.n, 3)), 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
             Fraction(math.comb(g.n, 4))]
    for e in range(g.m):
        c = unrestricted_counts(g, e)
        z = scaled_contributions(c)
        acc = accumulate(g, [e], inclusion=p)
        est_raw = [Fraction(x) for x in estimate_counts(g, acc).X]
        for i in range(17):
            expect = const[i] + Fraction(z[i], 12) / p
            if expect < 0:
                continue  # clamped slot; linearity checked via the sq path
            assert est_raw[i] == pytest.approx(float(expect), abs=1e-9), (e, i)


# --- estimation ------------------------------------------------------------

def test_exact_matches_oracle_random():
    for seed in range(8):
        g = gen_er(18, 0.3, seed + 20)
        assert exact_counts(g).X == brute_force_counts(g)


def test_exact_named(named):
    for name, g in named.items():
        est = exact_counts(g)
        assert est.X == brute_force_counts(g), name
        assert est.p == 1.0 and not any(est.clamped)
        assert all(v == 0 for v in est.variance)
        lb, ub = confidence_bounds(est)
        assert lb == [float(x) for x in est.X] == ub


def test_estimate_deterministic():
    g = gen_er(30, 0.2, 6)
    a = sample_and_estimate(g, SampleDesign(p=0.4, seed=11))
    b = sample_and_estimate(g, SampleDesign(p=0.4, seed=11))
    assert a.X == b.X and a.variance == b.variance


def test_unbiasedness_small():
    g = gen_er(22, 0.3, 7)
    truth = brute_force_counts(g)
    runs = np.array(
        [sample_and_estimate(g, SampleDesign(p=0.5, seed=s), with_variance=False).X
         for s in range(300)],
        dtype=float,
    )
    mean = runs.mean(axis=0)
    se = runs.std(axis=0, ddof=1) / math.sqrt(len(runs))
    for i in range(17):
        if se[i] == 0:
            assert mean[i] == truth[i]
        else:
            assert abs(mean[i] - truth[i]) <= 4 * se[i], (i, mean[i], truth[i])


def test_variance_estimate_tracks_spread():
    g = gen_er(30, 0.25, 8)
    ests = [sample_and_estimate(g, SampleDesign(p=0.4, seed=s)) for s in range(300)]
    i = 12 - 1  # 4-path: plentiful, far from the clamp
    spread = np.var([e.X[i] for e in ests], ddof=1)
    mean_vhat = np.mean([e.variance[i] for e in ests])
    assert 0.5 < mean_vhat / spread < 2.0


def test_coverage_small():
    g = gen_er(30, 0.25, 8)
    truth = brute_force_counts(g)
    i = 12 - 1
    hits = 0
    for s in range(200):
        est = sample_and_estimate(g, SampleDesign(p=0.4, seed=s))
        lb, ub = confidence_bounds(est, alpha=0.05)
        hits += lb[i] <= truth[i] <= ub[i]
    assert hits >= 180


def test_fixed_size_estimation():
    g = gen_er(25, 0.3, 9)
    truth = brute_force_counts(g)
    est = sample_and_estimate(g, SampleDesign(size=g.m, seed=0))
    assert est.X == truth  # full draw is exact
    runs = np.array(
        [sample_and_estimate(g, SampleDesign(size=g.m // 2, seed=s),
                             with_variance=False).X
         for s in range(300)],
        dtype=float,
    )
    mean = runs.mean(axis=0)
    se = runs.std(axis=0, ddof=1) / math.sqrt(len(runs))
    i = 12 - 1
    assert abs(mean[i] - truth[i]) <= 4 * se[i]


def test_replacement_estimation_runs():
    g = gen_er(25, 0.3, 9)
    est = sample_and_estimate(g, SampleDesign(size=30, replacement=True, seed=1))
    assert est.k_used == 30
    assert all(x >= 0 for x in est.X)


def test_weighted_estimate_no_ci():
    g = gen_er(25, 0.3, 10)
    est = sample_and_estimate(
        g, SampleDesign(size=40, replacement=True, weighting="kcore", seed=2))
    assert est.variance is None and est.p is None
    with pytest.raises(ValueError):
        confidence_bounds(est)


def test_weighted_replacement_unbiased_triangles():
    g = gen_er(20, 0.35, 11)
    truth = brute_force_counts(g)
    runs = np.array(
        [sample_and_estimate(
            g, SampleDesign(size=60, replacement=True, weighting="kcore", seed=s)).X
         for s in range(300)],
        dtype=float,
    )
    i = 3 - 1
    mean = runs.mean(axis=0)
    se = runs.std(axis=0, ddof=1) / math.sqrt(len(runs))
    assert abs(mean[i] - truth[i]) <= 4 * se[i]


def test_weighted_without_replacement_runs():
    g = gen_er(20, 0.35, 11)
    est = sample_and_estimate(
        g, SampleDesign(size=g.m // 2, weighting="kcore", seed=3))
    assert est.variance is None
    assert all(x >= 0 for x in est.X)


def test_clamp_flags_surface():
    # diamond, central edge only in the sample: the chordal-cycle correction
    # drives the tailed-triangle slot negative, which must clamp and flag
    g = from_edges([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
    central = g.edge_id(0, 1)
    acc = accumulate(g, [central], inclusion=Fraction(1, 2))
    est = estimate_counts(g, acc)
    assert est.clamped[9 - 1]
    assert est.X[9 - 1] == 0
    assert est.X[8 - 1] == pytest.approx(2.0)
    # the complement slot is built from the raw (unclamped) level sum
    assert est.X[17 - 1] == pytest.approx(1 / 3)
    assert all(x >= 0 for x in est.X)


def test_alpha_validation_and_width():
    g = gen_er(25, 0.3, 13)
    est = sample_and_estimate(g, SampleDesign(p=0.5, seed=1))
    with pytest.raises(ValueError):
        confidence_bounds(est, alpha=0)
    lb95, ub95 = confidence_bounds(est, alpha=0.05)
    lb99, ub99 = confidence_bounds(est, alpha=0.01)
    i = 12 - 1
    assert ub99[i] - lb99[i] > ub95[i] - lb95[i]
    assert all(l >= 0 for l in lb95)


# --- distributions ---------------------------------------------------------

def test_gfd_variants(named):
    X = exact_counts(gen_er(30, 0.3, 14)).X
    for variant, width in (("connected", 6), ("disconnected", 5), ("combined", 11)):
        d = gfd(X, variant)
        assert len(d) == width
        assert sum(d) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        gfd(X, "all")
    # K4 alone has no disconnected 4-vertex patterns
    with pytest.raises(ValueError):
        gfd(exact_counts(named["K4"]).X, "disconnected")


def test_ks_statistic():
    assert ks_statistic([0.5, 0.5], [0.5, 0.5]) == 0
    assert ks_statistic([1.0, 0.0], [0.0, 1.0]) == pytest.approx(1.0)
    a, b = [0.2, 0.3, 0.5], [0.4, 0.3, 0.3]
    assert ks_statistic(a, b) == pytest.approx(ks_statistic(b, a))
    with pytest.raises(ValueError):
        ks_statistic([0.5, 0.5], [0.5, 0.5, 0.0])
    with pytest.raises(ValueError):
        ks_statistic([0.9, 0.0], [0.5, 0.5])


def test_relative_error():
    out = relative_error([10, 0, 5], [8, 0, 0])
    assert out[0] == pytest.approx(0.25)
    assert out[1] is True
    assert out[2] is False
