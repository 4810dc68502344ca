import math
from fractions import Fraction

import pytest

from stableseq import graphs, percolation as pc
from stableseq import seqshape as ss
from stableseq import bounds as bnd
from stableseq.exact import count_by_size
from stableseq.graphs import check_simple


def test_percolate_p_one_and_zero():
    g = graphs.complete_bipartite(6, 6)
    assert pc.percolate(g, 1, 99).adj == g.adj
    assert pc.percolate(g, 0, 99).edge_count == 0
    with pytest.raises(ValueError):
        pc.percolate(g, Fraction(3, 2), 1)


def test_percolate_deterministic_and_simple():
    g = graphs.hypercube(4)
    a = pc.percolate(g, Fraction(1, 3), 2024)
    b = pc.percolate(g, Fraction(1, 3), 2024)
    assert a.adj == b.adj
    check_simple(a)
    c = pc.percolate(g, Fraction(1, 3), 2025)
    assert c.adj != a.adj  # overwhelmingly likely under a changed seed


def test_percolate_trial_streams_differ():
    g = graphs.complete_bipartite(8, 8)
    a = pc.percolate(g, Fraction(1, 2), 7, trial=0)
    b = pc.percolate(g, Fraction(1, 2), 7, trial=1)
    assert a.adj != b.adj


def test_percolate_binomial_mean_band():
    # K_{8,8} at p = 1/2 over 10^4 trials: mean kept-edge count within the
    # three-sigma band around 32 (sigma of the mean = 4/100)
    g = graphs.complete_bipartite(8, 8)
    trials = 10 ** 4
    total = sum(pc.percolate(g, Fraction(1, 2), 31415, trial=i).edge_count
                for i in range(trials))
    mean = total / trials
    sigma_mean = math.sqrt(64 * 0.25) / math.sqrt(trials)
    assert abs(mean - 32) <= 3 * sigma_mean, mean


def test_gnnp_single_edge_and_degree_band():
    g, frame = pc.gnnp(1, 1, 5)
    assert g.n == 2 and g.edge_count == 1
    assert frame.class_e == (0,) and frame.class_o == (1,)
    # expected vertex degree n p; averaged over trials stays within 3 sigma
    n, p, trials = 12, Fraction(1, 3), 400
    degsum = 0
    for i in range(trials):
        sample, _ = pc.gnnp(n, p, 777, trial=i)
        degsum += sample.degree(0)
    mean = degsum / trials
    sigma_mean = math.sqrt(n * (1 / 3) * (2 / 3)) / math.sqrt(trials)
    assert abs(mean - n * p) <= 3 * sigma_mean


def test_run_experiment_deterministic():
    cfg = pc.PercolationConfig(base_side=10, p=Fraction(1, 2), seed=91,
                               trials=12)
    one = pc.run_experiment(cfg)
    two = pc.run_experiment(cfg)
    assert one.to_json() == two.to_json()
    assert len(one.records) == 12
    assert one.success_rate == Fraction(
        sum(1 for r in one.records if r.holds), 12)


def test_run_experiment_p_one_matches_closed_form():
    # at p = 1 every sample is K_{n,n} itself: the verdict must match a
    # direct check on the closed-form sequence
    n = 9
    cfg = pc.PercolationConfig(base_side=n, p=Fraction(1), seed=3, trials=2)
    summary = pc.run_experiment(cfg, Fraction(1, 10))
    seq = pc.knn_sequence(n)
    assert seq.counts == count_by_size(graphs.complete_bipartite(n, n)).counts
    s_used = summary.records[0].s_used
    direct = ss.check_property_bgs(seq, n, Fraction(1, 10), Fraction(1, 10),
                                   s_used)
    assert all(r.holds == direct.holds for r in summary.records)
    assert summary.success_rate == (1 if direct.holds else 0)
    # K_{n,n} is n-regular: the defect collapses to 1/n
    assert all(r.h_value == Fraction(1, n) for r in summary.records)


def test_theorem_step_consistency_at_p_one():
    # the regular-case step bound applied to the closed-form K_{n,n}
    # sequence: the two-sided property with beta = 0 must hold
    for n in range(2, 23, 4):
        s, _c = bnd.step_bound_regular(n, n, Fraction(1, 10))
        seq = pc.knn_sequence(n)
        rep = ss.check_property_bgs(seq, n, 0, Fraction(1, 10),
                                    max(1, min(s, n + 1)))
        assert rep.holds, n


def test_default_step_rule():
    # h = 19/32 makes the n h term dominate log2(16) = 4:
    # ceil(9.5 / log2(11/9)) = 33
    assert pc.default_step_rule(16, Fraction(19, 32), Fraction(1, 10)) == 33
    # tiny defect: the log term takes over
    assert pc.default_step_rule(16, Fraction(1, 1000), Fraction(1, 10)) == \
        math.ceil(4 / math.log2(0.55 / 0.45))


def test_flagged_trials_counted_as_failures():
    # p = 0 gives the empty graph: alpha = 2n != n, so every trial flags
    cfg = pc.PercolationConfig(base_side=5, p=Fraction(0), seed=1, trials=3)
    summary = pc.run_experiment(cfg)
    assert summary.success_rate == 0
    assert all(r.flagged and not r.holds for r in summary.records)
    assert all(r.alpha == 10 for r in summary.records)


def test_config_validation():
    with pytest.raises(ValueError):
        pc.PercolationConfig(base_side=4, p=Fraction(2), seed=0, trials=1)
    with pytest.raises(ValueError):
        pc.PercolationConfig(base_side=4, p=Fraction(1, 2), seed=0, trials=0)
    with pytest.raises(ValueError):
        pc.run_experiment(pc.PercolationConfig(base_side=40, p=Fraction(1, 2),
                                               seed=0, trials=1))


def test_summary_json_fields():
    cfg = pc.PercolationConfig(base_side=6, p=Fraction(1, 2), seed=11,
                               trials=4)
    payload = pc.run_experiment(cfg).to_json_dict()
    assert payload["base"] == "knn:6,6"
    assert payload["p"] == "1/2"
    assert payload["d_prime"] == "3/1"
    assert len(payload["per_trial"]) == 4
    for rec in payload["per_trial"]:
        assert set(rec) == {"trial", "stream_id", "h_value", "s_used",
                            "alpha", "holds", "flagged"}
