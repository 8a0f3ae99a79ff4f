import numpy as np
import pytest

from cogrelay.analytics import (
    mean_queue_primary,
    mean_queue_relay,
    mean_queue_secondary,
    empty_joint_probability,
    prob_primary_empty,
    service_rate_primary,
)
from cogrelay.model import ChannelProfile, OperatingPoint, Policy
from cogrelay.oracle import (
    ChainSpec,
    ConvergenceError,
    TruncationError,
    build_transitions,
    solve_stationary,
)

CH = ChannelProfile(0.3, 0.8, 0.4)
POL = Policy(0.5, 1.0)
PT = OperatingPoint(0.1, 0.1)


def test_chain_spec_validation():
    with pytest.raises(ValueError):
        ChainSpec(CH, POL, PT, pair="bogus")
    with pytest.raises(ValueError):
        ChainSpec(CH, POL, PT, truncation=3)
    with pytest.raises(ValueError):
        ChainSpec(CH, POL, PT, tolerance=0.0)


@pytest.mark.parametrize("pair", ["primary_secondary", "primary_relay"])
def test_rows_are_stochastic(pair):
    kernel = build_transitions(ChainSpec(CH, POL, PT, pair=pair, truncation=12))
    sums = np.asarray(kernel.sum(axis=1)).ravel()
    assert np.allclose(sums, 1.0, atol=1e-12)
    assert kernel.data.min() >= 0.0


def test_empty_state_self_loop():
    kernel = build_transitions(ChainSpec(CH, POL, PT, pair="primary_secondary", truncation=8))
    assert kernel[0, 0] == pytest.approx((1 - PT.lambda_p) * (1 - PT.lambda_s), rel=1e-12)


def test_primary_marginal_is_birth_death():
    # summing the kernel over the partner coordinate must give the scalar
    # birth-death chain of the primary queue, for any partner level
    T = 9
    kernel = build_transitions(ChainSpec(CH, POL, PT, pair="primary_secondary", truncation=T)).toarray()
    mu = service_rate_primary(CH, POL.p_a)
    lp = PT.lambda_p
    for i in (0, 1, 4):
        for j in (0, 2, 5):
            row = kernel[i * T + j].reshape(T, T).sum(axis=1)
            if i == 0:
                expected = {0: 1 - lp, 1: lp}
            else:
                expected = {
                    i - 1: mu * (1 - lp),
                    i: mu * lp + (1 - mu) * (1 - lp),
                    i + 1: (1 - mu) * lp,
                }
            for level, prob in expected.items():
                assert row[level] == pytest.approx(prob, rel=1e-12)
            assert row.sum() == pytest.approx(1.0, rel=1e-12)


def test_relay_transfer_coupling():
    # a relayed packet leaves the primary queue and joins the relay queue in
    # the same slot
    T = 8
    kernel = build_transitions(ChainSpec(CH, POL, PT, pair="primary_relay", truncation=T)).toarray()
    relay = POL.p_a * CH.f_ps * (1 - CH.f_pd)
    lp = PT.lambda_p
    i, k = 3, 2
    row = kernel[i * T + k].reshape(T, T)
    assert row[i - 1, k + 1] == pytest.approx(relay * (1 - lp), rel=1e-12)
    assert row[i, k + 1] == pytest.approx(relay * lp, rel=1e-12)
    assert row[i - 1, k] == pytest.approx(CH.f_pd * (1 - lp), rel=1e-12)
    # the relay queue has no exogenous arrivals: k can only grow via transfers
    empty_row = kernel[0 * T + k].reshape(T, T)
    assert empty_row[:, k + 1].sum() == 0.0


def test_zero_arrivals_concentrate_at_origin():
    sol = solve_stationary(
        ChainSpec(CH, POL, OperatingPoint(0.0, 0.0), pair="primary_secondary", truncation=6)
    )
    assert sol.p00 == pytest.approx(1.0, abs=1e-12)
    assert sol.mean_first == pytest.approx(0.0, abs=1e-12)
    assert sol.mean_second == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("pair", ["primary_secondary", "primary_relay"])
def test_chain_matches_closed_forms(pair):
    sol = solve_stationary(ChainSpec(CH, POL, PT, pair=pair, truncation=60))
    assert sol.residual < 1e-12
    n_p = mean_queue_primary(CH, POL, PT)
    assert abs(sol.mean_first - n_p) / n_p < 0.005
    if pair == "primary_secondary":
        partner = mean_queue_secondary(CH, POL, PT)
        assert abs(sol.p00 - empty_joint_probability(CH, POL, PT)) < 0.005
    else:
        partner = mean_queue_relay(CH, POL, PT)
    assert abs(sol.mean_second - partner) / partner < 0.005
    p_empty = float(sol.distribution[0, :].sum())
    assert abs(p_empty - prob_primary_empty(CH, POL, PT)) < 0.005


def test_truncation_doubling_is_stable():
    small = solve_stationary(ChainSpec(CH, POL, PT, pair="primary_secondary", truncation=60))
    large = solve_stationary(ChainSpec(CH, POL, PT, pair="primary_secondary", truncation=120))
    assert abs(small.mean_second - large.mean_second) < 0.005 * large.mean_second
    assert abs(small.mean_first - large.mean_first) < 0.005 * large.mean_first


def test_under_truncated_solve_is_rejected():
    loaded = OperatingPoint(0.25, 0.2)
    with pytest.raises(TruncationError):
        solve_stationary(ChainSpec(CH, POL, loaded, pair="primary_secondary", truncation=4))


def test_non_convergence_raises():
    with pytest.raises(ConvergenceError):
        solve_stationary(ChainSpec(CH, POL, PT, truncation=40, max_iterations=2))


def test_distribution_is_normalized_and_nonnegative():
    sol = solve_stationary(ChainSpec(CH, POL, PT, pair="primary_relay", truncation=50))
    assert sol.distribution.min() >= 0.0
    assert sol.distribution.sum() == pytest.approx(1.0, abs=1e-9)
