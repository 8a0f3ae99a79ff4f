import math

import pytest

from cogrelay.analytics import prob_primary_empty
from cogrelay.model import ChannelProfile, OperatingPoint, Policy
from cogrelay.simulator import QueueOverflowError, Scenario, SimStats, replicate, simulate

CH = ChannelProfile(0.3, 0.8, 0.4)
POL = Policy(0.5, 1.0)
PT = OperatingPoint(0.1, 0.1)


def scenario(**overrides) -> Scenario:
    base = dict(
        channel=CH, point=PT, policy=POL, policy_kind="randomized",
        slots=50_000, warmup_slots=2_000, seed=42,
    )
    base.update(overrides)
    return Scenario(**base)


def test_scenario_validation():
    with pytest.raises(ValueError):
        scenario(policy_kind="round_robin")
    with pytest.raises(ValueError):
        scenario(slots=100, warmup_slots=100)
    with pytest.raises(ValueError):
        scenario(warmup_slots=-1)


def test_determinism():
    assert simulate(scenario()) == simulate(scenario())
    assert replicate(scenario(), 3) == replicate(scenario(), 3)


@pytest.mark.parametrize("kind", ["randomized", "strict_priority_relay", "no_cooperation"])
def test_zero_arrivals(kind):
    stats = simulate(
        scenario(point=OperatingPoint(0.0, 0.0), policy_kind=kind, slots=10_000, warmup_slots=100)
    )
    assert stats.delivered_p == stats.delivered_s == stats.relayed_count == 0
    assert stats.arrivals_p == stats.arrivals_s == 0
    assert stats.frac_both_empty == 1.0
    assert stats.mean_delay_p == 0.0 and stats.mean_delay_s == 0.0


@pytest.mark.parametrize("kind", ["randomized", "strict_priority_relay", "no_cooperation"])
def test_conservation_per_origin(kind):
    stats = simulate(scenario(policy_kind=kind))
    assert stats.arrivals_p == stats.delivered_p + stats.backlog_p
    assert stats.arrivals_s == stats.delivered_s + stats.backlog_s


def test_replicate_of_one_equals_simulate():
    assert replicate(scenario(), 1) == simulate(scenario())


def test_replication_confidence_halfwidth():
    stats = replicate(scenario(slots=100_000, warmup_slots=5_000), 20)
    assert stats.ci_halfwidth_delay_p > 0.0
    assert stats.ci_halfwidth_delay_p / stats.mean_delay_p < 0.02
    assert stats.observed_slots == 20 * 95_000


def test_throughput_matches_arrival_rate_within_confidence():
    runs = [simulate(scenario(slots=100_000, warmup_slots=5_000, seed=s)) for s in range(6)]
    for rate, field in ((PT.lambda_p, "throughput_p"), (PT.lambda_s, "throughput_s")):
        values = [getattr(r, field) for r in runs]
        mean = sum(values) / len(values)
        sd = math.sqrt(sum((v - mean) ** 2 for v in values) / (len(values) - 1))
        halfwidth = 1.96 * sd / math.sqrt(len(values))
        assert abs(mean - rate) <= 3.0 * halfwidth


def test_no_cooperation_equals_randomized_with_degenerate_policy():
    kwargs = dict(slots=80_000, warmup_slots=4_000, seed=11, point=OperatingPoint(0.1, 0.05))
    no_coop = simulate(scenario(policy_kind="no_cooperation", **kwargs))
    degenerate = simulate(scenario(policy=Policy(1.0, 0.0), **kwargs))
    assert no_coop == degenerate


def test_common_random_numbers_across_policies():
    # policy changes must not perturb the arrival draws
    a = simulate(scenario(policy=Policy(0.3, 1.0)))
    b = simulate(scenario(policy=Policy(0.9, 0.2)))
    assert a.arrivals_p == b.arrivals_p
    assert a.arrivals_s == b.arrivals_s


def test_wasted_slots_by_policy_kind():
    randomized = simulate(scenario(slots=100_000, warmup_slots=5_000))
    strict = simulate(scenario(policy_kind="strict_priority_relay", slots=100_000, warmup_slots=5_000))
    assert randomized.wasted_slots > 0
    assert strict.wasted_slots == 0


def test_no_cooperation_never_relays():
    stats = simulate(scenario(policy_kind="no_cooperation"))
    assert stats.relayed_count == 0
    assert stats.mean_len_sp == 0.0
    assert stats.wasted_slots == 0


def test_primary_empty_fraction_matches_analytics():
    stats = simulate(scenario(slots=300_000, warmup_slots=10_000))
    assert abs(stats.frac_primary_empty - prob_primary_empty(CH, POL, PT)) < 0.01


@pytest.mark.parametrize(
    "point",
    [OperatingPoint(0.45, 0.3), OperatingPoint(0.2, 0.5)],  # outside the stable region
)
def test_unstable_points_exhibit_drift(point):
    stats = simulate(scenario(point=point, slots=60_000, warmup_slots=5_000, seed=3))
    finals = (stats.final_len_p, stats.final_len_sp, stats.final_len_s)
    means = (stats.mean_len_p, stats.mean_len_sp, stats.mean_len_s)
    assert any(f >= 20 and f > 1.5 * m for f, m in zip(finals, means))


def test_queue_cap_aborts_unstable_runs():
    with pytest.raises(QueueOverflowError):
        simulate(scenario(point=OperatingPoint(0.9, 0.9), slots=200_000, queue_cap=1_000))


def test_delay_floor_is_one_slot():
    stats = simulate(scenario())
    assert stats.mean_delay_p >= 1.0
    assert stats.mean_delay_s >= 1.0


def test_stats_are_plain_records():
    stats = simulate(scenario(slots=5_000, warmup_slots=100))
    assert isinstance(stats, SimStats)
    assert 0.0 <= stats.frac_both_empty <= stats.frac_primary_empty <= 1.0
