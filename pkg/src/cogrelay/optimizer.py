"""Constrained delay minimization over the policy pair (p_q, p_a).

The feasible set at a fixed operating point is an interval of p_q values per
p_a. Since the primary delay increases with p_q and the lower end of the
interval drops as p_a grows, the primary optimum sits at the interval's lower
end with p_a = 1 whenever relaying helps at all, i.e. whenever that lower end
lies below the phase-transition value 1 - f_pd/f_sd; above it, not cooperating
gives the smaller primary delay. The secondary optimum adopts p_a = 1 and the
upper end of the interval (the secondary delay decreases in both knobs); the
test suite brute-forces the full 2-D grid as a guard rather than asserting
that choice axiomatically.

Returned optima sit a strict-interior offset inside the open feasible
interval, because its endpoints are critically stable (infinite delay).
"""

from __future__ import annotations

from dataclasses import dataclass

from .analytics import (
    UndefinedRateError,
    delay_primary,
    delay_secondary,
    is_stable,
    phase_transition_pq,
    service_rate_primary,
    _relay_rate,
)
from .model import ChannelProfile, OperatingPoint, Policy

__all__ = [
    "INTERIOR_OFFSET",
    "NEAR_BOUNDARY_MARGIN",
    "InfeasibleError",
    "PrimaryDelayDecision",
    "pq_lower_bound",
    "pq_upper_bound",
    "minimize_primary_delay",
    "minimize_secondary_delay",
    "no_cooperation_delay_primary",
]

#: Offset from the feasible interval's endpoints at which optima are reported.
INTERIOR_OFFSET = 1e-6

#: Stability margin below which a reported optimum is flagged near-boundary.
NEAR_BOUNDARY_MARGIN = 1e-3


class InfeasibleError(ValueError):
    """No policy stabilizes the system at the requested operating point."""


@dataclass(frozen=True)
class PrimaryDelayDecision:
    """Outcome of the primary-delay minimization.

    ``p_q_star``/``p_a_star`` are set only in cooperate mode; ``d_p_star`` is
    set unless the problem is infeasible. ``near_boundary`` flags optima whose
    stability margin is below NEAR_BOUNDARY_MARGIN (expected in cooperate mode,
    where the optimum hugs the feasibility boundary).
    """

    mode: str
    p_q_star: float | None = None
    p_a_star: float | None = None
    d_p_star: float | None = None
    near_boundary: bool = False

    def __post_init__(self) -> None:
        if self.mode not in ("cooperate", "no_cooperation", "infeasible"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if (self.mode == "cooperate") != (self.p_q_star is not None and self.p_a_star is not None):
            raise ValueError("p_q_star/p_a_star are present exactly in cooperate mode")


def pq_lower_bound(ch: ChannelProfile, pt: OperatingPoint, p_a: float) -> float:
    """Smallest p_q keeping the secondary queue stable at this p_a."""
    mu = service_rate_primary(ch, p_a)
    if pt.lambda_p >= mu:
        raise InfeasibleError(
            f"lambda_p={pt.lambda_p!r} not below the primary service rate {mu!r} at p_a={p_a!r}"
        )
    return pt.lambda_s * mu / (ch.f_sd * (mu - pt.lambda_p))


def pq_upper_bound(ch: ChannelProfile, pt: OperatingPoint, p_a: float) -> float:
    """Largest p_q keeping the relay queue stable at this p_a."""
    mu = service_rate_primary(ch, p_a)
    if pt.lambda_p >= mu:
        raise InfeasibleError(
            f"lambda_p={pt.lambda_p!r} not below the primary service rate {mu!r} at p_a={p_a!r}"
        )
    return 1.0 - pt.lambda_p * _relay_rate(ch, p_a) / (ch.f_sd * (mu - pt.lambda_p))


def no_cooperation_delay_primary(ch: ChannelProfile, lambda_p: float) -> float:
    """Primary delay with relaying disabled (single queue served at f_pd)."""
    if lambda_p >= ch.f_pd:
        raise InfeasibleError(
            f"lambda_p={lambda_p!r} not below f_pd={ch.f_pd!r}; no-cooperation system unstable"
        )
    return (1.0 - lambda_p) / (ch.f_pd - lambda_p)


def _feasible_interval_at_full_admission(
    ch: ChannelProfile, pt: OperatingPoint
) -> tuple[float, float] | None:
    """Open p_q interval stabilizing the system at p_a = 1, or None."""
    if pt.lambda_p >= service_rate_primary(ch, 1.0):
        return None
    lo = pq_lower_bound(ch, pt, 1.0)
    hi = min(pq_upper_bound(ch, pt, 1.0), 1.0)
    if not lo < hi:
        return None
    return lo, hi


def _interior(value: float, lo: float, hi: float, from_low: bool) -> float:
    # keep the offset point strictly inside even when the interval is narrow
    if from_low:
        return min(value + INTERIOR_OFFSET, 0.5 * (lo + hi))
    return max(value - INTERIOR_OFFSET, 0.5 * (lo + hi))


def minimize_primary_delay(ch: ChannelProfile, pt: OperatingPoint) -> PrimaryDelayDecision:
    """Minimize the primary delay over (p_q, p_a) subject to full-system stability.

    Feasibility is decided at p_a = 1 (the admission that admits the widest
    p_q interval); with no stabilizing p_q there the problem is infeasible.
    """
    if pt.lambda_p <= 0.0:
        raise UndefinedRateError("primary-delay minimization undefined at lambda_p = 0")
    interval = _feasible_interval_at_full_admission(ch, pt)
    if interval is None:
        return PrimaryDelayDecision(mode="infeasible")
    lo, hi = interval
    if lo <= phase_transition_pq(ch):
        p_q_star = _interior(lo, lo, hi, from_low=True)
        policy = Policy(p_q_star, 1.0)
        verdict = is_stable(ch, policy, pt)
        return PrimaryDelayDecision(
            mode="cooperate",
            p_q_star=p_q_star,
            p_a_star=1.0,
            d_p_star=delay_primary(ch, policy, pt),
            near_boundary=min(verdict.margin_p, verdict.margin_s) < NEAR_BOUNDARY_MARGIN,
        )
    try:
        d_p = no_cooperation_delay_primary(ch, pt.lambda_p)
    except InfeasibleError:
        return PrimaryDelayDecision(mode="infeasible")
    return PrimaryDelayDecision(mode="no_cooperation", d_p_star=d_p)


def minimize_secondary_delay(ch: ChannelProfile, pt: OperatingPoint) -> tuple[float, float]:
    """Minimize the secondary delay; returns (p_q_star, d_s_star) at p_a = 1.

    The secondary delay decreases monotonically in p_q, so the optimum is the
    feasible supremum minus the strict-interior offset.
    """
    if pt.lambda_s <= 0.0:
        raise UndefinedRateError("secondary-delay minimization undefined at lambda_s = 0")
    interval = _feasible_interval_at_full_admission(ch, pt)
    if interval is None:
        raise InfeasibleError(f"no p_q stabilizes the system at p_a=1 for {pt}")
    lo, hi = interval
    p_q_star = _interior(hi, lo, hi, from_low=False)
    d_s_star = delay_secondary(ch, Policy(p_q_star, 1.0), pt)
    return p_q_star, d_s_star
