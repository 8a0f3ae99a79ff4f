"""Brute-force policy-grid optimizers used as independent checks of the analytic solutions."""

import numpy as np

from cogrelay.analytics import delay_primary, delay_secondary, is_stable
from cogrelay.model import Policy


def _grid_minimum(ch, pt, objective, n):
    values = np.linspace(0.0, 1.0, n)
    table = np.full((n, n), np.inf)
    for iq, p_q in enumerate(values):
        for ia, p_a in enumerate(values):
            pol = Policy(float(p_q), float(p_a))
            if is_stable(ch, pol, pt).stable:
                table[iq, ia] = objective(ch, pol, pt)
    best_flat = int(np.argmin(table))
    iq, ia = divmod(best_flat, n)
    best = table[iq, ia]
    if not np.isfinite(best):
        return None
    neighbors = [
        table[q, a]
        for q, a in ((iq - 1, ia), (iq + 1, ia), (iq, ia - 1), (iq, ia + 1))
        if 0 <= q < n and 0 <= a < n and np.isfinite(table[q, a])
    ]
    cell_variation = max((abs(v - best) for v in neighbors), default=0.0)
    return {
        "objective": float(best),
        "p_q": float(values[iq]),
        "p_a": float(values[ia]),
        "cell_variation": float(cell_variation),
    }


def primary_delay_grid(ch, pt, n=101):
    """Exhaustive (p_q, p_a) search minimizing the primary delay; None if nothing is feasible."""
    return _grid_minimum(ch, pt, delay_primary, n)


def secondary_delay_grid(ch, pt, n=101):
    """Exhaustive (p_q, p_a) search minimizing the secondary delay; None if nothing is feasible."""
    return _grid_minimum(ch, pt, delay_secondary, n)
