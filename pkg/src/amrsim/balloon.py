"""Leaky-balloon resistance dynamics.

Each antibiotic carries a latent nonnegative pressure. Prescribing inflates
it (with optional cross-resistance coupling between drugs), and a
multiplicative leak deflates it every step. The observable resistance
level sigma is a zero-anchored sigmoid of pressure:

    sigma = 2 / (1 + exp(-pressure / flatness)) - 1

which maps pressure 0 to resistance 0 and saturates below 1. Update order
is inflate-then-leak:

    pressure' = (pressure + inflation_rate * (C @ counts)) * (1 - leak)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import BalloonParams


@dataclass(frozen=True)
class BalloonState:
    pressure: np.ndarray  # latent, >= 0, one entry per antibiotic
    sigma: np.ndarray     # observable resistance level in [0, 1)


def observable_level(pressure, flatness):
    """Zero-anchored sigmoid from latent pressure to resistance level."""
    p = np.asarray(pressure, dtype=np.float64)
    k = np.asarray(flatness, dtype=np.float64)
    out = 2.0 / (1.0 + np.exp(-p / k)) - 1.0
    # keep the open upper bound under float64 saturation
    out = np.minimum(out, np.nextafter(1.0, 0.0))
    if out.ndim == 0:
        return float(out)
    return out


def _param_arrays(params: Sequence[BalloonParams]) -> tuple[np.ndarray, ...]:
    flatness = np.array([p.flatness for p in params], dtype=np.float64)
    leak = np.array([p.leak for p in params], dtype=np.float64)
    inflation = np.array([p.inflation_rate for p in params], dtype=np.float64)
    initial = np.array([p.initial_pressure for p in params], dtype=np.float64)
    return flatness, leak, inflation, initial


def reset_balloons(params: Sequence[BalloonParams]) -> BalloonState:
    flatness, _, _, initial = _param_arrays(params)
    pressure = initial.copy()
    return BalloonState(pressure=pressure, sigma=observable_level(pressure, flatness))


def step_balloons(
    state: BalloonState,
    params: Sequence[BalloonParams],
    cross_resistance: np.ndarray | None,
    counts: Sequence[int],
) -> BalloonState:
    """One time step: inflate from prescription counts, then leak."""
    flatness, leak, inflation, _ = _param_arrays(params)
    counts_arr = np.asarray(counts, dtype=np.float64)
    if counts_arr.shape != (len(params),):
        raise ValueError(
            f"counts has shape {counts_arr.shape}, expected ({len(params)},)"
        )
    if cross_resistance is None:
        effective = counts_arr
    else:
        c = np.asarray(cross_resistance, dtype=np.float64)
        if c.shape != (len(params), len(params)):
            raise ValueError(
                f"cross-resistance matrix has shape {c.shape}, "
                f"expected ({len(params)}, {len(params)})"
            )
        effective = c @ counts_arr
    inflow = inflation * effective
    pressure = (state.pressure + inflow) * (1.0 - leak)
    return BalloonState(pressure=pressure, sigma=observable_level(pressure, flatness))
