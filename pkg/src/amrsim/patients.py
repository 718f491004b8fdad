"""Synthetic patient cohorts.

Each time step the generator produces a fresh fixed-size cohort. A patient
has six true attributes (infection probability pi, benefit multipliers
phi_b/omega_b, failure multipliers phi_f/omega_f, spontaneous recovery
probability rho) and a latent infected flag sampled Bernoulli(pi). The
agent sees a corrupted view: pi_hat = clamp(pi + bias + noise, 0, 1), plus
uncorrupted copies of any attributes flagged observable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import PatientGeneratorConfig

# canonical ordering for attributes that may be flagged observable
EXTRA_ATTRIBUTES = ("phi_b", "omega_b", "phi_f", "omega_f", "rho")


@dataclass(frozen=True)
class PatientProfile:
    pi: float
    phi_b: float
    omega_b: float
    phi_f: float
    omega_f: float
    rho: float
    infected: bool


@dataclass(frozen=True)
class ObservedPatient:
    pi_hat: float
    extras: dict[str, float] = field(default_factory=dict)


def observable_extras(config: PatientGeneratorConfig) -> tuple[str, ...]:
    """Observable non-pi attributes in canonical order."""
    flagged = set(config.observable_attributes)
    return tuple(a for a in EXTRA_ATTRIBUTES if a in flagged)


def generate_cohort(
    config: PatientGeneratorConfig,
    n: int,
    rng: np.random.Generator,
    obs_rng: np.random.Generator,
) -> list[tuple[PatientProfile, ObservedPatient]]:
    """Draw n patients i.i.d. from the configured attribute distributions.

    rng drives the true attributes and infection status; obs_rng drives
    the observation noise, so observability settings never perturb truth.
    """
    if n < 1:
        raise ValueError(f"cohort size must be >= 1, got {n}")
    extras = observable_extras(config)
    cohort = []
    for _ in range(n):
        pi = config.pi.sample(rng)
        profile = PatientProfile(
            pi=pi,
            phi_b=config.phi_b.sample(rng),
            omega_b=config.omega_b.sample(rng),
            phi_f=config.phi_f.sample(rng),
            omega_f=config.omega_f.sample(rng),
            rho=config.rho.sample(rng),
            infected=bool(rng.random() < pi),
        )
        noise = config.noise_sd_pi * float(obs_rng.standard_normal())
        pi_hat = float(np.clip(pi + config.bias_pi + noise, 0.0, 1.0))
        observed = ObservedPatient(
            pi_hat=pi_hat,
            extras={a: getattr(profile, a) for a in extras},
        )
        cohort.append((profile, observed))
    return cohort
