"""Built-in prescribing policies.

All agents share one interface: act(observation, explore) returns a
per-patient action vector; learn(...) updates internal state (a no-op for
everything except tabular Q-learning). The joint action space is factored
per patient slot: each slot's decision reads the shared antibiogram block
plus that slot's observed attributes, and the tabular agent keys a shared
Q-table on (binned sigma_hat vector, binned pi_hat).

Policy files are versioned JSON; loading checks dimensions against the
target environment layout.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

import numpy as np

from .config import AgentAlgorithmConfig, ConfigError
from .env import ObservationLayout
from .rng import PHASE_TAGS, stream

POLICY_FORMAT_VERSION = 1


class PolicyLoadError(Exception):
    """Corrupt, incompatible, or missing policy file."""


class Agent:
    algorithm = "base"

    def __init__(self, config: AgentAlgorithmConfig, layout: ObservationLayout):
        self.config = config
        self.layout = layout
        self._rng = stream(config.seed, PHASE_TAGS["agent"])

    def act(
        self,
        observation: np.ndarray,
        explore: bool = True,
        rng: Optional[np.random.Generator] = None,
    ) -> np.ndarray:
        raise NotImplementedError

    def learn(self, observation, action, reward, next_observation, truncated) -> None:
        pass  # stateless agents learn nothing

    def _check_layout(self, observation: np.ndarray) -> None:
        if observation.shape != (self.layout.length,):
            raise ValueError(
                f"observation has shape {observation.shape}, "
                f"expected ({self.layout.length},)"
            )

    # -- persistence ----------------------------------------------------

    def _state_dict(self) -> dict:
        return {}

    def _load_state(self, state: dict) -> None:
        pass

    def save_policy(self, path: str | Path) -> None:
        doc = {
            "format_version": POLICY_FORMAT_VERSION,
            "algorithm": self.algorithm,
            "num_antibiotics": self.layout.num_antibiotics,
            "num_patients": self.layout.num_patients,
            "extras": list(self.layout.extras),
            "agent_config": {
                "threshold": self.config.threshold,
                "learning_rate": self.config.learning_rate,
                "discount": self.config.discount,
                "bins": self.config.bins,
                "seed": self.config.seed,
            },
            "state": self._state_dict(),
        }
        Path(path).write_text(json.dumps(doc, sort_keys=True), encoding="utf-8")


class RandomAgent(Agent):
    algorithm = "random"

    def act(self, observation, explore=True, rng=None):
        self._check_layout(observation)
        gen = rng if rng is not None else self._rng
        return gen.integers(
            0, self.layout.num_antibiotics + 1, size=self.layout.num_patients
        )


class NeverTreatAgent(Agent):
    algorithm = "never_treat"

    def act(self, observation, explore=True, rng=None):
        self._check_layout(observation)
        return np.zeros(self.layout.num_patients, dtype=np.int64)


class GreedyHeuristicAgent(Agent):
    """Treat any patient with pi_hat >= threshold using the least-resisted drug."""

    algorithm = "greedy_heuristic"

    def act(self, observation, explore=True, rng=None):
        self._check_layout(observation)
        sigma_hat = self.layout.sigma_block(observation)
        best = int(np.argmin(sigma_hat)) + 1  # ties -> lowest antibiotic index
        actions = np.zeros(self.layout.num_patients, dtype=np.int64)
        for slot in range(self.layout.num_patients):
            pi_hat = self.layout.patient_block(observation, slot)[0]
            if pi_hat >= self.config.threshold:
                actions[slot] = best
        return actions


class TabularQAgent(Agent):
    """Per-slot epsilon-greedy Q-learning over a shared discretized table.

    Every slot's update uses the shared step reward; this is a deliberate
    credit-assignment approximation that keeps the table tractable.
    """

    algorithm = "tabular_q"

    def __init__(self, config: AgentAlgorithmConfig, layout: ObservationLayout):
        super().__init__(config, layout)
        self.q: dict[tuple[int, ...], np.ndarray] = {}
        self.visits: dict[tuple[int, ...], int] = {}
        self.epsilon = config.epsilon_start

    def set_epsilon_for_episode(self, episode: int) -> None:
        """Linear decay from epsilon_start to epsilon_end over the schedule."""
        cfg = self.config
        frac = min(episode / cfg.epsilon_decay_episodes, 1.0)
        self.epsilon = cfg.epsilon_start + frac * (cfg.epsilon_end - cfg.epsilon_start)

    def _bin(self, value: float) -> int:
        b = self.config.bins
        return min(int(value * b), b - 1) if value >= 0 else 0

    def _key(self, observation: np.ndarray, slot: int) -> tuple[int, ...]:
        sigma_bins = tuple(self._bin(v) for v in self.layout.sigma_block(observation))
        pi_bin = self._bin(self.layout.patient_block(observation, slot)[0])
        return sigma_bins + (pi_bin,)

    def _values(self, key: tuple[int, ...]) -> np.ndarray:
        vals = self.q.get(key)
        if vals is None:
            vals = np.zeros(self.layout.num_antibiotics + 1)
            self.q[key] = vals
        return vals

    def act(self, observation, explore=True, rng=None):
        self._check_layout(observation)
        gen = rng if rng is not None else self._rng
        num_choices = self.layout.num_antibiotics + 1
        actions = np.zeros(self.layout.num_patients, dtype=np.int64)
        for slot in range(self.layout.num_patients):
            if explore and gen.random() < self.epsilon:
                actions[slot] = gen.integers(0, num_choices)
            else:
                actions[slot] = int(np.argmax(self._values(self._key(observation, slot))))
        return actions

    def learn(self, observation, action, reward, next_observation, truncated):
        cfg = self.config
        for slot in range(self.layout.num_patients):
            key = self._key(observation, slot)
            a = int(action[slot])
            target = reward
            if not truncated:
                next_vals = self._values(self._key(next_observation, slot))
                target = reward + cfg.discount * float(np.max(next_vals))
            vals = self._values(key)
            vals[a] += cfg.learning_rate * (target - vals[a])
            self.visits[key] = self.visits.get(key, 0) + 1

    def _state_dict(self) -> dict:
        return {
            "q": {",".join(map(str, k)): v.tolist() for k, v in self.q.items()},
            "visits": {",".join(map(str, k)): n for k, n in self.visits.items()},
        }

    def _load_state(self, state: dict) -> None:
        width = self.layout.num_antibiotics + 1
        for key_str, vals in state.get("q", {}).items():
            key = tuple(int(s) for s in key_str.split(","))
            if len(vals) != width:
                raise PolicyLoadError(
                    f"Q-table row has {len(vals)} action values, expected {width}"
                )
            self.q[key] = np.asarray(vals, dtype=np.float64)
        for key_str, n in state.get("visits", {}).items():
            self.visits[tuple(int(s) for s in key_str.split(","))] = int(n)


_ALGORITHMS: dict[str, type[Agent]] = {
    cls.algorithm: cls
    for cls in (RandomAgent, NeverTreatAgent, GreedyHeuristicAgent, TabularQAgent)
}


def build_agent(config: AgentAlgorithmConfig, layout: ObservationLayout) -> Agent:
    try:
        cls = _ALGORITHMS[config.algorithm]
    except KeyError:
        raise ConfigError(f"unknown agent algorithm {config.algorithm!r}") from None
    return cls(config, layout)


def load_policy(path: str | Path, layout: ObservationLayout) -> Agent:
    path = Path(path)
    if not path.exists():
        raise PolicyLoadError(f"policy file not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise PolicyLoadError(f"corrupt policy file {path}: {exc}") from exc
    version = doc.get("format_version")
    if version != POLICY_FORMAT_VERSION:
        raise PolicyLoadError(
            f"unsupported policy format version {version!r}, "
            f"expected {POLICY_FORMAT_VERSION}"
        )
    for dim in ("num_antibiotics", "num_patients"):
        found, expected = doc.get(dim), getattr(layout, dim)
        if found != expected:
            raise PolicyLoadError(
                f"policy {dim} mismatch: expected {expected}, found {found}"
            )
    if tuple(doc.get("extras", [])) != layout.extras:
        raise PolicyLoadError(
            f"policy observable attributes mismatch: expected {list(layout.extras)}, "
            f"found {doc.get('extras')}"
        )
    saved = doc.get("agent_config", {})
    config = AgentAlgorithmConfig(algorithm=doc["algorithm"], **saved)
    agent = build_agent(config, layout)
    agent._load_state(doc.get("state", {}))
    return agent
