"""Hierarchical experiment configuration.

An umbrella YAML file references one subconfig file per component
(environment, reward_calculator, patient_generator, agent_algorithm) and
carries the training block inline. Loading resolves everything into a
single ExperimentConfig dataclass tree. CLI overrides come in two kinds:
subconfig replacement (--s "environment-subconfig=path.yaml") and dot-path
parameter overrides (--p "environment.num_patients_per_time_step=5").

Unknown keys are hard errors: a typo in an experiment config silently
changing nothing is worse than a crash.
"""

from __future__ import annotations

import copy
import dataclasses
from dataclasses import dataclass, field, fields, is_dataclass
from pathlib import Path
from typing import Any, Optional, Union, get_args, get_origin, get_type_hints

import yaml


class ConfigError(Exception):
    """Raised for any config load, parse, schema, or override failure."""


# ---------------------------------------------------------------------------
# Dataclass schema
# ---------------------------------------------------------------------------

@dataclass
class DistributionSpec:
    """Sampling spec for one patient attribute.

    kind: "constant" | "uniform" | "truncated_normal".
    Only the fields relevant to the kind are consulted.
    """
    kind: str = "constant"
    value: float = 0.0
    low: float = 0.0
    high: float = 1.0
    mean: float = 0.5
    sd: float = 0.1

    def sample(self, rng) -> float:
        if self.kind == "constant":
            return self.value
        if self.kind == "uniform":
            return float(rng.uniform(self.low, self.high))
        if self.kind == "truncated_normal":
            # rejection sampling; bounds are validated to be reachable
            for _ in range(10000):
                x = float(rng.normal(self.mean, self.sd))
                if self.low <= x <= self.high:
                    return x
            raise ConfigError(
                f"truncated_normal(mean={self.mean}, sd={self.sd}) failed to "
                f"produce a sample in [{self.low}, {self.high}]"
            )
        raise ConfigError(f"unknown distribution kind {self.kind!r}")

    def upper_bound(self) -> float:
        if self.kind == "constant":
            return self.value
        return self.high

    def validate(self, name: str, lo: float | None = None, hi: float | None = None) -> None:
        if self.kind not in ("constant", "uniform", "truncated_normal"):
            raise ConfigError(f"{name}.kind: unknown distribution kind {self.kind!r}")
        if self.kind != "constant" and self.low > self.high:
            raise ConfigError(f"{name}: low ({self.low}) > high ({self.high})")
        lo_val, hi_val = self._range()
        if lo is not None and lo_val < lo:
            raise ConfigError(f"{name}: values may go below {lo}")
        if hi is not None and hi_val > hi:
            raise ConfigError(f"{name}: values may exceed {hi}")

    def _range(self) -> tuple[float, float]:
        if self.kind == "constant":
            return self.value, self.value
        return self.low, self.high


@dataclass
class BalloonParams:
    flatness: float = 1.0          # sigmoid steepness scale; larger = flatter
    leak: float = 0.05             # per-step multiplicative pressure decay
    inflation_rate: float = 0.1    # latent pressure per effective prescription
    initial_pressure: float = 0.0


@dataclass
class AntibioticConfig:
    name: str = "abx"
    balloon: BalloonParams = field(default_factory=BalloonParams)
    obs_noise_sd: float = 0.0      # antibiogram observation noise for this drug
    obs_bias: float = 0.0


@dataclass
class EnvironmentConfig:
    num_patients_per_time_step: int = 3
    max_time_steps: int = 50
    antibiotics: list[AntibioticConfig] = field(
        default_factory=lambda: [AntibioticConfig(name="abx_a")]
    )
    cross_resistance: Optional[list[list[float]]] = None  # None -> identity
    antibiogram_refresh_interval: int = 1


@dataclass
class PatientGeneratorConfig:
    pi: DistributionSpec = field(default_factory=lambda: DistributionSpec(kind="constant", value=0.5))
    phi_b: DistributionSpec = field(default_factory=lambda: DistributionSpec(kind="constant", value=1.0))
    omega_b: DistributionSpec = field(default_factory=lambda: DistributionSpec(kind="constant", value=1.0))
    phi_f: DistributionSpec = field(default_factory=lambda: DistributionSpec(kind="constant", value=1.0))
    omega_f: DistributionSpec = field(default_factory=lambda: DistributionSpec(kind="constant", value=1.0))
    rho: DistributionSpec = field(default_factory=lambda: DistributionSpec(kind="constant", value=0.1))
    bias_pi: float = 0.0
    noise_sd_pi: float = 0.0
    observable_attributes: list[str] = field(default_factory=list)


@dataclass
class RewardCalculatorConfig:
    lambda_weight: float = 0.5     # community weight in the overall mixture
    base_benefit: float = 1.0
    base_penalty: float = 1.0
    base_efficacy: float = 0.9
    efficacy_overrides: dict[str, float] = field(default_factory=dict)
    base_failure_harm: float = 1.0
    normalization_cap: float = 1.0
    expected_value_mode: bool = False


@dataclass
class AgentAlgorithmConfig:
    algorithm: str = "tabular_q"   # random | never_treat | greedy_heuristic | tabular_q
    threshold: float = 0.5
    learning_rate: float = 0.1
    discount: float = 0.95
    epsilon_start: float = 1.0
    epsilon_end: float = 0.05
    epsilon_decay_episodes: int = 200
    bins: int = 5
    seed: int = 0


@dataclass
class TrainingConfig:
    run_name: str = "example_run"
    total_num_training_episodes: int = 25
    save_freq_every_n_episodes: int = 5
    eval_freq_every_n_episodes: int = 5
    num_eval_episodes: int = 10
    seed: int = 42
    log_patient_trajectories: bool = False


@dataclass
class ExperimentConfig:
    environment: EnvironmentConfig = field(default_factory=EnvironmentConfig)
    patient_generator: PatientGeneratorConfig = field(default_factory=PatientGeneratorConfig)
    reward_calculator: RewardCalculatorConfig = field(default_factory=RewardCalculatorConfig)
    agent_algorithm: AgentAlgorithmConfig = field(default_factory=AgentAlgorithmConfig)
    training: TrainingConfig = field(default_factory=TrainingConfig)

    @property
    def num_antibiotics(self) -> int:
        return len(self.environment.antibiotics)

    @property
    def antibiotic_names(self) -> list[str]:
        return [a.name for a in self.environment.antibiotics]


SUBCONFIG_SLOTS = ("environment", "reward_calculator", "patient_generator", "agent_algorithm")
_UMBRELLA_KEYS = set(SUBCONFIG_SLOTS) | {"training", "config_folder_location"}


# ---------------------------------------------------------------------------
# dict <-> dataclass conversion (schema-typed, unknown keys rejected)
# ---------------------------------------------------------------------------

def _coerce_scalar(value: Any, typ: type, where: str) -> Any:
    if typ is bool:
        if isinstance(value, bool):
            return value
        if isinstance(value, str):
            low = value.strip().lower()
            if low in ("true", "1", "yes"):
                return True
            if low in ("false", "0", "no"):
                return False
        raise ConfigError(f"{where}: cannot interpret {value!r} as a boolean")
    if typ is int:
        if isinstance(value, bool):
            raise ConfigError(f"{where}: expected an integer, got boolean {value!r}")
        if isinstance(value, int):
            return value
        if isinstance(value, str):
            try:
                return int(value.strip())
            except ValueError:
                raise ConfigError(f"{where}: cannot coerce {value!r} to an integer") from None
        if isinstance(value, float) and value.is_integer():
            return int(value)
        raise ConfigError(f"{where}: cannot coerce {value!r} to an integer")
    if typ is float:
        if isinstance(value, bool):
            raise ConfigError(f"{where}: expected a number, got boolean {value!r}")
        if isinstance(value, (int, float)):
            return float(value)
        if isinstance(value, str):
            try:
                return float(value.strip())
            except ValueError:
                raise ConfigError(f"{where}: cannot coerce {value!r} to a number") from None
        raise ConfigError(f"{where}: cannot coerce {value!r} to a number")
    if typ is str:
        if isinstance(value, str):
            return value
        if isinstance(value, (int, float, bool)):
            return str(value)
        raise ConfigError(f"{where}: expected a string, got {type(value).__name__}")
    raise ConfigError(f"{where}: unsupported schema type {typ!r}")


def _convert(value: Any, typ: Any, where: str) -> Any:
    origin = get_origin(typ)
    if origin is Union:
        args = [a for a in get_args(typ) if a is not type(None)]
        if value is None:
            return None
        return _convert(value, args[0], where)
    if is_dataclass(typ):
        return _from_dict(typ, value, where)
    if origin is list:
        if not isinstance(value, list):
            raise ConfigError(f"{where}: expected a list, got {type(value).__name__}")
        (elem_t,) = get_args(typ)
        return [_convert(v, elem_t, f"{where}[{i}]") for i, v in enumerate(value)]
    if origin is dict:
        if not isinstance(value, dict):
            raise ConfigError(f"{where}: expected a mapping, got {type(value).__name__}")
        _, val_t = get_args(typ)
        return {str(k): _convert(v, val_t, f"{where}.{k}") for k, v in value.items()}
    return _coerce_scalar(value, typ, where)


def _from_dict(cls: type, data: Any, where: str) -> Any:
    if isinstance(data, cls):
        return copy.deepcopy(data)
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected a mapping for {cls.__name__}, got {type(data).__name__}")
    hints = get_type_hints(cls)
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(
            f"{where}: unknown key(s) {unknown}; valid keys: {sorted(known)}"
        )
    kwargs = {
        name: _convert(val, hints[name], f"{where}.{name}")
        for name, val in data.items()
    }
    return cls(**kwargs)


def config_from_dict(data: dict) -> ExperimentConfig:
    return _from_dict(ExperimentConfig, data, "config")


def config_to_dict(config: ExperimentConfig) -> dict:
    return dataclasses.asdict(config)


def serialize_config(config: ExperimentConfig) -> str:
    """Canonical YAML form; byte-stable for a structurally equal config."""
    return yaml.safe_dump(config_to_dict(config), sort_keys=True, default_flow_style=False)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


def validate_config(config: ExperimentConfig) -> ExperimentConfig:
    env = config.environment
    _require(env.num_patients_per_time_step >= 1,
             "environment.num_patients_per_time_step must be >= 1")
    _require(env.max_time_steps >= 1, "environment.max_time_steps must be >= 1")
    _require(env.antibiogram_refresh_interval >= 1,
             "environment.antibiogram_refresh_interval must be >= 1")
    _require(len(env.antibiotics) >= 1, "environment.antibiotics must be nonempty")
    names = [a.name for a in env.antibiotics]
    _require(len(set(names)) == len(names),
             f"environment.antibiotics: duplicate names in {names}")
    for i, abx in enumerate(env.antibiotics):
        where = f"environment.antibiotics[{i}]"
        b = abx.balloon
        _require(b.flatness > 0, f"{where}.balloon.flatness must be > 0")
        _require(0.0 <= b.leak <= 1.0, f"{where}.balloon.leak must be in [0, 1]")
        _require(b.inflation_rate > 0, f"{where}.balloon.inflation_rate must be > 0")
        _require(b.initial_pressure >= 0, f"{where}.balloon.initial_pressure must be >= 0")
        _require(abx.obs_noise_sd >= 0, f"{where}.obs_noise_sd must be >= 0")
    n = len(env.antibiotics)
    if env.cross_resistance is not None:
        cr = env.cross_resistance
        _require(len(cr) == n and all(len(row) == n for row in cr),
                 f"environment.cross_resistance must be a {n}x{n} matrix")
        _require(all(v >= 0 for row in cr for v in row),
                 "environment.cross_resistance entries must be >= 0")

    pg = config.patient_generator
    pg.pi.validate("patient_generator.pi", lo=0.0, hi=1.0)
    pg.rho.validate("patient_generator.rho", lo=0.0, hi=1.0)
    for attr in ("phi_b", "omega_b", "phi_f", "omega_f"):
        getattr(pg, attr).validate(f"patient_generator.{attr}", lo=0.0)
    _require(pg.noise_sd_pi >= 0, "patient_generator.noise_sd_pi must be >= 0")
    valid_obs = {"phi_b", "omega_b", "phi_f", "omega_f", "rho"}
    for a in pg.observable_attributes:
        _require(a in valid_obs,
                 f"patient_generator.observable_attributes: {a!r} is not one of {sorted(valid_obs)}")

    rc = config.reward_calculator
    _require(0.0 <= rc.lambda_weight <= 1.0, "reward_calculator.lambda_weight must be in [0, 1]")
    _require(rc.base_benefit > 0, "reward_calculator.base_benefit must be > 0")
    _require(rc.base_penalty > 0, "reward_calculator.base_penalty must be > 0")
    _require(0.0 <= rc.base_efficacy <= 1.0, "reward_calculator.base_efficacy must be in [0, 1]")
    _require(0.0 <= rc.base_failure_harm <= 1.0, "reward_calculator.base_failure_harm must be in [0, 1]")
    _require(rc.normalization_cap > 0, "reward_calculator.normalization_cap must be > 0")
    for name, eff in rc.efficacy_overrides.items():
        _require(name in names,
                 f"reward_calculator.efficacy_overrides: {name!r} is not a configured antibiotic")
        _require(0.0 <= eff <= 1.0,
                 f"reward_calculator.efficacy_overrides.{name} must be in [0, 1]")

    ag = config.agent_algorithm
    _require(ag.algorithm in ("random", "never_treat", "greedy_heuristic", "tabular_q"),
             f"agent_algorithm.algorithm: unknown algorithm {ag.algorithm!r}")
    _require(0.0 <= ag.threshold <= 1.0, "agent_algorithm.threshold must be in [0, 1]")
    _require(0.0 < ag.learning_rate <= 1.0, "agent_algorithm.learning_rate must be in (0, 1]")
    _require(0.0 <= ag.discount <= 1.0, "agent_algorithm.discount must be in [0, 1]")
    _require(0.0 <= ag.epsilon_end <= ag.epsilon_start <= 1.0,
             "agent_algorithm epsilon schedule must satisfy 0 <= end <= start <= 1")
    _require(ag.epsilon_decay_episodes >= 1, "agent_algorithm.epsilon_decay_episodes must be >= 1")
    _require(ag.bins >= 1, "agent_algorithm.bins must be >= 1")

    tr = config.training
    _require(tr.total_num_training_episodes >= 1,
             "training.total_num_training_episodes must be >= 1")
    _require(tr.save_freq_every_n_episodes >= 1, "training.save_freq_every_n_episodes must be >= 1")
    _require(tr.eval_freq_every_n_episodes >= 1, "training.eval_freq_every_n_episodes must be >= 1")
    _require(tr.num_eval_episodes >= 1, "training.num_eval_episodes must be >= 1")
    _require(0 <= tr.seed < 2**64, "training.seed must be a 64-bit unsigned integer")
    return config


# ---------------------------------------------------------------------------
# Umbrella loading
# ---------------------------------------------------------------------------

def _load_yaml(path: Path) -> Any:
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from exc


def load_umbrella(path: str | Path) -> ExperimentConfig:
    """Resolve an umbrella config and all referenced subconfigs.

    Section values may be file references (relative to
    config_folder_location, itself relative to the umbrella file) or inline
    mappings. The resolved config carries a provenance attribute mapping
    each section to the file that supplied it.
    """
    path = Path(path)
    doc = _load_yaml(path)
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: umbrella config must be a mapping")
    unknown = sorted(set(doc) - _UMBRELLA_KEYS)
    if unknown:
        raise ConfigError(
            f"{path}: unknown umbrella key(s) {unknown}; valid keys: {sorted(_UMBRELLA_KEYS)}"
        )
    base_dir = path.parent
    folder = doc.get("config_folder_location", ".")
    config_root = (base_dir / folder).resolve()

    provenance: dict[str, str] = {}
    merged: dict[str, Any] = {}
    for slot in SUBCONFIG_SLOTS:
        ref = doc.get(slot)
        if ref is None:
            provenance[slot] = "<defaults>"
            continue
        if isinstance(ref, str):
            sub_path = (config_root / ref).resolve()
            sub = _load_yaml(sub_path)
            if sub is None:
                sub = {}
            if not isinstance(sub, dict):
                raise ConfigError(f"{sub_path}: subconfig must be a mapping")
            merged[slot] = sub
            provenance[slot] = str(sub_path)
        elif isinstance(ref, dict):
            merged[slot] = ref
            provenance[slot] = f"{path} (inline)"
        else:
            raise ConfigError(f"{path}: section {slot!r} must be a file path or a mapping")
    if "training" in doc:
        merged["training"] = doc["training"]
        provenance["training"] = f"{path} (inline)"
    else:
        provenance["training"] = "<defaults>"

    config = config_from_dict(merged)
    validate_config(config)
    config._provenance = provenance  # metadata only; not a schema field
    return config


# ---------------------------------------------------------------------------
# Overrides
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OverrideDirective:
    kind: str   # "subconfig" | "parameter"
    path: str
    value: str

    @staticmethod
    def parameter(arg: str) -> "OverrideDirective":
        if "=" not in arg:
            raise ConfigError(f"parameter override {arg!r} must look like path=value")
        p, v = arg.split("=", 1)
        return OverrideDirective("parameter", p.strip(), v.strip())

    @staticmethod
    def subconfig(arg: str) -> "OverrideDirective":
        if "=" not in arg:
            raise ConfigError(f"subconfig override {arg!r} must look like slot=path.yaml")
        slot, v = arg.split("=", 1)
        # accept hyphen or underscore spellings and an optional -subconfig suffix
        slot = slot.strip().replace("-", "_")
        if slot.endswith("_subconfig"):
            slot = slot[: -len("_subconfig")]
        if slot not in SUBCONFIG_SLOTS:
            raise ConfigError(
                f"unknown subconfig slot {slot!r}; valid slots: {list(SUBCONFIG_SLOTS)}"
            )
        return OverrideDirective("subconfig", slot, v.strip())


_SECTION_TYPES = {
    "environment": EnvironmentConfig,
    "reward_calculator": RewardCalculatorConfig,
    "patient_generator": PatientGeneratorConfig,
    "agent_algorithm": AgentAlgorithmConfig,
}


def _nearest_keys(obj: Any) -> list[str]:
    if is_dataclass(obj):
        return sorted(f.name for f in fields(obj))
    if isinstance(obj, dict):
        return sorted(str(k) for k in obj)
    if isinstance(obj, list):
        return [f"0..{len(obj) - 1}"]
    return []


def set_by_path(config: ExperimentConfig, path: str, raw_value: Any) -> None:
    """Install a value at a dot path, coercing to the schema type of the leaf.

    Mutates config in place. List elements are addressed by zero-based
    integer segments. Creating new keys is refused.
    """
    segments = path.split(".")
    obj: Any = config
    trail = "config"
    for i, seg in enumerate(segments):
        last = i == len(segments) - 1
        if isinstance(obj, list):
            try:
                idx = int(seg)
            except ValueError:
                raise ConfigError(f"{trail}: expected a list index, got {seg!r}") from None
            if not 0 <= idx < len(obj):
                raise ConfigError(f"{trail}: index {idx} out of range (len {len(obj)})")
            if last:
                raise ConfigError(
                    f"override path {path!r} targets a list element directly; "
                    "address a field inside the element instead"
                )
            obj = obj[idx]
        elif is_dataclass(obj):
            hints = get_type_hints(type(obj))
            if seg not in hints:
                raise ConfigError(
                    f"unknown config path {path!r}: {trail} has no key {seg!r}; "
                    f"nearest valid keys: {_nearest_keys(obj)}"
                )
            if last:
                new_val = _convert(raw_value, hints[seg], path)
                setattr(obj, seg, new_val)
                return
            obj = getattr(obj, seg)
        elif isinstance(obj, dict):
            if last:
                if seg not in obj:
                    raise ConfigError(
                        f"unknown config path {path!r}: {trail} has no key {seg!r}; "
                        f"nearest valid keys: {_nearest_keys(obj)}"
                    )
                template = obj[seg]
                obj[seg] = _coerce_scalar(raw_value, type(template), path)
                return
            if seg not in obj:
                raise ConfigError(
                    f"unknown config path {path!r}: {trail} has no key {seg!r}; "
                    f"nearest valid keys: {_nearest_keys(obj)}"
                )
            obj = obj[seg]
        else:
            raise ConfigError(
                f"config path {path!r} descends past leaf value at {trail}"
            )
        trail = f"{trail}.{seg}"
    raise ConfigError(f"empty override path {path!r}")


def apply_overrides(
    config: ExperimentConfig, directives: list[OverrideDirective]
) -> ExperimentConfig:
    """Apply overrides to a copy of config; the original is untouched.

    Subconfig replacements apply first (in order), then parameter overrides
    (in order), so parameter overrides always take final precedence.
    """
    out = copy.deepcopy(config)
    for d in directives:
        if d.kind == "subconfig":
            sub_path = Path(d.value)
            sub = _load_yaml(sub_path)
            if sub is None:
                sub = {}
            section = _from_dict(_SECTION_TYPES[d.path], sub, d.path)
            setattr(out, d.path, section)
    for d in directives:
        if d.kind == "parameter":
            set_by_path(out, d.path, d.value)
    validate_config(out)
    return out


# ---------------------------------------------------------------------------
# Default config scaffolding
# ---------------------------------------------------------------------------

_DEFAULT_ENVIRONMENT = """\
# Patient cohort size, episode length, and per-antibiotic resistance dynamics.
num_patients_per_time_step: 3
max_time_steps: 50
antibiogram_refresh_interval: 1
antibiotics:
  - name: abx_a
    balloon:
      flatness: 1.0
      leak: 0.05
      inflation_rate: 0.1
      initial_pressure: 0.0
    obs_noise_sd: 0.0
    obs_bias: 0.0
# cross_resistance: omit for the identity matrix (no coupling)
"""

_DEFAULT_REWARD = """\
# Mixture weight between mean individual reward and community reward,
# plus the clinical outcome parameters.
lambda_weight: 0.5
base_benefit: 1.0
base_penalty: 1.0
base_efficacy: 0.9
base_failure_harm: 1.0
normalization_cap: 1.0
expected_value_mode: false
"""

_DEFAULT_PATIENTS = """\
# Attribute distributions for the synthetic cohort and the observation
# corruption applied to the infection probability.
pi:
  kind: constant
  value: 0.5
phi_b:
  kind: constant
  value: 1.0
omega_b:
  kind: constant
  value: 1.0
phi_f:
  kind: constant
  value: 1.0
omega_f:
  kind: constant
  value: 1.0
rho:
  kind: constant
  value: 0.1
bias_pi: 0.0
noise_sd_pi: 0.0
observable_attributes: []
"""

_DEFAULT_AGENT = """\
# Built-in agent selection and hyperparameters.
algorithm: tabular_q
threshold: 0.5
learning_rate: 0.1
discount: 0.95
epsilon_start: 1.0
epsilon_end: 0.05
epsilon_decay_episodes: 200
bins: 5
seed: 0
"""

_DEFAULT_UMBRELLA = """\
# Base experiment configuration
config_folder_location: ../

environment: environment/default.yaml
reward_calculator: reward_calculator/default.yaml
patient_generator: patient_generator/default.yaml
agent_algorithm: agent_algorithm/default.yaml

training:
  run_name: example_run
  total_num_training_episodes: 25
  save_freq_every_n_episodes: 5
  eval_freq_every_n_episodes: 5
  num_eval_episodes: 10
  seed: 42
  log_patient_trajectories: true
"""


def scaffold_defaults(target_dir: str | Path, force: bool = False) -> list[Path]:
    """Create a runnable configs/ tree of default files under target_dir.

    Refuses to overwrite existing files unless force is set.
    """
    target = Path(target_dir)
    if not target.is_dir():
        raise ConfigError(f"target directory does not exist: {target}")
    plan = {
        target / "configs" / "environment" / "default.yaml": _DEFAULT_ENVIRONMENT,
        target / "configs" / "reward_calculator" / "default.yaml": _DEFAULT_REWARD,
        target / "configs" / "patient_generator" / "default.yaml": _DEFAULT_PATIENTS,
        target / "configs" / "agent_algorithm" / "default.yaml": _DEFAULT_AGENT,
        target / "configs" / "umbrella_configs" / "base_experiment.yaml": _DEFAULT_UMBRELLA,
    }
    if not force:
        existing = [str(p) for p in plan if p.exists()]
        if existing:
            raise ConfigError(
                f"refusing to overwrite existing config files: {existing} (use force)"
            )
    created = []
    for p, text in plan.items():
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text, encoding="utf-8")
        created.append(p)
    return created


def default_config() -> ExperimentConfig:
    """The same configuration scaffold_defaults produces, built in memory."""
    return validate_config(config_from_dict({
        "environment": yaml.safe_load(_DEFAULT_ENVIRONMENT),
        "reward_calculator": yaml.safe_load(_DEFAULT_REWARD),
        "patient_generator": yaml.safe_load(_DEFAULT_PATIENTS),
        "agent_algorithm": yaml.safe_load(_DEFAULT_AGENT),
        "training": yaml.safe_load(_DEFAULT_UMBRELLA)["training"],
    }))
