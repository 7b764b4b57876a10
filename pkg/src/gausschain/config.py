"""Flat ``key = value`` run configuration.

Example::

    command = tag
    chain.n = 3
    chain.omega = 1.0
    chain.kappa = 0.1
    sweep.r = 0.2

Unknown keys are rejected so that a typo such as ``chain.kapa`` cannot be
silently ignored.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, fields, replace

from .chain_model import ChainSpec, Model
from .protocols import DEFAULT_TAG, Clock, Engine, Pair, SweepConfig


class ConfigError(ValueError):
    pass


class Command(enum.Enum):
    SIMULATE = "simulate"
    DECOMPOSE = "decompose"
    SWEEP = "sweep"
    TAG = "tag"
    VALIDATE = "validate"


class OutputFormat(enum.Enum):
    CSV = "csv"
    JSON = "json"


class EngineChoice(enum.Enum):
    DECOMPOSITION = "decomposition"
    ORACLE = "oracle"
    BOTH = "both"


@dataclass(frozen=True)
class RunConfig:
    command: Command = Command.SWEEP
    n: int = 3
    omega: float = 1.0
    kappa: float = 0.1
    model: Model = Model.FULL
    tau_start: float = 0.0
    tau_end: float = 60.0
    tau_step: float = 0.01
    pairs: tuple[Pair, ...] = ()
    r: float | None = None
    clock: Clock = Clock.GENERATOR
    blocks: bool = False
    tau: float = 0.0
    output: str | None = None
    format: OutputFormat = OutputFormat.CSV
    engine: EngineChoice = EngineChoice.DECOMPOSITION

    def chain(self) -> ChainSpec:
        return ChainSpec(self.n, self.omega, self.kappa, self.model)

    def tagging(self) -> float | None:
        if self.r is not None:
            return self.r
        if self.command is Command.TAG:
            return DEFAULT_TAG.get(self.n, 0.2)
        return None

    def sweep(self, engine: Engine = Engine.DECOMPOSITION) -> SweepConfig:
        return SweepConfig(
            self.chain(),
            self.tau_start,
            self.tau_end,
            self.tau_step,
            self.pairs,
            self.tagging(),
            self.clock,
            engine,
            record_blocks=self.blocks,
        )


def _parse_pairs(text: str) -> tuple[Pair, ...]:
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        a, sep, b = item.partition("-")
        if not sep:
            raise ValueError(f"pair {item!r} is not of the form a-b")
        out.append((int(a), int(b)))
    return tuple(out)


def _parse_bool(text: str) -> bool:
    low = text.lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _optional_float(text: str) -> float | None:
    return None if text.lower() in ("", "none") else float(text)


# key -> (RunConfig field, parser)
_KEYS = {
    "command": ("command", Command),
    "chain.n": ("n", int),
    "chain.omega": ("omega", float),
    "chain.kappa": ("kappa", float),
    "chain.model": ("model", Model),
    "sweep.tau_start": ("tau_start", float),
    "sweep.tau_end": ("tau_end", float),
    "sweep.tau_step": ("tau_step", float),
    "sweep.pairs": ("pairs", _parse_pairs),
    "sweep.r": ("r", _optional_float),
    "sweep.clock": ("clock", Clock),
    "sweep.blocks": ("blocks", _parse_bool),
    "simulate.tau": ("tau", float),
    "output.path": ("output", str),
    "output.format": ("format", OutputFormat),
    "engine": ("engine", EngineChoice),
}


def parse_config(text: str) -> RunConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        name, parse = _KEYS[key]
        try:
            values[name] = parse(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from None
    cfg = RunConfig(**values)
    validate_config(cfg)
    return cfg


def validate_config(cfg: RunConfig) -> None:
    try:
        cfg.chain()
    except ValueError as exc:
        key = "chain.n" if "n >=" in str(exc) else "chain.omega" if "omega" in str(exc) else "chain.kappa"
        raise ConfigError(f"{key}: {exc}") from None
    if not cfg.tau_step > 0:
        raise ConfigError("sweep.tau_step: must be positive")
    if cfg.tau_end < cfg.tau_start:
        raise ConfigError("sweep.tau_end: must not precede sweep.tau_start")
    for a, b in cfg.pairs:
        if a == b or not (1 <= a <= cfg.n and 1 <= b <= cfg.n):
            raise ConfigError(f"sweep.pairs: pair {a}-{b} invalid for n={cfg.n}")


def _render_value(value) -> str:
    if isinstance(value, enum.Enum):
        return str(value.value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return "none"
    if isinstance(value, tuple):
        return ",".join(f"{a}-{b}" for a, b in value)
    return str(value)


def render_config(cfg: RunConfig) -> str:
    by_field = {name: key for key, (name, _) in _KEYS.items()}
    lines = []
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if f.name == "output" and value is None:
            continue
        lines.append(f"{by_field[f.name]} = {_render_value(value)}")
    return "\n".join(lines) + "\n"


def with_overrides(cfg: RunConfig, **changes) -> RunConfig:
    changes = {k: v for k, v in changes.items() if v is not None}
    return replace(cfg, **changes) if changes else cfg
