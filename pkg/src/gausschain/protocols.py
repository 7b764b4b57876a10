"""Sweep drivers: vacuum and tagged chains over a grid of interaction times."""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .chain_model import ChainSpec, eigensystem, validate_stability
from .decomposition import build_propagator, coupler_pattern, mode_schedule
from .entanglement import log_negativities
from .oracle import direct_propagator, flow_generator, matrix_exponential
from .symplectic import apply, compose, gate_to_symplectic, omega_form, single_mode_squeezed

MAX_GRID_POINTS = 10_000_000
DEFAULT_TAG = {3: 0.2, 4: 0.4, 5: 0.6}

Pair = tuple[int, int]


class Clock(enum.Enum):
    """How the dimensionless time ``tau`` maps onto evolution time ``t``.

    ``GENERATOR``: ``t = tau / (2 omega)``. The rotation angle of each normal
    mode equals ``(tau/2) sqrt(2 E_j / omega)``, i.e. tau counts the
    parameter of ``exp(i phi (O^2 + P^2))`` read as a plain quadrature
    rotation. This is the default axis for sweeps.

    ``PHYSICAL``: ``t = tau / omega``.
    """

    GENERATOR = "generator"
    PHYSICAL = "physical"

    def time(self, tau: float, omega: float) -> float:
        if self is Clock.GENERATOR:
            return tau / (2 * omega)
        return tau / omega


class Engine(enum.Enum):
    DECOMPOSITION = "decomposition"
    ORACLE = "oracle"


@dataclass(frozen=True)
class SweepConfig:
    spec: ChainSpec
    tau_start: float = 0.0
    tau_end: float = 60.0
    tau_step: float = 0.01
    pairs: tuple[Pair, ...] = ()
    tagging: float | None = None
    clock: Clock = Clock.GENERATOR
    engine: Engine = Engine.DECOMPOSITION
    record_blocks: bool = False
    check_purity: bool = False

    def __post_init__(self):
        if not self.tau_step > 0:
            raise ValueError(f"tau_step must be positive, got {self.tau_step}")
        if self.tau_end < self.tau_start:
            raise ValueError("tau_end must not precede tau_start")
        pairs = tuple(tuple(p) for p in self.pairs) or tuple((1, j) for j in range(2, self.spec.n + 1))
        for a, b in pairs:
            if a == b or not (1 <= a <= self.spec.n and 1 <= b <= self.spec.n):
                raise ValueError(f"pair ({a}, {b}) invalid for n={self.spec.n}")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "clock", Clock(self.clock))
        object.__setattr__(self, "engine", Engine(self.engine))

    def grid(self) -> np.ndarray:
        count = math.floor((self.tau_end - self.tau_start) / self.tau_step + 1e-9) + 1
        if count > MAX_GRID_POINTS:
            raise ValueError(f"grid of {count} points exceeds the {MAX_GRID_POINTS} limit")
        return self.tau_start + self.tau_step * np.arange(count)


@dataclass(frozen=True)
class SweepRecord:
    tau: float
    entries: dict[Pair, float]
    blocks: dict[str, float] = field(default_factory=dict)
    purity_error: float | None = None
    symplectic_error: float | None = None


def initial_state(config: SweepConfig) -> np.ndarray:
    n = config.spec.n
    v = np.eye(2 * n)
    if config.tagging is not None:
        sq = single_mode_squeezed(config.tagging)
        v[:2, :2] = sq
        v[-2:, -2:] = sq
    return v


def propagators(spec: ChainSpec, engine: Engine = Engine.DECOMPOSITION) -> Callable[[np.ndarray], np.ndarray]:
    """Return ``ts -> S(ts)``, a stack of maps of shape (len(ts), 2n, 2n).

    The decomposition engine computes the time-independent coupler layer
    once. Each normal mode then contributes the 2x2 product
    squeezer(-s) -> rotator(theta) -> squeezer(s), which is
    ``[[cos, exp(-2s) sin], [-exp(2s) sin, cos]]``.
    """
    engine = Engine(engine)
    if engine is Engine.ORACLE:
        gen = flow_generator(spec)
        return lambda ts: matrix_exponential(gen[None] * np.asarray(ts, dtype=float)[:, None, None])
    es = eigensystem(spec)
    n = spec.n
    couplers = coupler_pattern(es)
    b = compose([gate_to_symplectic(g, n) for g in couplers]) if couplers else np.eye(2 * n)
    squeeze = mode_schedule(es, spec, 0.0).squeeze
    down, up = np.exp(-2 * squeeze), np.exp(2 * squeeze)
    idx = np.arange(n)

    def at(ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        angles = np.stack([mode_schedule(es, spec, t).angles for t in ts]) if len(ts) else np.zeros((0, n))
        c, sn = np.cos(angles), np.sin(angles)
        local = np.zeros((len(ts), 2 * n, 2 * n))
        local[:, 2 * idx, 2 * idx] = c
        local[:, 2 * idx + 1, 2 * idx + 1] = c
        local[:, 2 * idx, 2 * idx + 1] = down * sn
        local[:, 2 * idx + 1, 2 * idx] = -up * sn
        return b.T @ local @ b

    return at


def propagator(spec: ChainSpec, engine: Engine = Engine.DECOMPOSITION) -> Callable[[float], np.ndarray]:
    """Single-time form of :func:`propagators`: ``t -> S(t)``."""
    batch = propagators(spec, engine)
    return lambda t: batch(np.array([t]))[0]


_CHUNK = 256


def _evaluate(config: SweepConfig, batch, v0: np.ndarray, taus: np.ndarray) -> list[SweepRecord]:
    spec = config.spec
    s = batch(np.array([config.clock.time(tau, spec.omega) for tau in taus]))
    v = s @ v0 @ s.transpose(0, 2, 1)
    v = (v + v.transpose(0, 2, 1)) / 2
    entries = {}
    for a, b in config.pairs:
        idx = [2 * a - 2, 2 * a - 1, 2 * b - 2, 2 * b - 1]
        entries[(a, b)] = log_negativities(v[:, idx][:, :, idx])
    purity = sympl = None
    if config.check_purity:
        # the initial states used here are pure, so every eigenvalue should stay at 1
        ev = np.linalg.eigvals(1j * omega_form(spec.n) @ v)
        purity = np.max(np.abs(np.abs(ev.real) - 1), axis=1)
        om = omega_form(spec.n)
        sympl = np.max(np.abs(s @ om @ s.transpose(0, 2, 1) - om), axis=(1, 2))
    out = []
    for i, tau in enumerate(taus):
        blocks: dict[str, float] = {}
        if config.record_blocks:
            for j, k in ((1, 2), (1, 3)):
                if k > spec.n:
                    continue
                for x in range(2):
                    for y in range(2):
                        blocks[f"c{j}{k}_{x + 1}{y + 1}"] = float(v[i, 2 * j - 2 + x, 2 * k - 2 + y])
        out.append(
            SweepRecord(
                float(tau),
                {p: float(vals[i]) for p, vals in entries.items()},
                blocks,
                None if purity is None else float(purity[i]),
                None if sympl is None else float(sympl[i]),
            )
        )
    return out


def _threads() -> int:
    raw = os.environ.get("GAUSSCHAIN_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"GAUSSCHAIN_THREADS must be an integer, got {raw!r}") from None
    return (os.cpu_count() or 1) if n <= 0 else n


def run_sweep(config: SweepConfig) -> list[SweepRecord]:
    """Evolve the initial state over the tau grid; records come back in grid order.

    The grid is processed in fixed chunks, so the result does not depend on
    the number of worker threads.
    """
    validate_stability(config.spec)
    taus = config.grid()
    batch = propagators(config.spec, config.engine)
    v0 = initial_state(config)
    chunks = [taus[i : i + _CHUNK] for i in range(0, len(taus), _CHUNK)]
    workers = _threads()
    if workers == 1 or len(chunks) < 2:
        parts = [_evaluate(config, batch, v0, c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _evaluate(config, batch, v0, c), chunks))
    return [rec for part in parts for rec in part]


def curve(records: Sequence[SweepRecord], pair: Pair) -> tuple[np.ndarray, np.ndarray]:
    taus = np.array([r.tau for r in records])
    return taus, np.array([r.entries[tuple(pair)] for r in records])


def find_peak(records: Sequence[SweepRecord], pair: Pair) -> tuple[float, float]:
    """Grid argmax of the pair's log-negativity; ties go to the earliest tau."""
    if not records:
        raise ValueError("find_peak needs at least one record")
    taus, values = curve(records, pair)
    i = int(np.argmax(values))
    return float(taus[i]), float(values[i])


def dominance_report(
    records: Sequence[SweepRecord], end_pair: Pair, other_pairs: Sequence[Pair]
) -> list[tuple[float, float]]:
    """Maximal runs of grid points where ``end_pair`` strictly beats every other pair."""
    intervals = []
    start = prev = None
    for r in records:
        lead = r.entries[tuple(end_pair)]
        ok = all(lead > r.entries[tuple(p)] for p in other_pairs)
        if ok and start is None:
            start = r.tau
        if not ok and start is not None:
            intervals.append((start, prev))
            start = None
        prev = r.tau
    if start is not None:
        intervals.append((start, prev))
    return intervals


def evolve(config: SweepConfig, tau: float) -> np.ndarray:
    """Covariance matrix at a single ``tau`` using the full gate sequence."""
    spec = config.spec
    t = config.clock.time(tau, spec.omega)
    if config.engine is Engine.ORACLE:
        s = direct_propagator(spec, t)
    else:
        s = build_propagator(spec, t).symplectic()
    return apply(s, initial_state(config))
