"""Linear-optics synthesis of the chain propagator.

The propagator factors as couplers -> squeezers -> rotators -> inverse
squeezers -> inverse couplers (temporal order). The coupler layer takes the
site quadratures to the normal modes, the squeezers balance each mode's q and
p frequencies, and the rotators carry all of the time dependence.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .chain_model import ChainSpec, EigenSystem, Model, UnstableChainError, eigensystem
from .symplectic import Coupler, Gate, Rotator, Squeezer, compose, gate_to_symplectic

ORTHOGONALITY_TOL = 1e-10
UNBALANCED_TOL = 1e-9
_ZERO = 1e-15


@dataclass(frozen=True)
class ModeSchedule:
    """Per-mode squeeze parameters and quadrature rotation angles at time t.

    ``angles[j]`` is the phase-space rotation angle of normal mode j, the
    value consumed by :class:`Rotator`. For the full model it equals
    ``t * sqrt(2 E_j omega)``; the generator of ``exp(i phi (O^2 + P^2))``
    would be written with half this angle.
    """

    squeeze: np.ndarray
    angles: np.ndarray


@dataclass(frozen=True)
class GateSequence:
    gates: tuple[Gate, ...]
    n: int
    t: float = 0.0
    spec: ChainSpec | None = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.gates)

    def symplectic(self) -> np.ndarray:
        if not self.gates:
            return np.eye(2 * self.n)
        return compose(gate_to_symplectic(g, self.n) for g in self.gates)


def givens_couplers(matrix: np.ndarray) -> tuple[list[Coupler], np.ndarray]:
    """Factor an orthogonal ``matrix`` as ``D @ B``.

    ``B`` is the product of the returned couplers (first one applied first)
    and ``D`` a diagonal of +/-1, returned as a vector. Entries below the
    diagonal of ``matrix.T`` are eliminated column by column, pivoting on
    the diagonal entry.
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or np.max(np.abs(a @ a.T - np.eye(n))) > ORTHOGONALITY_TOL:
        raise ValueError("coupler pattern needs an orthogonal mode matrix")
    work = a.T.copy()
    couplers: list[Coupler] = []
    for col in range(n - 1):
        for row in range(col + 1, n):
            x, y = work[col, col], work[row, col]
            if abs(y) < _ZERO:
                continue
            theta = math.atan2(-y, x)
            c, s = math.cos(theta), math.sin(theta)
            top, bottom = work[col].copy(), work[row].copy()
            work[col] = c * top - s * bottom
            work[row] = s * top + c * bottom
            work[row, col] = 0.0
            couplers.append(Coupler(col + 1, row + 1, theta))
    # work is now upper triangular and orthogonal, hence diagonal +/-1
    signs = np.sign(np.diag(work))
    return couplers, signs


def coupler_pattern(es: EigenSystem) -> list[Coupler]:
    """Couplers whose combined action maps site quadratures onto normal modes.

    The product reproduces ``es.mode_matrix`` up to the sign of each row,
    which is immaterial because the inverse layer undoes the same signs.
    """
    couplers, _ = givens_couplers(es.mode_matrix)
    return couplers


def _inverse(gate: Gate) -> Gate:
    if isinstance(gate, Coupler):
        return Coupler(gate.j, gate.k, -gate.theta)
    if isinstance(gate, Squeezer):
        return Squeezer(gate.j, -gate.s)
    return Rotator(gate.j, -gate.phi)


def mode_schedule(es: EigenSystem, spec: ChainSpec, t: float) -> ModeSchedule:
    energies = np.asarray(es.energies, dtype=float)
    if np.any(energies <= 0):
        raise UnstableChainError("unstable chain: non-positive normal-mode frequency")
    if spec.model is Model.ROTATING_WAVE:
        # q and p blocks share the mode matrix: H_j = E_j (O^2 + P^2)
        return ModeSchedule(np.zeros(es.n), 2 * energies * t)
    squeeze = np.log(2 * energies / spec.omega) / 4
    if es.ordering == "bare-first":
        squeeze[0] = 0.0
    return ModeSchedule(squeeze, t * np.sqrt(2 * energies * spec.omega))


def build_propagator(spec: ChainSpec, t: float, es: EigenSystem | None = None) -> GateSequence:
    """Gate sequence whose composed map equals ``exp(Omega G t)``.

    Normal mode j sits on site j once the coupler layer has run. Every mode
    gets a rotator, the bare mode included; its squeezers are omitted since
    their parameter is exactly zero.
    """
    if es is None:
        es = eigensystem(spec)
    sched = mode_schedule(es, spec, t)
    couplers = coupler_pattern(es)
    squeezers = [Squeezer(j + 1, -s) for j, s in enumerate(sched.squeeze) if s != 0.0]
    rotators = [Rotator(j + 1, phi) for j, phi in enumerate(sched.angles)]
    gates: list[Gate] = list(couplers)
    gates += squeezers
    gates += rotators
    gates += [_inverse(g) for g in reversed(squeezers)]
    gates += [_inverse(g) for g in reversed(couplers)]
    return GateSequence(tuple(gates), spec.n, t, spec)


_FMT = "{:.17g}"


def export_circuit(seq: GateSequence) -> str:
    """Line-oriented text form of a gate sequence, in temporal order."""
    lines = []
    for g in seq.gates:
        if isinstance(g, Coupler):
            lines.append(f"coupler {g.j} {g.k} {_FMT.format(g.theta)}")
        elif isinstance(g, Squeezer):
            lines.append(f"squeezer {g.j} {_FMT.format(g.s)}")
        else:
            lines.append(f"rotator {g.j} {_FMT.format(g.phi)}")
    return "".join(line + "\n" for line in lines)


def parse_circuit(text: str, n: int | None = None) -> GateSequence:
    """Inverse of :func:`export_circuit`. ``n`` defaults to the highest mode used."""
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, *args = re.split(r"\s+", line)
        try:
            if kind == "coupler" and len(args) == 3:
                gates.append(Coupler(int(args[0]), int(args[1]), float(args[2])))
            elif kind == "squeezer" and len(args) == 2:
                gates.append(Squeezer(int(args[0]), float(args[1])))
            elif kind == "rotator" and len(args) == 2:
                gates.append(Rotator(int(args[0]), float(args[1])))
            else:
                raise ValueError(f"unknown gate line {line!r}")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if n is None:
        modes = [m for g in gates for m in ((g.j, g.k) if isinstance(g, Coupler) else (g.j,))]
        n = max(modes, default=0)
    return GateSequence(tuple(gates), n)


def unbalanced_couplers(seq: GateSequence) -> list[Coupler]:
    """Couplers whose reflectivity sin(theta)^2 is not 1/2."""
    return [g for g in seq.gates if isinstance(g, Coupler) and abs(math.cos(2 * g.theta)) > UNBALANCED_TOL]
