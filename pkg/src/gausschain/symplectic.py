"""Covariance matrices and phase-space actions of linear-optics gates.

Quadratures are interleaved, ``x = (q1, p1, ..., qn, pn)``, and the vacuum
covariance is the identity. A map ``S`` acts as ``x -> S x`` on quadratures
and as ``V -> S V S^T`` on covariance matrices. Modes are 1-based in the gate
API, matching the circuit text format.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Union

import numpy as np

SYMMETRY_TOL = 1e-12
PHYSICAL_TOL = 1e-10

J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class Rotator:
    """Phase-space rotation of mode ``j`` by ``phi`` (free evolution sense)."""

    j: int
    phi: float


@dataclass(frozen=True)
class Squeezer:
    """Scales q_j by ``exp(-s)`` and p_j by ``exp(s)``."""

    j: int
    s: float


@dataclass(frozen=True)
class Coupler:
    """Beam splitter on modes ``j < k`` with transmittivity cos(theta)."""

    j: int
    k: int
    theta: float


Gate = Union[Rotator, Squeezer, Coupler]


def omega_form(n: int) -> np.ndarray:
    """Block-diagonal symplectic form with blocks [[0, 1], [-1, 0]]."""
    return np.kron(np.eye(n), J2)


def vacuum_covariance(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError(f"need at least one mode, got {n}")
    return np.eye(2 * n)


def is_symplectic(s: np.ndarray, tol: float = PHYSICAL_TOL) -> bool:
    om = omega_form(s.shape[0] // 2)
    return bool(np.max(np.abs(s @ om @ s.T - om)) < tol)


def _check_mode(j: int, n: int) -> None:
    if not 1 <= j <= n:
        raise IndexError(f"mode {j} out of range 1..{n}")


def gate_to_symplectic(gate: Gate, n: int) -> np.ndarray:
    """Embed a gate's 2x2 (or 4x4) block into the 2n x 2n identity."""
    s = np.eye(2 * n)
    if isinstance(gate, Rotator):
        _check_mode(gate.j, n)
        c, sn = np.cos(gate.phi), np.sin(gate.phi)
        a = 2 * (gate.j - 1)
        s[a : a + 2, a : a + 2] = [[c, sn], [-sn, c]]
    elif isinstance(gate, Squeezer):
        _check_mode(gate.j, n)
        a = 2 * (gate.j - 1)
        s[a, a] = np.exp(-gate.s)
        s[a + 1, a + 1] = np.exp(gate.s)
    elif isinstance(gate, Coupler):
        _check_mode(gate.j, n)
        _check_mode(gate.k, n)
        if gate.j == gate.k:
            raise ValueError(f"coupler needs two distinct modes, got {gate.j} twice")
        t, r = np.cos(gate.theta), np.sin(gate.theta)
        a, b = 2 * (gate.j - 1), 2 * (gate.k - 1)
        for d in range(2):
            s[a + d, a + d] = t
            s[b + d, b + d] = t
            s[a + d, b + d] = -r
            s[b + d, a + d] = r
    else:
        raise TypeError(f"not a gate: {gate!r}")
    return s


def compose(maps: Iterable[np.ndarray]) -> np.ndarray:
    """Product of maps listed in the order they are applied (first first)."""
    out = None
    for m in maps:
        if out is None:
            out = np.array(m, dtype=float)
            continue
        if m.shape != out.shape:
            raise ValueError(f"cannot compose {out.shape} with {m.shape}")
        out = m @ out
    if out is None:
        raise ValueError("compose needs at least one map")
    return out


def apply(s: np.ndarray, v: np.ndarray) -> np.ndarray:
    if s.shape != v.shape:
        raise ValueError(f"map {s.shape} does not match covariance {v.shape}")
    out = s @ v @ s.T
    return (out + out.T) / 2


def symplectic_eigenvalues(v: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of ``v``, one value per mode, ascending.

    These are the moduli of the eigenvalues of ``i Omega v``, which come in
    +/- pairs; physical states have all of them >= 1.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] % 2:
        raise ValueError(f"expected a 2n x 2n matrix, got shape {v.shape}")
    if np.max(np.abs(v - v.T)) > SYMMETRY_TOL * max(1.0, np.max(np.abs(v))):
        raise ValueError("covariance matrix is not symmetric")
    ev = np.linalg.eigvals(1j * omega_form(v.shape[0] // 2) @ v)
    # i*Omega*v is similar to a Hermitian matrix for v > 0: spectrum is real
    ev = np.sort(np.abs(ev.real))
    return ev[::2]


class StateCheck(NamedTuple):
    eigenvalues: np.ndarray
    physical: bool


def check_state(v: np.ndarray, tol: float = PHYSICAL_TOL) -> StateCheck:
    """Symplectic spectrum of ``v`` and whether it clears the vacuum bound."""
    nu = symplectic_eigenvalues(v)
    return StateCheck(nu, bool(nu[0] >= 1 - tol))


def single_mode_squeezed(r: float) -> np.ndarray:
    """Covariance of a vacuum squeezed by ``r`` (q variance ``exp(-2r)``)."""
    return np.diag([np.exp(-2 * r), np.exp(2 * r)])
