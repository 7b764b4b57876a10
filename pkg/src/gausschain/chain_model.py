"""Open harmonic chain: quadratic form and analytic normal modes."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


ZERO_MODE_TOL = 1e-12


class UnstableChainError(ValueError):
    """Raised when some normal-mode frequency is not strictly positive."""


class Model(enum.Enum):
    FULL = "full"
    ROTATING_WAVE = "rotating_wave"


@dataclass(frozen=True)
class ChainSpec:
    """An open chain of ``n`` oscillators with nearest-neighbour q-q coupling.

    ``omega`` is the bare frequency and ``kappa`` the coupling rate (hbar = 1).
    With ``model=ROTATING_WAVE`` the counter-rotating part of the coupling is
    dropped, which splits it evenly between the q and p blocks.
    """

    n: int
    omega: float
    kappa: float
    model: Model = Model.FULL

    def __post_init__(self):
        if isinstance(self.model, str):
            object.__setattr__(self, "model", Model(self.model))
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"chain needs n >= 2 oscillators, got {self.n}")
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not np.isfinite(self.kappa):
            raise ValueError(f"kappa must be finite, got {self.kappa}")

    @property
    def offdiagonal(self) -> tuple[float, float]:
        """Off-diagonal entries of the (q, p) blocks of the quadratic form."""
        if self.model is Model.FULL:
            return self.kappa, 0.0
        return self.kappa / 2, self.kappa / 2


@dataclass(frozen=True)
class QuadraticForm:
    """``H = x^T g x / 2`` with ``x = (q1, p1, ..., qn, pn)``."""

    g: np.ndarray

    @property
    def n(self) -> int:
        return self.g.shape[0] // 2

    @property
    def q_block(self) -> np.ndarray:
        return self.g[0::2, 0::2]

    @property
    def p_block(self) -> np.ndarray:
        return self.g[1::2, 1::2]


@dataclass(frozen=True)
class EigenSystem:
    """Normal-mode frequencies and mode matrix of the chain's q block.

    Row ``j`` of ``mode_matrix`` holds the coefficients of the normal-mode
    quadrature ``O_j = sum_k mode_matrix[j, k] q_k``; ``energies[j]`` is the
    matching eigenvalue of half the q block. ``ordering`` names the convention:
    ``"bare-first"`` for odd n, ``"increasing"`` for even n.
    """

    energies: np.ndarray
    mode_matrix: np.ndarray
    ordering: str

    @property
    def n(self) -> int:
        return len(self.energies)


def _tridiagonal(n: int, diag: float, off: float) -> np.ndarray:
    m = np.diag(np.full(n, float(diag)))
    idx = np.arange(n - 1)
    m[idx, idx + 1] = off
    m[idx + 1, idx] = off
    return m


def build_quadratic_form(spec: ChainSpec) -> QuadraticForm:
    kq, kp = spec.offdiagonal
    g = np.zeros((2 * spec.n, 2 * spec.n))
    g[0::2, 0::2] = _tridiagonal(spec.n, spec.omega, kq)
    g[1::2, 1::2] = _tridiagonal(spec.n, spec.omega, kp)
    return QuadraticForm(g)


def _closed_form(spec: ChainSpec) -> tuple[np.ndarray, np.ndarray]:
    """Unsorted eigenpairs of tridiag(omega/2, k/2), j = 1..n."""
    n = spec.n
    half_coupling = spec.offdiagonal[0] / 2
    j = np.arange(1, n + 1)
    energies = spec.omega / 2 + 2 * half_coupling * np.cos(j * np.pi / (n + 1))
    modes = np.sqrt(2 / (n + 1)) * np.sin(np.outer(j, j) * np.pi / (n + 1))
    # the sine formula leaves ~1e-17 residue where the exact entry is zero
    modes[np.abs(modes) < 1e-15] = 0.0
    return energies, modes


def validate_stability(spec: ChainSpec) -> None:
    """Raise :class:`UnstableChainError` unless every normal mode is positive.

    A frequency within rounding of zero (``|kappa|`` at the edge of the stable
    range) counts as a zero mode and is rejected too.
    """
    energies, _ = _closed_form(spec)
    k = int(np.argmin(energies))
    if energies[k] <= ZERO_MODE_TOL * spec.omega:
        raise UnstableChainError(
            f"unstable chain: |kappa| too large (mode j={k + 1} has "
            f"E={energies[k]:.6g} <= 0 for n={spec.n}, omega={spec.omega}, "
            f"kappa={spec.kappa})"
        )


def eigensystem(spec: ChainSpec) -> EigenSystem:
    """Analytic normal modes of the chain.

    Odd ``n``: the bare mode (E = omega/2) comes first, the rest follow in
    increasing order. Even ``n``: increasing order. Each row of the mode
    matrix is signed so that its first nonzero entry is positive.
    """
    validate_stability(spec)
    energies, modes = _closed_form(spec)
    n = spec.n
    order = list(np.argsort(energies, kind="stable"))
    if n % 2 == 1:
        bare = (n + 1) // 2 - 1  # j = (n+1)/2 gives cos(pi/2) = 0
        order.remove(bare)
        order.insert(0, bare)
        energies[bare] = spec.omega / 2
        ordering = "bare-first"
    else:
        ordering = "increasing"
    energies = energies[order]
    modes = modes[order]
    for row in modes:
        lead = row[np.flatnonzero(row)[0]]
        if lead < 0:
            row *= -1
    return EigenSystem(energies, modes, ordering)
