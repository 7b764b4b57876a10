"""Two-mode reduced states, partial transposition and logarithmic negativity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .symplectic import PHYSICAL_TOL, SYMMETRY_TOL, omega_form

IMAG_TOL = 1e-9
INVARIANT_TOL = 1e-8
CLAMP_TOL = 1e-12

_TRANSPOSE = np.diag([1.0, 1.0, 1.0, -1.0])
_I_OMEGA = 1j * omega_form(2)


class UnphysicalStateError(ValueError):
    pass


@dataclass(frozen=True)
class PairState:
    """Covariance of modes ``pair = (a, b)`` in the order (q_a, p_a, q_b, p_b)."""

    v: np.ndarray
    pair: tuple[int, int]


@dataclass(frozen=True)
class CorrelationBlocks:
    """2x2 local blocks ``locals[j]`` and cross blocks ``cross[(j, k)]``, 1-based."""

    locals: list[np.ndarray]
    cross: dict[tuple[int, int], np.ndarray]

    def assemble(self) -> np.ndarray:
        n = len(self.locals)
        v = np.zeros((2 * n, 2 * n))
        for j, block in enumerate(self.locals):
            v[2 * j : 2 * j + 2, 2 * j : 2 * j + 2] = block
        for (j, k), block in self.cross.items():
            a, b = 2 * (j - 1), 2 * (k - 1)
            v[a : a + 2, b : b + 2] = block
            v[b : b + 2, a : a + 2] = block.T
        return v


def reduce_pair(v: np.ndarray, a: int, b: int) -> PairState:
    n = v.shape[0] // 2
    if a == b:
        raise ValueError(f"pair needs two distinct modes, got ({a}, {b})")
    if not (1 <= a <= n and 1 <= b <= n):
        raise IndexError(f"pair ({a}, {b}) out of range 1..{n}")
    idx = [2 * a - 2, 2 * a - 1, 2 * b - 2, 2 * b - 1]
    return PairState(v[np.ix_(idx, idx)].copy(), (a, b))


def partial_transpose(p: PairState) -> PairState:
    """Flip the sign of the second mode's momentum."""
    return PairState(_TRANSPOSE @ p.v @ _TRANSPOSE, p.pair)


def _det2(m: np.ndarray) -> np.ndarray:
    return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]


def _invariants(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(nu1^2 + nu2^2, nu1^2 nu2^2)`` from the block determinants.

    Works on a single 4x4 matrix or a stack of them. The roots
    ``nu^2 = (delta +- sqrt(delta^2 - 4 det v)) / 2`` lose half their digits
    near a degenerate spectrum, so the check compares these two symmetric
    functions instead.
    """
    # for a partially transposed input det(c) has already flipped sign
    delta = _det2(v[..., :2, :2]) + _det2(v[..., 2:, 2:]) + 2 * _det2(v[..., :2, 2:])
    return delta, np.linalg.det(v)


def closed_form_spectrum(p: PairState) -> tuple[float, float]:
    """Symplectic eigenvalues from ``nu^2 = (delta +- sqrt(delta^2 - 4 det v)) / 2``."""
    delta, det = (float(x) for x in _invariants(p.v))
    root = np.sqrt(max(delta**2 - 4 * det, 0.0))
    lo, hi = np.sqrt(max((delta - root) / 2, 0.0)), np.sqrt(max((delta + root) / 2, 0.0))
    return float(lo), float(hi)


def spectra(vs: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues of a stack of two-mode covariances, shape (m, 2).

    Each row is ascending. Raises on asymmetric input, on a complex residual
    above ``IMAG_TOL`` and on disagreement with the determinant invariants.
    """
    vs = np.asarray(vs, dtype=float)
    if vs.ndim != 3 or vs.shape[1:] != (4, 4):
        raise ValueError(f"expected a stack of 4x4 matrices, got shape {vs.shape}")
    if len(vs) == 0:
        return np.zeros((0, 2))
    scale = np.maximum(1.0, np.max(np.abs(vs), axis=(1, 2)))
    if np.any(np.max(np.abs(vs - vs.transpose(0, 2, 1)), axis=(1, 2)) > SYMMETRY_TOL * scale):
        raise ValueError("pair covariance is not symmetric")
    ev = np.linalg.eigvals(_I_OMEGA @ vs)
    residual = np.max(np.abs(ev.imag), axis=1)
    bad = residual > IMAG_TOL * np.maximum(1.0, np.max(np.abs(ev), axis=1))
    if np.any(bad):
        raise ValueError(f"symplectic spectrum has complex residual {residual[bad].max():.3g}")
    nu = np.sort(np.abs(ev.real), axis=1)[:, ::2]
    delta, det = _invariants(vs)
    tol = INVARIANT_TOL * np.maximum(1.0, nu[:, 1] ** 4)
    off = (np.abs(nu[:, 0] ** 2 + nu[:, 1] ** 2 - delta) > tol) | (np.abs((nu[:, 0] * nu[:, 1]) ** 2 - det) > tol)
    if np.any(off):
        i = int(np.argmax(off))
        raise ArithmeticError(f"symplectic spectrum {nu[i]} disagrees with invariants delta={delta[i]}, det={det[i]}")
    return nu


def symplectic_spectrum_2mode(p: PairState) -> tuple[float, float]:
    """Symplectic eigenvalues (ascending) of a two-mode covariance matrix.

    Computed from the eigenvalues of ``i Omega v``; the closed form in terms
    of the local and cross determinants is checked alongside.
    """
    nu = spectra(p.v[None])[0]
    return float(nu[0]), float(nu[1])


def log_negativities(vs: np.ndarray) -> np.ndarray:
    """:func:`log_negativity` for a stack of two-mode covariances, shape (m, 4, 4)."""
    vs = np.asarray(vs, dtype=float)
    nu = spectra(vs)
    if np.any(nu[:, 0] < 1 - PHYSICAL_TOL):
        raise UnphysicalStateError(f"unphysical pair state: symplectic eigenvalue {nu[:, 0].min():.6g}")
    flip = _TRANSPOSE.diagonal()
    gamma = spectra(vs * flip[:, None] * flip[None, :])
    contrib = np.where(gamma < 1 - CLAMP_TOL, -np.log2(np.minimum(gamma, 1.0)), 0.0)
    return contrib.sum(axis=1) + 0.0


def log_negativity(p: PairState) -> float:
    """Logarithmic negativity of a two-mode state, in ebits (log base 2)."""
    try:
        return float(log_negativities(p.v[None])[0])
    except UnphysicalStateError as exc:
        raise UnphysicalStateError(f"pair {p.pair}: {exc}") from None


def correlation_blocks(v: np.ndarray) -> CorrelationBlocks:
    n = v.shape[0] // 2
    locals_ = [v[2 * j : 2 * j + 2, 2 * j : 2 * j + 2].copy() for j in range(n)]
    cross = {
        (j + 1, k + 1): v[2 * j : 2 * j + 2, 2 * k : 2 * k + 2].copy()
        for j in range(n)
        for k in range(j + 1, n)
    }
    return CorrelationBlocks(locals_, cross)


def elementary_c_matrix(s: float, phi: float) -> np.ndarray:
    """Correlation block contributed by a mode squeezed by ``s`` and rotated by ``phi``."""
    sh = np.sinh(2 * s)
    sin2 = np.sin(phi) ** 2
    off = 0.5 * np.sin(2 * phi) * sh
    return np.array([[-np.exp(-2 * s) * sin2 * sh, off], [off, np.exp(2 * s) * sin2 * sh]])


def three_site_vacuum_blocks(squeeze, angles) -> CorrelationBlocks:
    """Closed-form blocks of the N=3 chain evolved from vacuum.

    ``squeeze`` and ``angles`` are the schedule of the two non-bare modes,
    lower frequency first. The elementary matrices are evaluated at the
    negated angle because their rotation runs opposite to :class:`Rotator`.
    """
    c2 = elementary_c_matrix(squeeze[0], -angles[0])
    c3 = elementary_c_matrix(squeeze[1], -angles[1])
    c12 = (c3 - c2) / np.sqrt(2)
    c13 = (c2 + c3) / 2
    eye = np.eye(2)
    return CorrelationBlocks(
        [eye + c13, eye + 2 * c13, eye + c13],
        {(1, 2): c12, (2, 3): c12, (1, 3): c13},
    )
