"""Brute-force propagator: direct exponential of the Hamiltonian flow.

Independent of the gate decomposition; used to validate it. For
``H = x^T G x / 2`` Hamilton's equations read ``dx/dt = Omega G x``.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .chain_model import ChainSpec, build_quadratic_form
from .symplectic import omega_form


def matrix_exponential(m: np.ndarray) -> np.ndarray:
    """exp(m) by scaling and squaring with a 13th-order Pade approximant.

    A stack of matrices, shape (..., k, k), is exponentiated elementwise.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise ValueError(f"matrix_exponential needs a square matrix, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix_exponential needs finite entries")
    return scipy.linalg.expm(m)


def flow_generator(spec: ChainSpec) -> np.ndarray:
    g = build_quadratic_form(spec).g
    return omega_form(spec.n) @ g


def direct_propagator(spec: ChainSpec, t: float) -> np.ndarray:
    """Symplectic map ``exp(Omega G t)`` of the chain after time ``t``."""
    return matrix_exponential(flow_generator(spec) * t)
