"""Self-checks for a configured chain, as run by ``gausschain validate``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain_model import ChainSpec, Model, UnstableChainError, validate_stability
from .decomposition import build_propagator
from .entanglement import correlation_blocks, log_negativity, reduce_pair
from .oracle import direct_propagator
from .protocols import Clock, SweepConfig, initial_state
from .symplectic import apply, omega_form, symplectic_eigenvalues


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    max_error: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name}: max error {self.max_error:.3e} (tol {self.tolerance:.0e})"
        return f"{text} {self.detail}".rstrip()


def run_checks(
    spec: ChainSpec,
    taus=None,
    clock: Clock = Clock.GENERATOR,
    tagging: float | None = None,
) -> list[Check]:
    """Oracle equivalence, symplecticity, purity and mirror symmetry over ``taus``."""
    try:
        validate_stability(spec)
    except UnstableChainError as exc:
        return [Check("stability", False, float("nan"), 0.0, str(exc))]
    checks = [Check("stability", True, 0.0, 0.0)]
    if taus is None:
        taus = np.linspace(0.0, 100.0, 41)
    om = omega_form(spec.n)
    states = {"vacuum": SweepConfig(spec)}
    if tagging is not None:
        states["tagged"] = SweepConfig(spec, tagging=tagging)
    oracle_err = sympl_err = purity_err = 0.0
    mirror_err = {name: 0.0 for name in states}
    null_err = 0.0
    n = spec.n
    for tau in taus:
        t = clock.time(tau, spec.omega)
        s = build_propagator(spec, t).symplectic()
        oracle_err = max(oracle_err, float(np.max(np.abs(s - direct_propagator(spec, t)))))
        sympl_err = max(sympl_err, float(np.max(np.abs(s @ om @ s.T - om))))
        for name, cfg in states.items():
            v = apply(s, initial_state(cfg))
            purity_err = max(purity_err, float(np.max(np.abs(symplectic_eigenvalues(v) - 1))))
            cb = correlation_blocks(v)
            # site reversal maps block (1, 2) onto (n, n-1), the transpose of (n-1, n)
            err = max(
                np.max(np.abs(cb.locals[0] - cb.locals[-1])),
                np.max(np.abs(cb.cross[(1, 2)] - cb.cross[(n - 1, n)].T)),
            )
            mirror_err[name] = max(mirror_err[name], float(err))
            if name == "vacuum" and spec.model is Model.ROTATING_WAVE:
                for a in range(1, n + 1):
                    for b in range(a + 1, n + 1):
                        null_err = max(null_err, log_negativity(reduce_pair(v, a, b)))
    checks.append(Check("oracle-equivalence", oracle_err < 1e-9, oracle_err, 1e-9))
    checks.append(Check("symplecticity", sympl_err < 1e-10, sympl_err, 1e-10))
    checks.append(Check("purity", purity_err < 1e-9, purity_err, 1e-9))
    for name, err in mirror_err.items():
        checks.append(Check(f"mirror-symmetry[{name}]", err < 1e-10, err, 1e-10))
    if spec.model is Model.ROTATING_WAVE:
        checks.append(
            Check("rotating-wave-null", null_err < 1e-12, null_err, 1e-12, "max pairwise log-negativity")
        )
    return checks
