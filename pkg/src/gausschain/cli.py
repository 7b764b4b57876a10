"""Command-line front end.

Exit codes: 0 success, 1 usage/config error, 2 validation failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .chain_model import UnstableChainError
from .config import Command, ConfigError, EngineChoice, OutputFormat, RunConfig, parse_config, with_overrides
from .decomposition import build_propagator, export_circuit
from .entanglement import log_negativity, reduce_pair
from .protocols import Engine, evolve, run_sweep
from .reporting import emit_records, fmt, write_text
from .validation import run_checks

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_IO = 0, 1, 2, 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gausschain", description="Gaussian harmonic-chain simulator")
    p.add_argument("command", choices=[c.value for c in Command], nargs="?")
    p.add_argument("--config", help="path to a key = value config file")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=[f.value for f in OutputFormat])
    p.add_argument("--engine", choices=[e.value for e in EngineChoice])
    return p


def load(args) -> RunConfig:
    text = ""
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    cfg = parse_config(text)
    return with_overrides(
        cfg,
        command=Command(args.command) if args.command else None,
        output=args.out,
        format=OutputFormat(args.format) if args.format else None,
        engine=EngineChoice(args.engine) if args.engine else None,
    )


def _sweep(cfg: RunConfig, out) -> int:
    engines = [Engine.DECOMPOSITION, Engine.ORACLE] if cfg.engine is EngineChoice.BOTH else [Engine(cfg.engine.value)]
    results = [run_sweep(cfg.sweep(e)) for e in engines]
    if len(results) == 2:
        worst = max(
            abs(a.entries[p] - b.entries[p]) for a, b in zip(*results) for p in a.entries
        )
        print(f"# decomposition vs oracle: max |delta log-negativity| = {worst:.3e}", file=sys.stderr)
        if worst >= 1e-8:
            return EXIT_VALIDATION
    emit_records(results[0], cfg.format.value, out)
    return EXIT_OK


def _simulate(cfg: RunConfig, out) -> int:
    v = evolve(cfg.sweep(), cfg.tau)
    n = cfg.n
    lam = {f"{a}-{b}": log_negativity(reduce_pair(v, a, b)) for a in range(1, n + 1) for b in range(a + 1, n + 1)}
    if cfg.format is OutputFormat.JSON:
        text = json.dumps({"tau": cfg.tau, "covariance": v.tolist(), "log_negativity": lam}, indent=1) + "\n"
    else:
        rows = ["pair,log_negativity"] + [f"{k},{fmt(x)}" for k, x in lam.items()]
        rows += ["# covariance"] + [",".join(fmt(x) for x in row) for row in np.asarray(v)]
        text = "\n".join(rows) + "\n"
    write_text(text, out)
    return EXIT_OK


def _decompose(cfg: RunConfig, out) -> int:
    spec = cfg.chain()
    seq = build_propagator(spec, cfg.clock.time(cfg.tau, spec.omega))
    header = f"# n={spec.n} omega={fmt(spec.omega)} kappa={fmt(spec.kappa)} model={spec.model.value} tau={fmt(cfg.tau)}\n"
    write_text(header + export_circuit(seq), out)
    return EXIT_OK


def _validate(cfg: RunConfig, out) -> int:
    taus = np.linspace(cfg.tau_start, cfg.tau_end, 41)
    checks = run_checks(cfg.chain(), taus, cfg.clock, cfg.r)
    write_text("".join(c.line() + "\n" for c in checks), out)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VALIDATION


_HANDLERS = {
    Command.SWEEP: _sweep,
    Command.TAG: _sweep,
    Command.SIMULATE: _simulate,
    Command.DECOMPOSE: _decompose,
    Command.VALIDATE: _validate,
}


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = load(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        return _HANDLERS[cfg.command](cfg, cfg.output)
    except UnstableChainError as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
