"""Command-line interface: ``hartree {measure,bound,certify,sigma,random}``.

Exit codes: 0 success, 1 certified property violated, 2 input error,
3 guard or usage error.  Reports are JSON on standard output.
"""

from __future__ import annotations

import argparse
import re
import sys
import time
from dataclasses import replace

import numpy as np

from hartree.bounds import slice_certificate, space_bound
from hartree.eigensolver import SolverConfig, entanglement_eigenvalue
from hartree.fileio import (
    REPORT_SCHEMA,
    StateFileError,
    complex_pairs,
    dumps,
    load_state,
    save_state,
    state_digest,
)
from hartree.sigma import OuterConfig, diagonal_extremal_state, sigma_search
from hartree.state import (
    GuardError,
    HartreeError,
    ShapeError,
    bell_state,
    frobenius_norm,
    ghz_state,
    normalize,
    random_separable,
    random_state,
    separable_to_tensor,
    w_state,
)

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3


class UsageError(HartreeError):
    """Valid input that the requested command cannot handle."""


def parse_dims(text: str) -> list[int]:
    try:
        dims = [int(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed dims {text!r}") from None
    if len(dims) < 2 or any(d < 1 for d in dims):
        raise argparse.ArgumentTypeError(f"need at least two positive dims, got {text!r}")
    return dims


def resolve_state(spec: str):
    """Named state (``bell``, ``ghz:n``, ``w:n``, ``diag:d1,d2``) or a file path."""
    if spec == "bell":
        return bell_state()
    m = re.fullmatch(r"(ghz|w):(\d+)", spec)
    if m:
        n = int(m.group(2))
        if n < 2:
            raise StateFileError(f"{spec}: need at least two modes")
        return ghz_state(n) if m.group(1) == "ghz" else w_state(n)
    m = re.fullmatch(r"diag:(\d+),(\d+)", spec)
    if m:
        return diagonal_extremal_state((int(m.group(1)), int(m.group(2))))
    return load_state(spec)


def _solver_config(args) -> SolverConfig:
    return SolverConfig(
        max_iters=args.max_iters,
        tol=args.tol,
        restarts=args.restarts,
        residual_tol=args.residual_tol,
        seed=args.seed,
    )


def _config_echo(cfg: SolverConfig) -> dict:
    return {
        "seed": cfg.seed,
        "restarts": cfg.restarts,
        "tol": cfg.tol,
        "max_iters": cfg.max_iters,
        "residual_tol": cfg.residual_tol,
    }


def _load_unit(spec: str):
    t = resolve_state(spec)
    norm = frobenius_norm(t)
    if norm == 0:
        raise StateFileError("cannot normalize zero state")
    rescaled = abs(norm - 1.0) > 1e-12
    if rescaled:
        print(f"hartree: warning: input norm is {norm:.17g}; rescaled to unit norm", file=sys.stderr)
        t = normalize(t)
    return t, rescaled, norm


def _bound_block(t, lam: float) -> dict:
    bound = space_bound(t.dims)
    block = {
        "lower_bound": bound.lower,
        "exact": bound.exact,
        "distance_ceiling": bound.distance_ceiling,
    }
    if t.n >= 3:
        cert = slice_certificate(t, lambda_star=lam)
        block.update(chain_holds=cert.chain_holds, slack=cert.slack)
    else:
        slack = t.dims.reduced_size * lam**2 - 1.0
        block.update(chain_holds=slack >= -1e-8, slack=slack)
    return block


def cmd_measure(args) -> int:
    cfg = _solver_config(args)
    t, rescaled, norm = _load_unit(args.state)
    if args.method == "svd" and t.n != 2:
        raise UsageError("--method svd requires a two-mode state")
    report = entanglement_eigenvalue(t, cfg, args.method)
    lam = report.value
    doc = {
        "schema": REPORT_SCHEMA,
        "command": "measure",
        "input_digest": state_digest(t),
        "dims": list(t.dims.dims),
        "input_norm": norm,
        "rescaled": rescaled,
        "method": report.method,
        "lambda_star": lam,
        "geometric_measure": float(np.sqrt(max(0.0, 2.0 - 2.0 * lam))),
        "converged": report.converged,
        "nearest": [complex_pairs(f) for f in report.nearest.factors],
        "residuals": list(report.residuals),
        "iterations_per_restart": list(report.iterations_per_restart),
        "bound": _bound_block(t, lam),
        "config": _config_echo(cfg),
    }
    return _emit(doc, args)


def cmd_bound(args) -> int:
    bound = space_bound(args.dims)
    doc = {
        "schema": REPORT_SCHEMA,
        "command": "bound",
        "dims": list(bound.dims.dims),
        "lower_bound": bound.lower,
        "exact": bound.exact,
        "distance_ceiling": bound.distance_ceiling,
    }
    return _emit(doc, args)


def cmd_certify(args) -> int:
    cfg = _solver_config(args)
    t, rescaled, _ = _load_unit(args.state)
    if t.n < 3:
        raise UsageError(
            "certify needs at least three modes; for two modes the exact value "
            "is 1/sqrt(min dim) (see `hartree bound`)"
        )
    cert = slice_certificate(t, cfg)
    doc = {
        "schema": REPORT_SCHEMA,
        "command": "certify",
        "input_digest": state_digest(t),
        "dims": list(t.dims.dims),
        "rescaled": rescaled,
        "lambda_star": cert.lambda_star,
        "frobenius_sq": cert.frobenius_sq,
        "slice_modes": list(cert.slice_modes),
        "matrix_modes": list(cert.matrix_modes),
        "slices": [
            {"index": list(k), "spectral": v, "frobenius": cert.slice_frobenius[k]}
            for k, v in cert.slice_norms.items()
        ],
        "links": cert.links,
        "margins": cert.margins,
        "chain_holds": cert.chain_holds,
        "slack": cert.slack,
        "lower_bound": space_bound(t.dims).lower,
        "config": _config_echo(cfg),
    }
    _emit(doc, args)
    return EXIT_OK if cert.chain_holds else EXIT_VIOLATION


def cmd_sigma(args) -> int:
    verify = _solver_config(args)
    cfg = OuterConfig(
        outer_iters=args.outer_iters,
        step0=args.step0,
        outer_restarts=args.outer_restarts,
        verify=verify,
        inner=replace(OuterConfig.inner, seed=args.seed),
        seed=args.seed,
    )
    result = sigma_search(args.dims, cfg)
    doc = {
        "schema": REPORT_SCHEMA,
        "command": "sigma",
        "dims": list(result.dims.dims),
        "lower_bound": result.lower_bound,
        "best_lambda": result.best_lambda,
        "gap": result.gap,
        "exact": result.exact,
        "estimate_kind": "exact" if result.exact is not None else "upper estimate",
        "restart_bests": result.restart_bests,
        "best_history": [[i, v] for i, v in result.best_history],
        "witness_digest": state_digest(result.best_state),
        "outer_config": {
            "outer_iters": cfg.outer_iters,
            "outer_restarts": cfg.outer_restarts,
            "step0": cfg.step0,
            "schedule": cfg.schedule,
            "seed": cfg.seed,
            "inner": _config_echo(cfg.inner),
            "verify": _config_echo(cfg.verify),
        },
    }
    if args.out:
        try:
            save_state(result.best_state, args.out)
        except OSError as exc:
            raise StateFileError(f"cannot write {args.out}: {exc}") from exc
        doc["witness_file"] = str(args.out)
    return _emit(doc, args)


def cmd_random(args) -> int:
    if args.separable:
        t = separable_to_tensor(random_separable(args.dims, args.seed))
    else:
        t = random_state(args.dims, args.seed)
    try:
        save_state(t, args.out)
    except OSError as exc:
        raise StateFileError(f"cannot write {args.out}: {exc}") from exc
    return EXIT_OK


def _emit(doc: dict, args) -> int:
    if getattr(args, "timing", False):
        doc["wall_time_s"] = time.perf_counter() - args.start_time
    sys.stdout.write(dumps(doc) + "\n")
    return EXIT_OK


def _add_solver_flags(p, restarts: int = 16) -> None:
    p.add_argument("--restarts", type=int, default=restarts)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--residual-tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timing", action="store_true", help="add wall_time_s to the report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hartree",
        description="Entanglement eigenvalues, nearest product states and minimum Hartree value bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="lambda*, geometric measure and nearest product state")
    p.add_argument("state", help="state file or bell | ghz:n | w:n | diag:d1,d2")
    p.add_argument("--method", choices=["auto", "power", "svd", "brute"], default="auto")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("bound", help="lower bound (exact value for two modes)")
    p.add_argument("--dims", type=parse_dims, required=True)
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("certify", help="evaluate the slice inequality chain")
    p.add_argument("state")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("sigma", help="search for the minimum Hartree value")
    p.add_argument("--dims", type=parse_dims, required=True)
    p.add_argument("--outer-iters", type=int, default=2000)
    p.add_argument("--outer-restarts", type=int, default=8)
    p.add_argument("--step0", type=float, default=0.1)
    p.add_argument("--out", help="write the best witness state here")
    _add_solver_flags(p, restarts=4)
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("random", help="write a random unit state file")
    p.add_argument("--dims", type=parse_dims, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--separable", action="store_true")
    p.set_defaults(func=cmd_random)
    return parser


def main(argv=None) -> int:
    start = time.perf_counter()
    args = build_parser().parse_args(argv)
    args.start_time = start
    try:
        return args.func(args)
    except (GuardError, UsageError, ShapeError) as exc:
        print(f"hartree: error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except HartreeError as exc:
        print(f"hartree: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
