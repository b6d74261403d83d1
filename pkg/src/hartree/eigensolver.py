"""Entanglement eigenvalue and nearest product state.

The maximal overlap ``max |<Psi|phi>|`` is found by alternating power
sweeps on the stationarity conditions

    (x)_{j != k} <phi^(j)| |Psi>  =  lambda |phi^(k)>,

i.e. each factor is replaced by the normalized partial contraction of the
state against all other factors.  Two-mode states use an SVD instead.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from hartree.state import (
    EntanglementEigenvalue,
    GuardError,
    HartreeError,
    SeparableState,
    ShapeError,
    StateTensor,
    _overlap_subscripts,
    _unit_vector,
    check_match,
    frobenius_norm,
    overlap,
    random_separable,
)

BRUTE_FORCE_MAX_SIZE = 4096

# below this a partial contraction is treated as zero
_ZERO = 1e-300

_LETTERS = string.ascii_letters


class ConvergenceError(HartreeError):
    """Power sweeps could not recover from a vanishing contraction."""


@dataclass(frozen=True)
class SolverConfig:
    max_iters: int = 500
    tol: float = 1e-12
    restarts: int = 16
    residual_tol: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.max_iters < 1 or self.restarts < 1:
            raise HartreeError("max_iters and restarts must be at least 1")
        if not (self.tol > 0 and self.residual_tol > 0):
            raise HartreeError("tolerances must be positive")


@dataclass(frozen=True)
class SolveReport:
    """Outcome of an overlap maximization.

    ``history`` holds the overlap magnitude after every sweep of the
    selected run (empty for the SVD path).
    """

    lambda_star: EntanglementEigenvalue
    nearest: SeparableState
    residuals: tuple[float, ...]
    iterations_per_restart: tuple[int, ...]
    converged: bool
    method: str
    history: tuple[float, ...] = field(default=(), repr=False)

    @property
    def value(self) -> float:
        return self.lambda_star.value


@lru_cache(maxsize=None)
def _contraction_subscripts(n: int, k: int) -> str:
    idx = _LETTERS[:n]
    others = ",".join(idx[j] for j in range(n) if j != k)
    return f"{idx},{others}->{idx[k]}"


def _contract(tensor: np.ndarray, factors, k: int, conj=None) -> np.ndarray:
    n = tensor.ndim
    if conj is None:
        conj = [np.conj(f) for f in factors]
    return np.einsum(
        _contraction_subscripts(n, k), tensor, *[conj[j] for j in range(n) if j != k]
    )


def _norm(w: np.ndarray) -> float:
    return math.sqrt(np.vdot(w, w).real)


def partial_contraction(t: StateTensor, s: SeparableState, k: int) -> np.ndarray:
    """Contract ``|Psi>`` with ``<phi^(j)|`` on every mode except ``k``.

    Returns the ket vector ``w`` of length ``d_k`` with
    ``w[i] = sum conj(u1[i1]) ... psi[..i..] ... conj(un[in])`` (``k`` is a
    0-based mode index).  Then ``<Psi|phi> = vdot(w, s.factors[k])`` and
    the Wirtinger gradient of ``|<Psi|phi>|**2`` with respect to
    ``conj(u^(k))`` equals ``<Psi|phi> * w``.
    """
    check_match(t, s)
    if not 0 <= k < t.n:
        raise HartreeError(f"mode index {k} out of range for {t.n} modes")
    return _contract(t.tensor, s.factors, k)


def _residuals(tensor: np.ndarray, factors) -> tuple[float, ...]:
    conj = [np.conj(f) for f in factors]
    w_last = _contract(tensor, factors, tensor.ndim - 1, conj)
    # lambda = <phi|Psi>, the coefficient appearing in the ket-form condition
    lam = np.vdot(factors[-1], w_last)
    return tuple(
        _norm(_contract(tensor, factors, k, conj) - lam * factors[k])
        for k in range(tensor.ndim)
    )


def _sweeps(tensor, factors, cfg: SolverConfig, rng):
    """Run alternating sweeps in place; returns (history, sweeps)."""
    n = tensor.ndim
    conj = [np.conj(f) for f in factors]
    history = []
    recoveries = 0
    prev = -np.inf
    for it in range(cfg.max_iters):
        for k in range(n):
            w = _contract(tensor, factors, k, conj)
            norm = _norm(w)
            while norm <= _ZERO:
                recoveries += 1
                if recoveries > cfg.restarts:
                    raise ConvergenceError(
                        f"partial contraction vanished {recoveries} times"
                    )
                j = (k + 1) % n
                factors[j] = _unit_vector(rng, factors[j].size)
                conj[j] = np.conj(factors[j])
                w = _contract(tensor, factors, k, conj)
                norm = _norm(w)
            factors[k] = w / norm
            conj[k] = np.conj(factors[k])
        history.append(norm)
        if norm - prev < cfg.tol and max(_residuals(tensor, factors)) <= cfg.residual_tol:
            break
        prev = norm
    return history, it + 1


def power_iterate(t: StateTensor, init: SeparableState, cfg: SolverConfig) -> SolveReport:
    """Alternating power sweeps from ``init``.

    Modes are updated in ascending order.  Each update sets the factor to
    the normalized partial contraction, which also makes the overlap real
    and non-negative, so the overlap magnitude never decreases.  Iteration
    stops once a sweep gains less than ``cfg.tol`` and every stationarity
    residual is within ``cfg.residual_tol``, or after ``cfg.max_iters``.  A vanishing
    contraction triggers a random re-draw of the next factor (at most
    ``cfg.restarts`` times).
    """
    check_match(t, init)
    tensor = t.tensor
    factors = list(init.factors)
    rng = np.random.default_rng(cfg.seed)
    if frobenius_norm(t) == 0:
        raise HartreeError("zero state has no nearest product state")
    history, sweeps = _sweeps(tensor, factors, cfg, rng)
    nearest = SeparableState(factors)
    residuals = _residuals(tensor, factors)
    return SolveReport(
        lambda_star=EntanglementEigenvalue(abs(overlap(t, nearest))),
        nearest=nearest,
        residuals=residuals,
        iterations_per_restart=(sweeps,),
        converged=max(residuals) <= cfg.residual_tol,
        method="power",
        history=tuple(history),
    )


def unfolding_init(t: StateTensor) -> SeparableState:
    """Leading left singular vector of every mode unfolding."""
    tensor = t.tensor
    factors = []
    for k in range(t.n):
        unfolded = np.moveaxis(tensor, k, 0).reshape(tensor.shape[k], -1)
        u, _, _ = np.linalg.svd(unfolded, full_matrices=False)
        factors.append(u[:, 0])
    return SeparableState(factors)


def svd_bipartite(t: StateTensor) -> SolveReport:
    """Exact two-mode solution: the largest singular value.

    With ``M = U S V^H`` the amplitude matrix, the product state
    ``U[:, 0] (x) Vh[0, :]`` has overlap ``S[0]`` (real).
    """
    if t.n != 2:
        raise ShapeError(f"svd path needs two modes, got {t.n}")
    u, s, vh = np.linalg.svd(t.tensor)
    if s[0] == 0:
        raise HartreeError("zero state has no nearest product state")
    nearest = SeparableState([u[:, 0], vh[0, :]])
    residuals = _residuals(t.tensor, list(nearest.factors))
    return SolveReport(
        lambda_star=EntanglementEigenvalue(float(s[0])),
        nearest=nearest,
        residuals=residuals,
        iterations_per_restart=(),
        converged=True,
        method="svd",
    )


def _best(reports):
    # max value; ties go to the lowest restart index
    best_i = 0
    for i, r in enumerate(reports):
        if r.value > reports[best_i].value:
            best_i = i
    return reports[best_i]


def multi_restart(t: StateTensor, cfg: SolverConfig, extra_inits=()) -> SolveReport:
    """Best of power sweeps from ``cfg.restarts`` random starts plus ``extra_inits``.

    Restart ``i`` is seeded with ``cfg.seed + i``; the extra starts follow
    with the next indices.
    """
    inits = [random_separable(t.dims, cfg.seed + i) for i in range(cfg.restarts)]
    inits.extend(extra_inits)
    reports = [
        power_iterate(t, init, replace(cfg, seed=cfg.seed + i))
        for i, init in enumerate(inits)
    ]
    best = _best(reports)
    return replace(
        best,
        iterations_per_restart=tuple(r.iterations_per_restart[0] for r in reports),
    )


def entanglement_eigenvalue(
    t: StateTensor, cfg: SolverConfig | None = None, method: str = "auto"
) -> SolveReport:
    """Maximal overlap of ``t`` with any product state.

    Parameters
    ----------
    t : StateTensor
        Usually normalized; for other inputs the result is the overlap norm
        ``g(t)``, which scales linearly with ``t``.
    cfg : SolverConfig, optional
    method : {"auto", "power", "svd", "brute"}
        ``auto`` uses the SVD for two modes and multi-restart power sweeps
        (random starts plus an unfolding start) otherwise.
    """
    cfg = cfg or SolverConfig()
    if method == "auto":
        method = "svd" if t.n == 2 else "power"
    if method == "svd":
        return svd_bipartite(t)
    if method == "power":
        return multi_restart(t, cfg, extra_inits=[unfolding_init(t)])
    if method == "brute":
        return brute_force_solve(t, seed=cfg.seed)
    raise HartreeError(f"unknown method {method!r}")


def geometric_measure(t: StateTensor, cfg: SolverConfig | None = None, method: str = "auto") -> float:
    """Distance ``sqrt(2 - 2 lambda*)`` from ``t`` to the nearest product state."""
    lam = entanglement_eigenvalue(t, cfg, method).value
    return float(np.sqrt(max(0.0, 2.0 - 2.0 * lam)))


def _batched_overlaps(tensor: np.ndarray, batch) -> np.ndarray:
    out = np.conj(tensor)[None, ...]
    for f in batch:
        # contract the leading physical mode against the batch of factors
        out = np.einsum("si...,si->s...", out, f)
    return out


def brute_force_solve(
    t: StateTensor,
    samples: int = 10_000,
    refine_iters: int = 2000,
    seed: int = 0,
    keep: int = 8,
) -> SolveReport:
    """Random product-state sampling followed by fixed-count refinement.

    Only meant as a test oracle.  Samples ``samples`` product states,
    keeps the ``keep`` best and refines each with exactly
    ``refine_iters`` plain alternating updates (no stopping rule).
    """
    if t.dims.size > BRUTE_FORCE_MAX_SIZE:
        raise GuardError(
            f"brute force limited to {BRUTE_FORCE_MAX_SIZE} amplitudes, got {t.dims.size}"
        )
    rng = np.random.default_rng(seed)
    batch = []
    for d in t.dims:
        z = rng.standard_normal((samples, d)) + 1j * rng.standard_normal((samples, d))
        batch.append(z / np.linalg.norm(z, axis=1, keepdims=True))
    values = np.abs(_batched_overlaps(t.tensor, batch))
    order = np.argsort(-values, kind="stable")[:keep]

    tensor = t.tensor
    best_val, best_factors = -1.0, None
    for idx in order:
        factors = [b[idx] for b in batch]
        for _ in range(refine_iters):
            for k in range(t.n):
                w = _contract(tensor, factors, k)
                norm = np.linalg.norm(w)
                if norm <= _ZERO:
                    break
                factors[k] = w / norm
        val = abs(np.einsum(_overlap_subscripts(t.n), np.conj(tensor), *factors))
        if val > best_val:
            best_val, best_factors = float(val), factors
    nearest = SeparableState(best_factors)
    residuals = _residuals(tensor, best_factors)
    return SolveReport(
        lambda_star=EntanglementEigenvalue(best_val),
        nearest=nearest,
        residuals=residuals,
        iterations_per_restart=(refine_iters,) * len(order),
        converged=max(residuals) <= SolverConfig.residual_tol,
        method="brute",
    )


def brute_force_eigenvalue(
    t: StateTensor, samples: int = 10_000, refine_iters: int = 2000, seed: int = 0
) -> EntanglementEigenvalue:
    """Oracle estimate of the maximal overlap; see :func:`brute_force_solve`."""
    return brute_force_solve(t, samples, refine_iters, seed).lambda_star
