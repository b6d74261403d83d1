"""Numerical search for the minimum Hartree value of a product space.

The minimum Hartree value is ``min lambda*(Psi)`` over unit states.  For
two modes it equals ``1/sqrt(min(dims))``.  For three or more modes no
closed form is known; :func:`sigma_search` returns an upper estimate (a
witness state) that is always reported next to the lower bound.

The search is projected subgradient descent on the unit sphere.  At the
active maximizer ``phi`` (from the inner solve) the overlap magnitude
behaves locally like ``Re <Psi|phi>``, so stepping against the
phase-aligned ``phi`` and renormalizing lowers ``lambda*``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from hartree.bounds import space_bound
from hartree.eigensolver import (
    SolverConfig,
    multi_restart,
    power_iterate,
    svd_bipartite,
    unfolding_init,
)
from hartree.state import (
    DimProfile,
    GuardError,
    HartreeError,
    SeparableState,
    StateTensor,
    as_dims,
    random_separable,
    random_state,
    separable_to_tensor,
)

SEARCH_MAX_SIZE = 4096
SCHEDULES = ("harmonic", "constant")


class SearchError(HartreeError):
    """The outer search produced non-finite values."""

    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class OuterConfig:
    """Settings for :func:`sigma_search`.

    ``inner`` drives the cheap warm-started solve at every outer step.
    ``verify`` re-solves each candidate new best before it enters the
    pool of ``pool_size`` best states; ``final`` is the long, high-restart
    solve applied to the pool at the end of every restart, and is what the
    reported value comes from.  Near minimizers the maximal overlap has
    several almost equal local maxima that power sweeps approach slowly,
    hence the large ``final.max_iters``.  With the ``harmonic`` schedule
    the step at outer iteration ``t`` is ``step0 / (1 + t/100)``.
    """

    outer_iters: int = 2000
    step0: float = 0.1
    schedule: str = "harmonic"
    outer_restarts: int = 8
    inner: SolverConfig = SolverConfig(max_iters=50, restarts=1)
    verify: SolverConfig = SolverConfig(max_iters=200, restarts=2, residual_tol=1e-6)
    final: SolverConfig = SolverConfig(max_iters=20000, restarts=8)
    pool_size: int = 3
    seed: int = 0

    def __post_init__(self):
        if min(self.outer_iters, self.outer_restarts, self.pool_size) < 1 or not self.step0 > 0:
            raise HartreeError(
                "outer_iters, outer_restarts, pool_size and step0 must be positive"
            )
        if self.schedule not in SCHEDULES:
            raise HartreeError(f"unknown step schedule {self.schedule!r}")

    def step(self, t: int) -> float:
        if self.schedule == "constant":
            return self.step0
        return self.step0 / (1.0 + t / 100.0)


@dataclass(frozen=True)
class SigmaSearchResult:
    """Best witness state found and its bracket.

    ``best_lambda`` is an upper estimate of the minimum Hartree value and
    ``lower_bound`` a proven lower bound; ``exact`` is only set for two
    modes.  ``trace`` lists ``(outer iteration, inner lambda*)`` of the
    winning restart and ``best_history`` the running best over the pool
    states after the final solve, as ``(outer iteration, lambda*)``.
    """

    dims: DimProfile
    best_state: StateTensor
    best_lambda: float
    lower_bound: float
    gap: float
    trace: list[tuple[int, float]] = field(repr=False)
    best_history: list[tuple[int, float]] = field(repr=False)
    restart_bests: list[float]
    outer_config: OuterConfig
    exact: float | None = None


def _require_bipartite(dims: DimProfile) -> None:
    if dims.n != 2:
        raise HartreeError(f"needs exactly two modes, got {dims.n}")


def diagonal_extremal_state(dims) -> StateTensor:
    """``sum_j |jj> / sqrt(min(dims))``, whose overlap maximum is minimal."""
    dims = as_dims(dims)
    _require_bipartite(dims)
    d = min(dims.dims)
    a = np.zeros(dims.dims, dtype=complex)
    a[np.arange(d), np.arange(d)] = 1.0 / math.sqrt(d)
    return StateTensor(dims, a)


def sigma_exact_bipartite(dims) -> float:
    dims = as_dims(dims)
    _require_bipartite(dims)
    return 1.0 / math.sqrt(min(dims.dims))


def sigma_witness_check(t: StateTensor, cfg: OuterConfig | None = None) -> float:
    """``lambda*(t)`` solved with the final (high-restart) config.

    Any unit state gives an upper bound on the minimum Hartree value of
    its space.
    """
    cfg = cfg or OuterConfig()
    return _verified(t, None, cfg.final)[0]


def _inner(t: StateTensor, warm, cfg: SolverConfig):
    if t.n == 2:
        r = svd_bipartite(t)
        return r.value, r.nearest
    best = None
    inits = [random_separable(t.dims, cfg.seed + i) for i in range(cfg.restarts)]
    if warm is not None:
        inits.insert(0, warm)
    for i, init in enumerate(inits):
        r = power_iterate(t, init, replace(cfg, seed=cfg.seed + i))
        if best is None or r.value > best.value:
            best = r
    return best.value, best.nearest


def _verified(t: StateTensor, warm, cfg: SolverConfig):
    if t.n == 2:
        r = svd_bipartite(t)
        return r.value, r.nearest
    extra = [unfolding_init(t)] + ([warm] if warm is not None else [])
    r = multi_restart(t, cfg, extra_inits=extra)
    return r.value, r.nearest


def _descent_direction(t: StateTensor, nearest: SeparableState) -> np.ndarray:
    phi = separable_to_tensor(nearest).amplitudes
    c = np.vdot(phi, t.amplitudes)  # <phi|Psi>
    phase = c / abs(c) if abs(c) > 0 else 1.0
    return phase * phi


def _search_once(dims: DimProfile, psi: StateTensor, cfg: OuterConfig, restart: int):
    rng = np.random.default_rng([cfg.seed, restart])
    best_val = math.inf
    pool = []  # (verified value, outer iteration, state, nearest)
    trace = []
    warm = None
    amps = psi.amplitudes / np.linalg.norm(psi.amplitudes)
    for it in range(cfg.outer_iters):
        t = StateTensor(dims, amps)
        inner_cfg = replace(cfg.inner, seed=int(rng.integers(2**31)))
        lam, nearest = _inner(t, warm, inner_cfg)
        if not math.isfinite(lam):
            raise SearchError(f"non-finite lambda* at outer iteration {it}", trace)
        trace.append((it, lam))
        if lam < best_val:
            verify_cfg = replace(cfg.verify, seed=int(rng.integers(2**31)))
            lam_v, nearest_v = _verified(t, nearest, verify_cfg)
            if lam_v > lam:
                # inner solve missed the true maximizer; descend against it instead
                lam, nearest = lam_v, nearest_v
            if lam_v < best_val:
                best_val = lam_v
                pool = sorted(pool + [(lam_v, it, t, nearest_v)], key=lambda c: c[:2])
                pool = pool[: cfg.pool_size]
        amps = amps - cfg.step(it) * _descent_direction(t, nearest)
        norm = np.linalg.norm(amps)
        if not (math.isfinite(norm) and norm > 0):
            raise SearchError(f"degenerate iterate at outer iteration {it}", trace)
        amps = amps / norm
        warm = nearest

    final = []
    for _, it, t, nearest in pool:
        final_cfg = replace(cfg.final, seed=int(rng.integers(2**31)))
        final.append((_verified(t, nearest, final_cfg)[0], it, t))
    val, it, state = min(final, key=lambda c: c[:2])
    history = []
    running = math.inf
    for v, i, _ in sorted(final, key=lambda c: c[1]):
        if v < running:
            running = v
            history.append((i, v))
    return val, state, trace, history


def sigma_search(
    dims, cfg: OuterConfig | None = None, initial_states=None
) -> SigmaSearchResult:
    """Minimize ``lambda*`` over unit states by projected subgradient descent.

    Parameters
    ----------
    dims : sequence of int or DimProfile
    cfg : OuterConfig, optional
    initial_states : sequence of StateTensor, optional
        Starting points, one per outer restart.  By default restart ``r``
        starts from ``random_state(dims, cfg.seed + r)``.

    Candidate minimizers are re-solved before they are kept and once more
    with ``cfg.final`` at the end, so ``best_lambda`` is ``lambda*`` of
    ``best_state`` from the strongest solve rather than an under-solved
    inner estimate (which would bias the minimum low).
    """
    dims = as_dims(dims)
    cfg = cfg or OuterConfig()
    if dims.size > SEARCH_MAX_SIZE:
        raise GuardError(f"search limited to {SEARCH_MAX_SIZE} amplitudes, got {dims.size}")
    if initial_states is None:
        initial_states = [random_state(dims, cfg.seed + r) for r in range(cfg.outer_restarts)]
    elif len(initial_states) != cfg.outer_restarts:
        raise HartreeError("need one initial state per outer restart")

    runs = [_search_once(dims, s, cfg, r) for r, s in enumerate(initial_states)]
    winner = min(range(len(runs)), key=lambda r: (runs[r][0], r))
    best_val, best_state, trace, history = runs[winner]
    bound = space_bound(dims)
    return SigmaSearchResult(
        dims=dims,
        best_state=best_state,
        best_lambda=best_val,
        lower_bound=bound.lower,
        gap=best_val - bound.lower,
        trace=trace,
        best_history=history,
        restart_bests=[r[0] for r in runs],
        outer_config=cfg,
        exact=bound.exact,
    )
