"""Lower bounds on the minimum Hartree value and per-state certificates.

For a unit state the squared Frobenius norm splits over matrix slices
(all indices fixed except the two largest modes).  Each slice satisfies
``||slice||_F**2 <= d' * sigma(slice)**2`` with ``d'`` the smaller matrix
dimension, and every slice spectral norm is itself an overlap with a
product state, so ``sigma(slice) <= lambda*``.  Chaining gives
``1 <= (prod(dims) / max(dims)) * lambda***2``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace

import numpy as np

from hartree.eigensolver import SolverConfig, entanglement_eigenvalue
from hartree.state import (
    DimProfile,
    GuardError,
    HartreeError,
    StateTensor,
    as_dims,
    frobenius_norm,
)

CHAIN_TOL = 1e-8
NORM_SUITE_MAX_SIZE = 4096


@dataclass(frozen=True)
class SpaceBound:
    """Lower bound on the minimum Hartree value of a space.

    ``exact`` is only set for two modes, where the bound is attained.
    """

    dims: DimProfile
    lower: float
    exact: float | None = None

    @property
    def distance_ceiling(self) -> float:
        """Largest possible distance of a unit state from the product states."""
        return math.sqrt(max(0.0, 2.0 - 2.0 * self.lower))


def space_bound(dims) -> SpaceBound:
    """``1/sqrt(d_1 ... d_{n-1})`` with the largest dimension left out."""
    dims = as_dims(dims)
    lower = 1.0 / math.sqrt(dims.reduced_size)
    exact = 1.0 / math.sqrt(min(dims.dims)) if dims.n == 2 else None
    return SpaceBound(dims=dims, lower=lower, exact=exact)


@dataclass(frozen=True)
class BoundCertificate:
    """Evaluated slice inequality chain for one state.

    ``slice_norms`` maps a multi-index over ``slice_modes`` (original mode
    numbers, 0-based) to the largest singular value of that slice, and
    ``slice_frobenius`` to its Frobenius norm.  ``links`` records each
    inequality of the chain; ``margins`` the amount by which it holds
    (negative means violated).  ``slack`` is
    ``(prod(dims)/max(dims)) * lambda***2 - 1``.
    """

    dims: DimProfile
    frobenius_sq: float
    slice_modes: tuple[int, ...]
    matrix_modes: tuple[int, int]
    slice_norms: dict[tuple[int, ...], float]
    slice_frobenius: dict[tuple[int, ...], float]
    lambda_star: float
    chain_holds: bool
    slack: float
    links: dict[str, bool]
    margins: dict[str, float]


def _slice_order(dims: DimProfile) -> list[int]:
    # ascending dimension, stable in mode index; last two become the matrix
    return sorted(range(dims.n), key=lambda k: (dims.dims[k], k))


def _slices(t: StateTensor):
    order = _slice_order(t.dims)
    arr = np.transpose(t.hypermatrix, order)
    *sliced, da, db = arr.shape
    mats = arr.reshape(-1, da, db)
    spectral = np.linalg.svd(mats, compute_uv=False)[:, 0]
    frob = np.linalg.norm(mats, axis=(1, 2))
    keys = list(itertools.product(*[range(d) for d in sliced]))
    return order, keys, spectral, frob, min(da, db)


def _require_multimode(t: StateTensor) -> None:
    if t.n < 3:
        raise HartreeError(
            "slice certificates need at least three modes; "
            "use the exact bipartite value for two modes"
        )


def slice_certificate(
    t: StateTensor,
    cfg: SolverConfig | None = None,
    lambda_star: float | None = None,
) -> BoundCertificate:
    """Evaluate every link of the slice chain for a unit state ``t``.

    ``lambda_star`` may be supplied to skip the solve.
    """
    _require_multimode(t)
    if lambda_star is None:
        lambda_star = entanglement_eigenvalue(t, cfg).value
    order, keys, spectral, frob, d_small = _slices(t)
    frob_sq = frobenius_norm(t) ** 2
    sum_frob_sq = float(np.sum(frob**2))
    sum_spec_sq = float(np.sum(spectral**2))
    reduced = t.dims.reduced_size
    lam_sq = lambda_star**2

    margins = {
        "unit_norm": -abs(frob_sq - 1.0),
        "slice_partition": -abs(sum_frob_sq - frob_sq),
        "slice_rank": float(np.min(d_small * spectral**2 - frob**2)),
        "slice_dominance": float(lambda_star - np.max(spectral)),
        "sum_of_slices": d_small * sum_spec_sq - frob_sq,
        "slices_to_lambda": reduced * lam_sq - d_small * sum_spec_sq,
        "chain_total": reduced * lam_sq - 1.0,
    }
    links = {name: m >= -CHAIN_TOL for name, m in margins.items()}
    return BoundCertificate(
        dims=t.dims,
        frobenius_sq=frob_sq,
        slice_modes=tuple(order[:-2]),
        matrix_modes=(order[-2], order[-1]),
        slice_norms={k: float(v) for k, v in zip(keys, spectral)},
        slice_frobenius={k: float(v) for k, v in zip(keys, frob)},
        lambda_star=float(lambda_star),
        chain_holds=all(links.values()),
        slack=reduced * lam_sq - 1.0,
        links=links,
        margins=margins,
    )


def slice_norm_dominance(
    t: StateTensor,
    cfg: SolverConfig | None = None,
    lambda_star: float | None = None,
) -> bool:
    """True iff no slice spectral norm exceeds ``lambda*`` (plus tolerance)."""
    _require_multimode(t)
    if lambda_star is None:
        lambda_star = entanglement_eigenvalue(t, cfg).value
    _, _, spectral, _, _ = _slices(t)
    return bool(np.max(spectral) <= lambda_star + CHAIN_TOL)


def overlap_norm(z: StateTensor, cfg: SolverConfig | None = None) -> float:
    """``g(z) = max |<z|phi>|`` over product states; zero for the zero vector."""
    if frobenius_norm(z) == 0:
        return 0.0
    return entanglement_eigenvalue(z, cfg).value


@dataclass(frozen=True)
class NormAxiomReport:
    """Confirmed violations of the norm axioms for ``g``.

    ``candidates`` counts trials that failed with the base solver and were
    re-solved with ten times the restarts; only failures that survive the
    re-solve are counted in ``violations``.
    """

    dims: DimProfile
    trials: int
    violations: dict[str, int]
    worst: float
    candidates: int

    @property
    def total(self) -> int:
        return sum(self.violations.values())


def _axiom_gaps(z, w, c, cfg):
    gz = overlap_norm(z, cfg)
    gw = overlap_norm(w, cfg)
    gcz = overlap_norm(z.scaled(c), cfg)
    gzw = overlap_norm(StateTensor(z.dims, z.amplitudes + w.amplitudes), cfg)
    scale = max(1.0, gz)
    return {
        # positive gap means the axiom is violated by that amount
        "positivity": 0.0 if gz > 0 else 1.0,
        "homogeneity": abs(gcz - abs(c) * gz) / (abs(c) * scale),
        "triangle": gzw - gz - gw,
    }


def norm_axiom_suite(
    dims, trials: int = 100, seed: int = 0, cfg: SolverConfig | None = None
) -> NormAxiomReport:
    """Empirically check positivity, homogeneity and the triangle inequality.

    Each trial draws unnormalized Gaussian vectors ``z, w`` with random
    norms and a random complex scalar ``c``.
    """
    dims = as_dims(dims)
    if dims.size > NORM_SUITE_MAX_SIZE:
        raise GuardError(
            f"norm suite limited to {NORM_SUITE_MAX_SIZE} amplitudes, got {dims.size}"
        )
    cfg = cfg or SolverConfig()
    rng = np.random.default_rng(seed)
    violations = {"positivity": 0, "homogeneity": 0, "triangle": 0}
    worst = 0.0
    candidates = 0
    for trial in range(trials):
        z, w = (
            StateTensor(dims, rng.uniform(0.1, 10.0)
                        * (rng.standard_normal(dims.size) + 1j * rng.standard_normal(dims.size)))
            for _ in range(2)
        )
        c = complex(rng.uniform(0.1, 10.0) * np.exp(2j * np.pi * rng.uniform()))
        trial_cfg = replace(cfg, seed=cfg.seed + 1000 * trial)
        gaps = _axiom_gaps(z, w, c, trial_cfg)
        if any(g > CHAIN_TOL for g in gaps.values()):
            candidates += 1
            strong = replace(trial_cfg, restarts=10 * cfg.restarts, seed=trial_cfg.seed + 7)
            gaps = _axiom_gaps(z, w, c, strong)
        for name, g in gaps.items():
            if g > CHAIN_TOL:
                violations[name] += 1
                worst = max(worst, g)
    return NormAxiomReport(
        dims=dims, trials=trials, violations=violations, worst=worst, candidates=candidates
    )
