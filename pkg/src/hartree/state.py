"""Dense state tensors, product states and their overlaps.

Amplitudes are stored flat in C order (last mode fastest).  All values are
immutable: the backing arrays are marked read-only at construction.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

UNIT_TOL = 1e-10

_LETTERS = string.ascii_letters


class HartreeError(ValueError):
    """Base class for invalid input to this package."""


class ShapeError(HartreeError):
    """Dimensions of two objects do not agree."""


class GuardError(HartreeError):
    """A problem exceeds a size guard."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DimProfile:
    """Mode dimensions ``(d_1, ..., d_n)`` of a product space, in any order."""

    dims: tuple[int, ...]

    def __init__(self, dims: Sequence[int]):
        dims = tuple(int(d) for d in dims)
        if len(dims) < 2:
            raise HartreeError(f"need at least two modes, got dims={dims}")
        if any(d < 1 for d in dims):
            raise HartreeError(f"mode dimensions must be positive, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return math.prod(self.dims)

    @property
    def reduced_size(self) -> int:
        """Product of all dimensions except one occurrence of the largest."""
        return self.size // max(self.dims)

    def __iter__(self):
        return iter(self.dims)

    def __len__(self) -> int:
        return len(self.dims)


def as_dims(dims) -> DimProfile:
    return dims if isinstance(dims, DimProfile) else DimProfile(dims)


@dataclass(frozen=True, eq=False)
class StateTensor:
    """Ket coefficients of ``|Psi>`` on a product basis.

    Parameters
    ----------
    dims : sequence of int or DimProfile
        Mode dimensions.
    amplitudes : array_like
        Complex amplitudes, either flat (length ``prod(dims)``, last mode
        fastest) or already shaped as ``dims``.
    """

    dims: DimProfile
    amplitudes: np.ndarray

    def __init__(self, dims, amplitudes):
        dims = as_dims(dims)
        amps = np.asarray(amplitudes, dtype=complex)
        if amps.size != dims.size:
            raise ShapeError(
                f"{amps.size} amplitudes given for dims {dims.dims} "
                f"(expected {dims.size})"
            )
        if not np.all(np.isfinite(amps)):
            raise HartreeError("amplitudes must be finite")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", _frozen(amps.reshape(-1)))

    @classmethod
    def from_array(cls, array) -> StateTensor:
        array = np.asarray(array, dtype=complex)
        return cls(array.shape, array)

    @property
    def tensor(self) -> np.ndarray:
        """Read-only view shaped as ``dims``."""
        return self.amplitudes.reshape(self.dims.dims)

    @property
    def hypermatrix(self) -> np.ndarray:
        """Entries ``a[i1..in] = conj(psi[i1..in])`` of the multilinear form."""
        return np.conj(self.tensor)

    @property
    def n(self) -> int:
        return self.dims.n

    def is_normalized(self, tol: float = 1e-10) -> bool:
        return abs(frobenius_norm(self) - 1.0) <= tol

    def scaled(self, c: complex) -> StateTensor:
        return StateTensor(self.dims, c * self.amplitudes)

    def __eq__(self, other):
        if not isinstance(other, StateTensor):
            return NotImplemented
        return self.dims == other.dims and np.array_equal(
            self.amplitudes, other.amplitudes
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class SeparableState:
    """Product state ``|phi^(1)> (x) ... (x) |phi^(n)>`` given by unit factors."""

    factors: tuple[np.ndarray, ...]

    def __init__(self, factors: Sequence, tol: float = UNIT_TOL):
        if len(factors) < 2:
            raise HartreeError("a separable state needs at least two factors")
        fs = []
        for k, f in enumerate(factors):
            f = np.asarray(f, dtype=complex).reshape(-1)
            if f.size < 1:
                raise HartreeError(f"factor {k} is empty")
            norm = np.linalg.norm(f)
            if not np.isfinite(norm) or abs(norm - 1.0) > tol:
                raise HartreeError(f"factor {k} has norm {norm}, expected 1")
            fs.append(_frozen(f))
        object.__setattr__(self, "factors", tuple(fs))

    @classmethod
    def from_vectors(cls, vectors: Sequence) -> SeparableState:
        """Build from arbitrary nonzero vectors, normalizing each."""
        out = []
        for k, v in enumerate(vectors):
            v = np.asarray(v, dtype=complex).reshape(-1)
            norm = np.linalg.norm(v)
            if norm == 0:
                raise HartreeError(f"factor {k} is zero")
            out.append(v / norm)
        return cls(out)

    @property
    def dims(self) -> DimProfile:
        return DimProfile([f.size for f in self.factors])

    @property
    def n(self) -> int:
        return len(self.factors)

    def __eq__(self, other):
        if not isinstance(other, SeparableState):
            return NotImplemented
        return len(self.factors) == len(other.factors) and all(
            np.array_equal(a, b) for a, b in zip(self.factors, other.factors)
        )

    __hash__ = None


@dataclass(frozen=True, order=True)
class EntanglementEigenvalue:
    """Maximal overlap ``max |<z|phi>|`` over product states ``phi``.

    For a unit state this is the entanglement eigenvalue in ``(0, 1]``;
    for an unnormalized input it is the overlap norm of that vector.
    """

    value: float

    def __float__(self) -> float:
        return float(self.value)


def check_match(t: StateTensor, s: SeparableState) -> None:
    if s.dims != t.dims:
        raise ShapeError(
            f"product state dims {s.dims.dims} do not match tensor dims {t.dims.dims}"
        )


@lru_cache(maxsize=None)
def _overlap_subscripts(n: int) -> str:
    idx = _LETTERS[:n]
    return idx + "," + ",".join(idx) + "->"


def frobenius_norm(t: StateTensor) -> float:
    """Euclidean norm of all amplitudes."""
    return float(np.linalg.norm(t.amplitudes))


def normalize(t: StateTensor) -> StateTensor:
    norm = frobenius_norm(t)
    if norm == 0:
        raise HartreeError("cannot normalize zero state")
    return StateTensor(t.dims, t.amplitudes / norm)


def overlap(t: StateTensor, s: SeparableState) -> complex:
    """``<Psi|phi> = sum conj(psi[i1..in]) u1[i1] ... un[in]``."""
    check_match(t, s)
    return complex(
        np.einsum(_overlap_subscripts(t.n), np.conj(t.tensor), *s.factors)
    )


def separable_to_tensor(s: SeparableState) -> StateTensor:
    """Dense amplitudes ``u1[i1] * ... * un[in]`` of a product state."""
    out = s.factors[0]
    for f in s.factors[1:]:
        out = np.multiply.outer(out, f)
    return StateTensor(s.dims, out)


def _complex_gaussian(rng: np.random.Generator, size: int) -> np.ndarray:
    # two independent real normals per amplitude, drawn as (re, im) pairs
    pairs = rng.standard_normal((size, 2))
    return pairs[:, 0] + 1j * pairs[:, 1]


def _unit_vector(rng: np.random.Generator, size: int) -> np.ndarray:
    while True:
        z = _complex_gaussian(rng, size)
        norm = np.linalg.norm(z)
        if norm > 0:
            return z / norm


def random_state(dims, seed: int) -> StateTensor:
    """Unit state drawn uniformly from the sphere of the product space.

    Uses numpy's PCG64 generator (``np.random.default_rng(seed)``); the
    same ``(dims, seed)`` always yields bit-identical amplitudes.
    """
    dims = as_dims(dims)
    rng = np.random.default_rng(seed)
    return StateTensor(dims, _unit_vector(rng, dims.size))


def random_separable(dims, seed: int) -> SeparableState:
    """Product state with each factor independently uniform on its sphere."""
    dims = as_dims(dims)
    rng = np.random.default_rng(seed)
    return SeparableState([_unit_vector(rng, d) for d in dims])


def bell_state() -> StateTensor:
    """``(|00> + |11>)/sqrt(2)``."""
    return StateTensor((2, 2), np.array([1, 0, 0, 1]) / np.sqrt(2))


def ghz_state(n: int = 3, d: int = 2) -> StateTensor:
    """``sum_j |j...j>/sqrt(d)`` on ``n`` modes of dimension ``d``."""
    a = np.zeros((d,) * n, dtype=complex)
    for j in range(d):
        a[(j,) * n] = 1.0
    return normalize(StateTensor.from_array(a))


def w_state(n: int = 3) -> StateTensor:
    """Equal superposition of the ``n`` single-excitation qubit basis states."""
    a = np.zeros((2,) * n, dtype=complex)
    for k in range(n):
        idx = [0] * n
        idx[k] = 1
        a[tuple(idx)] = 1.0
    return normalize(StateTensor.from_array(a))
