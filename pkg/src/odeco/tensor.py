"""Dense symmetric tensor storage, contractions, norms, and rank-one
construction.

A symmetric order-``p`` tensor over R^n is stored as a dense ndarray of
shape ``(n,) * p`` whose entries are *exactly* (bit-for-bit) invariant
under every axis permutation.  Exactness is structural: construction
funnels through :func:`symmetrize` or :func:`rank_one_tensor`, both of
which write each canonical entry once and broadcast it to all permuted
positions, and the elementwise arithmetic defined here preserves bit-level
symmetry.  The contraction kernels rely on this (they always contract the
trailing axis).

Serialization uses ``{"order": p, "dim": n, "data": [n^p floats]}`` with
row-major ``data``; loaders accept asymmetry up to 1e-9 absolute and then
re-symmetrize.
"""

import math
import warnings
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from . import kernels
from .errors import ConvergenceWarning, DataError, ShapeError

__all__ = [
    "SYMMETRY_TOL",
    "SymmetricTensor",
    "EigenPair",
    "SolverConfig",
    "symmetrize",
    "rank_one_tensor",
    "apply_full",
    "apply_partial",
    "inner",
    "frobenius_norm",
    "operator_norm",
]

# Loader tolerance: max absolute deviation from the symmetrized array.
SYMMETRY_TOL = 1e-9

MAX_ORDER = 6


def _canonical_broadcast(arr):
    """Spread each canonical (sorted-index) entry of ``arr`` to all
    permuted positions, making the result bit-exactly symmetric."""
    idx = np.indices(arr.shape)
    return arr[tuple(np.sort(idx, axis=0))]


def _check_cube(arr, what="tensor"):
    if arr.ndim < 2:
        raise ShapeError(f"{what} must have order >= 2, got order {arr.ndim}")
    if arr.ndim > MAX_ORDER:
        raise ShapeError(
            f"{what} order {arr.ndim} exceeds the supported maximum {MAX_ORDER}"
        )
    n = arr.shape[0]
    if any(s != n for s in arr.shape):
        raise ShapeError(f"{what} must be cubical, got shape {arr.shape}")
    if n < 1:
        raise ShapeError(f"{what} dimension must be >= 1")


def _is_exactly_symmetric(arr):
    return all(
        np.array_equal(arr, arr.transpose(perm))
        for perm in permutations(range(arr.ndim))
    )


def symmetrize_array(raw):
    """Average a cubical ndarray over all axis permutations and broadcast
    canonical entries so the result is bit-exactly symmetric.

    An already bit-symmetric input is returned unchanged (as a copy),
    which makes the operation exactly idempotent.
    """
    raw = np.asarray(raw, dtype=np.float64)
    _check_cube(raw)
    if not np.all(np.isfinite(raw)):
        raise DataError("tensor entries must be finite")
    if _is_exactly_symmetric(raw):
        return raw.copy()
    p = raw.ndim
    acc = raw.copy()
    for perm in permutations(range(p)):
        if perm == tuple(range(p)):
            continue
        acc += raw.transpose(perm)
    acc /= math.factorial(p)
    return _canonical_broadcast(acc)


@dataclass(frozen=True, eq=False)
class SymmetricTensor:
    """Immutable dense symmetric tensor.

    Parameters
    ----------
    data : ndarray
        Array of shape ``(n,) * p`` that is already bit-exactly symmetric.
        Arbitrary raw arrays are rejected; route them through
        :func:`symmetrize` instead.
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.float64, order="C")
        _check_cube(arr)
        if not np.all(np.isfinite(arr)):
            raise DataError("tensor entries must be finite")
        if not _is_exactly_symmetric(arr):
            raise DataError(
                "data is not exactly symmetric; construct via symmetrize()"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def order(self):
        return self.data.ndim

    @property
    def dim(self):
        return self.data.shape[0]

    @classmethod
    def zero(cls, dim, order):
        return cls(np.zeros((dim,) * order))

    def _flat(self):
        return self.data.reshape(-1)

    def _binary_check(self, other):
        if not isinstance(other, SymmetricTensor):
            raise TypeError(f"expected SymmetricTensor, got {type(other).__name__}")
        if other.data.shape != self.data.shape:
            raise ShapeError(
                f"shape mismatch: {self.data.shape} vs {other.data.shape}"
            )

    def __add__(self, other):
        self._binary_check(other)
        return SymmetricTensor(self.data + other.data)

    def __sub__(self, other):
        self._binary_check(other)
        return SymmetricTensor(self.data - other.data)

    def __mul__(self, scalar):
        return SymmetricTensor(self.data * float(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return SymmetricTensor(-self.data)

    def to_dict(self):
        return {
            "order": self.order,
            "dim": self.dim,
            "data": [float(v) for v in self._flat()],
        }

    @classmethod
    def from_dict(cls, d):
        """Build from the JSON payload, validating symmetry to
        ``SYMMETRY_TOL`` absolute and re-symmetrizing."""
        try:
            order = int(d["order"])
            dim = int(d["dim"])
            data = d["data"]
        except (KeyError, TypeError, ValueError) as e:
            raise DataError(f"malformed tensor payload: {e}") from e
        if order < 2 or order > MAX_ORDER:
            raise ShapeError(f"order must be in [2, {MAX_ORDER}], got {order}")
        if dim < 1:
            raise ShapeError(f"dim must be >= 1, got {dim}")
        arr = np.asarray(data, dtype=np.float64)
        if arr.ndim != 1 or arr.size != dim**order:
            raise ShapeError(
                f"data length {arr.size} does not match dim**order = {dim**order}"
            )
        raw = arr.reshape((dim,) * order)
        sym = symmetrize_array(raw)
        dev = float(np.max(np.abs(raw - sym))) if raw.size else 0.0
        if dev > SYMMETRY_TOL:
            raise DataError(
                f"tensor asymmetric beyond tolerance: deviation {dev:.3e} > "
                f"{SYMMETRY_TOL:.0e}"
            )
        return cls(sym)


def symmetrize(raw, order, dim):
    """Symmetrize a flat array of length ``dim**order`` into a
    :class:`SymmetricTensor`.

    The output entry at each index tuple is the average of ``raw`` over
    all ``order!`` permutations of that tuple.  Idempotent: feeding back
    the data of a SymmetricTensor returns identical entries.
    """
    arr = np.asarray(raw, dtype=np.float64)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    if arr.size != dim**order:
        raise ShapeError(
            f"raw length {arr.size} does not match dim**order = {dim**order}"
        )
    return SymmetricTensor(symmetrize_array(arr.reshape((dim,) * order)))


def rank_one_tensor(value, vector, order):
    """Build ``value * vector^{tensor order}`` as a SymmetricTensor.

    ``vector`` must be (close to) unit norm; the entry at
    ``(i_1, ..., i_p)`` is ``value * vector[i_1] * ... * vector[i_p]``
    with the product evaluated in canonical index order so the result is
    bit-exactly symmetric.
    """
    v = np.asarray(vector, dtype=np.float64)
    if v.ndim != 1:
        raise ShapeError("vector must be one-dimensional")
    if not np.all(np.isfinite(v)) or not np.isfinite(value):
        raise DataError("rank-one factors must be finite")
    nv = np.linalg.norm(v)
    if abs(nv - 1.0) > 1e-12:
        raise DataError(f"vector norm {nv!r} is not within 1e-12 of 1")
    if order < 2 or order > MAX_ORDER:
        raise ShapeError(f"order must be in [2, {MAX_ORDER}], got {order}")
    out = np.array(float(value))
    for _ in range(order):
        out = np.multiply.outer(out, v)
    return SymmetricTensor(_canonical_broadcast(out))


def _as_vector(x, n):
    v = np.ascontiguousarray(x, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] != n:
        raise ShapeError(f"vector must have shape ({n},), got {np.shape(x)}")
    if not np.all(np.isfinite(v)):
        raise DataError("vector entries must be finite")
    return v


def apply_full(T, x):
    """Full contraction ``T x^{tensor p}``: the degree-p homogeneous
    polynomial value at ``x``."""
    v = _as_vector(x, T.dim)
    return kernels.apply_full(T._flat(), v, T.order)


def apply_partial(T, x):
    """Partial contraction ``T x^{tensor p-1}``, an n-vector equal to
    ``(1/p)`` times the gradient of ``apply_full(T, .)`` at ``x``."""
    v = _as_vector(x, T.dim)
    return kernels.apply_partial(T._flat(), v, T.order)


def inner(A, B):
    """Entrywise inner product of two same-shape symmetric tensors."""
    A._binary_check(B)
    return float(A._flat() @ B._flat())


def frobenius_norm(A):
    """Frobenius norm, ``sqrt(inner(A, A))``."""
    return float(np.linalg.norm(A._flat()))


def operator_norm(T, cfg=None):
    """Estimate the operator norm ``max |T x^{tensor p}|`` over unit x.

    Runs the multi-restart rank-one solver and reports the best
    stationary value found: a certified lower bound on the true norm,
    suitable as the perturbation magnitude of noise tensors.  Emits a
    ConvergenceWarning when the winning restart did not reach the
    stationarity tolerance.
    """
    from .rank_one import best_rank_one

    pair, cert = best_rank_one(T, cfg)
    if not cert.converged and not cert.degenerate:
        warnings.warn(
            f"operator_norm estimate did not converge (kkt residual "
            f"{cert.kkt_residual:.3e})",
            ConvergenceWarning,
            stacklevel=2,
        )
    return abs(pair.value)


@dataclass(frozen=True, eq=False)
class EigenPair:
    """An eigenvalue with its unit eigenvector."""

    value: float
    vector: np.ndarray

    def __post_init__(self):
        val = float(self.value)
        if not np.isfinite(val):
            raise DataError("eigenvalue must be finite")
        vec = np.array(self.vector, dtype=np.float64)
        if vec.ndim != 1:
            raise ShapeError("eigenvector must be one-dimensional")
        if not np.all(np.isfinite(vec)):
            raise DataError("eigenvector entries must be finite")
        nv = np.linalg.norm(vec)
        if abs(nv - 1.0) > 1e-12:
            raise DataError(f"eigenvector norm {nv!r} is not within 1e-12 of 1")
        vec.setflags(write=False)
        object.__setattr__(self, "value", val)
        object.__setattr__(self, "vector", vec)

    @property
    def dim(self):
        return self.vector.shape[0]

    def to_dict(self):
        return {"value": self.value, "vector": [float(v) for v in self.vector]}

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(float(d["value"]), np.asarray(d["vector"], dtype=np.float64))
        except (KeyError, TypeError) as e:
            raise DataError(f"malformed eigenpair payload: {e}") from e


@dataclass(frozen=True)
class SolverConfig:
    """Options for the multi-restart rank-one solvers.

    ``tol`` bounds the stationarity (KKT) residual relative to the
    objective scale: a solve converged when the residual is at most
    ``tol * (1 + |value|)``.  ``shift = 0`` selects the adaptive shift
    ``1 + p * ||T||_F``, decayed on accepted steps and raised on rejected
    ones; a positive value fixes the starting shift instead.
    """

    restarts: int = 50
    max_iters: int = 500
    tol: float = 1e-8
    seed: int = 0
    shift: float = 0.0

    def __post_init__(self):
        if int(self.restarts) < 1:
            raise ValueError("restarts must be >= 1")
        if int(self.max_iters) < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.shift < 0 or not np.isfinite(self.shift):
            raise ValueError("shift must be a nonnegative real")
