"""Greedy decomposition drivers and truth alignment.

Three drivers, one step shape: n successive rank-one solves.

* ``sroa_rd`` deflates the residual: each step solves on the running
  remainder and subtracts its best rank-one term.
* ``sroa_cd`` keeps the original tensor and adds a slab constraint
  ``|<v, v_hat_i>| <= theta`` for every eigenvector already found.
* ``ada_sroa_cd`` is the constrained variant with an adaptive theta:
  starting at 1/2, a step's result is rejected while its overlap with any
  earlier eigenvector reaches ``min(|value_k| / (1.35 |value_i|), theta)``,
  shrinking theta by 0.96 and re-solving each time.  theta carries across
  steps and is recorded per step.

``match_components`` aligns an estimated decomposition with ground truth
by permutation and per-component sign, the correspondence under which the
perturbation bounds are stated.
"""

from dataclasses import dataclass, replace
from itertools import permutations

import numpy as np

from .errors import (
    AdaptiveSearchError,
    DataError,
    DecompositionError,
    OdecoError,
    ShapeError,
)
from .rank_one import (
    ConstraintSet,
    StationarityCertificate,
    best_rank_one,
    constrained_rank_one,
    derive_seed,
)
from .tensor import (
    EigenPair,
    SolverConfig,
    SymmetricTensor,
    frobenius_norm,
    rank_one_tensor,
)

__all__ = [
    "Decomposition",
    "MatchReport",
    "sroa_rd",
    "sroa_cd",
    "ada_sroa_cd",
    "match_components",
    "match_components_exhaustive",
    "residual_metric",
]

ADA_THETA_START = 0.5
ADA_SHRINK = 0.96
ADA_RATIO = 1.35
ADA_THETA_FLOOR = 1e-4


@dataclass(frozen=True, eq=False)
class Decomposition:
    """An ordered list of eigenpairs with per-step diagnostics.

    ``thetas`` is present for the adaptive method only.  ``residual`` is
    ``||input - sum_i value_i vector_i^{tensor p}||_F``; step_residuals[k]
    is the same quantity after the first k+1 terms.  ``certificates`` is
    None for decompositions loaded from JSON (solver diagnostics are not
    serialized).
    """

    pairs: tuple
    order: int
    method: str = "unknown"
    thetas: tuple = None
    certificates: tuple = None
    residual: float = float("nan")
    step_residuals: tuple = ()

    def __post_init__(self):
        pairs = tuple(self.pairs)
        if not pairs:
            raise DataError("decomposition must contain at least one pair")
        if not all(isinstance(p, EigenPair) for p in pairs):
            raise TypeError("pairs must be EigenPair instances")
        dim = pairs[0].dim
        if any(p.dim != dim for p in pairs):
            raise ShapeError("all eigenvectors must share one dimension")
        if len(pairs) != dim:
            raise ShapeError(
                f"expected {dim} pairs for dimension {dim}, got {len(pairs)}"
            )
        if int(self.order) < 2:
            raise ShapeError("order must be >= 2")
        if self.thetas is not None:
            thetas = tuple(float(t) for t in self.thetas)
            if len(thetas) != len(pairs):
                raise ShapeError("thetas must have one entry per pair")
            object.__setattr__(self, "thetas", thetas)
        object.__setattr__(self, "pairs", pairs)

    @property
    def dim(self):
        return self.pairs[0].dim

    @property
    def values(self):
        return np.array([p.value for p in self.pairs])

    @property
    def vectors(self):
        """Eigenvectors as rows of an (n, n) array."""
        return np.stack([p.vector for p in self.pairs])

    def reconstruction(self):
        """Sum of the rank-one terms as a SymmetricTensor."""
        out = SymmetricTensor.zero(self.dim, self.order)
        for p in self.pairs:
            out = out + rank_one_tensor(p.value, p.vector, self.order)
        return out

    def to_dict(self):
        return {
            "method": self.method,
            "order": self.order,
            "dim": self.dim,
            "pairs": [p.to_dict() for p in self.pairs],
            "thetas": None if self.thetas is None else list(self.thetas),
            "residual": float(self.residual),
            "step_residuals": [float(r) for r in self.step_residuals],
        }

    @classmethod
    def from_dict(cls, d):
        try:
            pairs = tuple(EigenPair.from_dict(item) for item in d["pairs"])
        except (KeyError, TypeError) as e:
            raise DataError(f"malformed decomposition payload: {e}") from e
        thetas = d.get("thetas")
        return cls(
            pairs=pairs,
            order=int(d.get("order", 3)),
            method=str(d.get("method", "unknown")),
            thetas=None if thetas is None else tuple(thetas),
            certificates=None,
            residual=float(d.get("residual", float("nan"))),
            step_residuals=tuple(d.get("step_residuals", ())),
        )


def _step_cfg(cfg, *keys):
    return replace(cfg, seed=derive_seed(cfg.seed, *keys))


def sroa_rd(T, cfg=None):
    """Successive rank-one approximation with residual deflation.

    Runs exactly n steps: the best rank-one term of the running remainder
    is recorded and subtracted.  Errors from a step's solve are re-raised
    annotated with the step index.
    """
    if not isinstance(T, SymmetricTensor):
        raise TypeError("T must be a SymmetricTensor")
    cfg = cfg if cfg is not None else SolverConfig()
    current = T
    pairs, certs, step_res = [], [], []
    for k in range(T.dim):
        try:
            pair, cert = best_rank_one(current, _step_cfg(cfg, k))
        except OdecoError as e:
            raise DecompositionError(k, str(e)) from e
        pairs.append(pair)
        certs.append(cert)
        current = current - rank_one_tensor(pair.value, pair.vector, T.order)
        step_res.append(frobenius_norm(current))
    return Decomposition(
        pairs=tuple(pairs),
        order=T.order,
        method="rd",
        thetas=None,
        certificates=tuple(certs),
        residual=step_res[-1],
        step_residuals=tuple(step_res),
    )


def sroa_cd(T, theta, cfg=None):
    """Successive rank-one approximation with constrained deflation.

    Every step solves on the *original* tensor with slabs
    ``|<v, v_hat_i>| <= theta`` around the eigenvectors already found
    (vacuous at the first step).  ``theta = 0`` imposes exact
    orthogonality, solved in the anchors' orthogonal complement.
    """
    if not isinstance(T, SymmetricTensor):
        raise TypeError("T must be a SymmetricTensor")
    theta = float(theta)
    if not 0.0 <= theta <= 1.0:
        raise DataError(f"theta must lie in [0, 1], got {theta!r}")
    cfg = cfg if cfg is not None else SolverConfig()
    pairs, certs, step_res = [], [], []
    recon = SymmetricTensor.zero(T.dim, T.order)
    for k in range(T.dim):
        cs = ConstraintSet(tuple(p.vector for p in pairs), theta)
        try:
            pair, cert = constrained_rank_one(T, cs, _step_cfg(cfg, k))
        except OdecoError as e:
            raise DecompositionError(k, str(e)) from e
        pairs.append(pair)
        certs.append(cert)
        recon = recon + rank_one_tensor(pair.value, pair.vector, T.order)
        step_res.append(frobenius_norm(T - recon))
    return Decomposition(
        pairs=tuple(pairs),
        order=T.order,
        method="cd",
        thetas=None,
        certificates=tuple(certs),
        residual=step_res[-1],
        step_residuals=tuple(step_res),
    )


def _ada_accepts(candidate, accepted, theta):
    for prev in accepted:
        if prev.value == 0.0:
            bound = theta
        else:
            bound = min(abs(candidate.value) / (ADA_RATIO * abs(prev.value)), theta)
        if abs(float(candidate.vector @ prev.vector)) >= bound:
            return False
    return True


def ada_sroa_cd(T, cfg=None, theta_floor=ADA_THETA_FLOOR):
    """Constrained deflation with the adaptive overlap threshold.

    theta starts at 1/2 and persists across steps.  After each solve, if
    any earlier eigenvector overlaps the new one by at least
    ``min(|value_k| / (1.35 |value_i|), theta)``, theta shrinks by 0.96
    and the step re-solves (with a reseeded restart stream).  The accepted
    theta is recorded per step.  Shrinking past ``theta_floor`` raises
    AdaptiveSearchError.
    """
    if not isinstance(T, SymmetricTensor):
        raise TypeError("T must be a SymmetricTensor")
    cfg = cfg if cfg is not None else SolverConfig()
    theta = ADA_THETA_START
    pairs, certs, thetas, step_res = [], [], [], []
    recon = SymmetricTensor.zero(T.dim, T.order)
    for k in range(T.dim):
        attempt = 0
        while True:
            cs = ConstraintSet(tuple(p.vector for p in pairs), theta)
            try:
                pair, cert = constrained_rank_one(T, cs, _step_cfg(cfg, k, attempt))
            except OdecoError as e:
                raise DecompositionError(k, str(e)) from e
            if _ada_accepts(pair, pairs, theta):
                break
            theta *= ADA_SHRINK
            attempt += 1
            if theta < theta_floor:
                raise AdaptiveSearchError(k, theta, theta_floor)
        pairs.append(pair)
        certs.append(cert)
        thetas.append(theta)
        recon = recon + rank_one_tensor(pair.value, pair.vector, T.order)
        step_res.append(frobenius_norm(T - recon))
    return Decomposition(
        pairs=tuple(pairs),
        order=T.order,
        method="ada",
        thetas=tuple(thetas),
        certificates=tuple(certs),
        residual=step_res[-1],
        step_residuals=tuple(step_res),
    )


@dataclass(frozen=True, eq=False)
class MatchReport:
    """Permutation/sign alignment of an estimate against ground truth.

    ``permutation[j]`` is the truth index matched to estimate j; per j,
    ``value_errors[j] = min |truth_value +- est_value|`` and
    ``vector_errors[j] = min ||truth_vector -+ est_vector||`` (each
    minimized over sign independently, as the bounds are stated).
    """

    permutation: tuple
    signs: tuple
    value_errors: tuple
    vector_errors: tuple
    strategy: str = "greedy"

    def __post_init__(self):
        perm = tuple(int(i) for i in self.permutation)
        if sorted(perm) != list(range(len(perm))):
            raise DataError("permutation must be a bijection on [n]")
        if any(s not in (-1, 1) for s in self.signs):
            raise DataError("signs must be +-1")
        if any(e < 0 for e in self.value_errors):
            raise DataError("value errors must be nonnegative")
        if any(not 0 <= e <= 2.0 + 1e-12 for e in self.vector_errors):
            raise DataError("vector errors must lie in [0, 2]")
        object.__setattr__(self, "permutation", perm)
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        object.__setattr__(
            self, "value_errors", tuple(float(e) for e in self.value_errors)
        )
        object.__setattr__(
            self, "vector_errors", tuple(float(e) for e in self.vector_errors)
        )

    @property
    def max_value_error(self):
        return max(self.value_errors)

    @property
    def max_vector_error(self):
        return max(self.vector_errors)

    def to_dict(self):
        return {
            "permutation": list(self.permutation),
            "signs": list(self.signs),
            "value_errors": list(self.value_errors),
            "vector_errors": list(self.vector_errors),
            "strategy": self.strategy,
        }

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(
                permutation=tuple(d["permutation"]),
                signs=tuple(d["signs"]),
                value_errors=tuple(d["value_errors"]),
                vector_errors=tuple(d["vector_errors"]),
                strategy=str(d.get("strategy", "greedy")),
            )
        except (KeyError, TypeError) as e:
            raise DataError(f"malformed match report payload: {e}") from e


def _as_pairs(x):
    if isinstance(x, Decomposition):
        return x.pairs
    pairs = tuple(x)
    if not all(isinstance(p, EigenPair) for p in pairs):
        raise TypeError("expected EigenPairs or a Decomposition")
    return pairs


def _pair_errors(truth_pair, est_pair):
    v, w = truth_pair.vector, est_pair.vector
    d_minus = float(np.linalg.norm(v - w))
    d_plus = float(np.linalg.norm(v + w))
    sign = 1 if d_minus <= d_plus else -1
    vec_err = min(d_minus, d_plus)
    val_err = min(
        abs(truth_pair.value - est_pair.value),
        abs(truth_pair.value + est_pair.value),
    )
    return val_err, vec_err, sign


def _build_report(truth, est, perm, strategy):
    signs, val_errs, vec_errs = [], [], []
    for j, i in enumerate(perm):
        val_err, vec_err, sign = _pair_errors(truth[i], est[j])
        signs.append(sign)
        val_errs.append(val_err)
        vec_errs.append(vec_err)
    return MatchReport(
        permutation=tuple(perm),
        signs=tuple(signs),
        value_errors=tuple(val_errs),
        vector_errors=tuple(vec_errs),
        strategy=strategy,
    )


def match_components(truth, est):
    """Greedy alignment on descending overlap magnitudes.

    Assigns truth/estimate pairs in decreasing order of
    ``|<truth_i, est_j>|`` (ties broken by index order, deterministically),
    then picks each sign to minimize the vector error.
    """
    truth_pairs, est_pairs = _as_pairs(truth), _as_pairs(est)
    if len(truth_pairs) != len(est_pairs):
        raise ShapeError(
            f"length mismatch: {len(truth_pairs)} truth vs {len(est_pairs)} estimates"
        )
    if truth_pairs[0].dim != est_pairs[0].dim:
        raise ShapeError("truth and estimate dimensions differ")
    n = len(truth_pairs)
    V = np.stack([p.vector for p in truth_pairs])
    W = np.stack([p.vector for p in est_pairs])
    M = np.abs(V @ W.T)
    perm = [-1] * n
    used_truth = [False] * n
    for flat in np.argsort(-M, axis=None, kind="stable"):
        i, j = divmod(int(flat), n)
        if used_truth[i] or perm[j] != -1:
            continue
        perm[j] = i
        used_truth[i] = True
    return _build_report(truth_pairs, est_pairs, perm, "greedy")


def match_components_exhaustive(truth, est):
    """Minimize the maximum vector error over all n! permutations.

    Ties keep the lexicographically first permutation.  Guarded to n <= 8.
    """
    truth_pairs, est_pairs = _as_pairs(truth), _as_pairs(est)
    if len(truth_pairs) != len(est_pairs):
        raise ShapeError(
            f"length mismatch: {len(truth_pairs)} truth vs {len(est_pairs)} estimates"
        )
    n = len(truth_pairs)
    if n > 8:
        raise ShapeError(f"exhaustive matching supports n <= 8, got {n}")
    V = np.stack([p.vector for p in truth_pairs])
    W = np.stack([p.vector for p in est_pairs])
    d_minus = np.linalg.norm(V[:, None, :] - W[None, :, :], axis=2)
    d_plus = np.linalg.norm(V[:, None, :] + W[None, :, :], axis=2)
    E = np.minimum(d_minus, d_plus)
    best_perm, best_score = None, np.inf
    for perm in permutations(range(n)):
        score = max(E[perm[j], j] for j in range(n))
        if score < best_score:
            best_perm, best_score = perm, score
    return _build_report(truth_pairs, est_pairs, best_perm, "exhaustive")


def residual_metric(T, est):
    """``||T - sum_i value_i vector_i^{tensor p}||_F``."""
    if not isinstance(T, SymmetricTensor):
        raise TypeError("T must be a SymmetricTensor")
    pairs = _as_pairs(est)
    if pairs[0].dim != T.dim:
        raise ShapeError("estimate dimension does not match tensor")
    recon = SymmetricTensor.zero(T.dim, T.order)
    for p in pairs:
        recon = recon + rank_one_tensor(p.value, p.vector, T.order)
    return frobenius_norm(T - recon)
