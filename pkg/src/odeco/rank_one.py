"""Best rank-one approximation of symmetric tensors.

Minimizing ``||T - lambda v^{tensor p}||_F`` over unit ``v`` is equivalent
to maximizing ``|T v^{tensor p}|`` with ``lambda = T v^{tensor p}``; the
solvers here attack the latter with multi-restart shifted power ascent:

    v_next = Pi(v + g / alpha),   g = T v^{tensor p-1},

where ``Pi`` projects onto the unit sphere, optionally intersected with
slab constraints ``|<v, anchor_i>| <= theta`` around previously found
eigenvectors.  The shift ``alpha`` starts at ``1 + p ||T||_F``, decays on
accepted (monotone) steps, and doubles when a step would decrease the
objective, so ascent is monotone by construction.  For even order the
objective is not odd in ``v``, so both signs of the tensor are ascended
and the larger ``|lambda|`` wins.

``theta = 0`` degenerates the slabs to equality constraints; that case is
solved exactly in the orthogonal complement of the anchors rather than by
clip projection (which is brittle at zero width).

``brute_force_rank_one`` is an independent oracle for n <= 3: dense sphere
grid, feasibility filter, and SLSQP polish, sharing no code with the
ascent path.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

from . import kernels
from .errors import (
    ConvergenceWarning,
    DataError,
    FeasibilityError,
    ShapeError,
    UnsupportedSizeError,
)
from .tensor import EigenPair, SolverConfig, SymmetricTensor, symmetrize_array

__all__ = [
    "ConstraintSet",
    "StationarityCertificate",
    "best_rank_one",
    "constrained_rank_one",
    "brute_force_rank_one",
    "stationarity_residual",
    "derive_seed",
]

# A slab counts as active when |<v, anchor>| is within this of theta.
ACTIVE_TOL = 1e-8
# External feasibility guarantee on returned vectors.
FEASIBILITY_SLACK = 1e-9
# Internal projection convergence slack (tighter than the guarantee).
PROJECT_SLACK = 1e-12
# Restart tie-break window: first restart within this of the best wins.
TIE_TOL = 1e-12

_MAX_PASSES = 100


def derive_seed(*keys):
    """Fold integer keys into a fresh 64-bit seed, deterministically."""
    ss = np.random.SeedSequence([int(k) for k in keys])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True, eq=False)
class ConstraintSet:
    """Slab constraints ``|<v, anchor_i>| <= theta`` for the next solve.

    ``theta = 0`` means exact orthogonality to every anchor.  An empty
    anchor list reduces to the unconstrained problem whatever theta is.
    """

    anchors: tuple = ()
    theta: float = 1.0

    def __post_init__(self):
        th = float(self.theta)
        if not 0.0 <= th <= 1.0 or not np.isfinite(th):
            raise DataError(f"theta must lie in [0, 1], got {th!r}")
        locked = []
        dim = None
        for a in self.anchors:
            v = np.array(a, dtype=np.float64)
            if v.ndim != 1:
                raise ShapeError("anchors must be one-dimensional vectors")
            if dim is None:
                dim = v.shape[0]
            elif v.shape[0] != dim:
                raise ShapeError("anchors must share one dimension")
            if not np.all(np.isfinite(v)):
                raise DataError("anchor entries must be finite")
            nv = np.linalg.norm(v)
            if abs(nv - 1.0) > 1e-12:
                raise DataError(f"anchor norm {nv!r} is not within 1e-12 of 1")
            v.setflags(write=False)
            locked.append(v)
        object.__setattr__(self, "anchors", tuple(locked))
        object.__setattr__(self, "theta", th)

    def matrix(self, n):
        """Anchors stacked as a C-contiguous (k, n) array."""
        if not self.anchors:
            return np.zeros((0, n), dtype=np.float64)
        A = np.ascontiguousarray(np.stack(self.anchors), dtype=np.float64)
        if A.shape[1] != n:
            raise ShapeError(
                f"anchor dimension {A.shape[1]} does not match tensor dim {n}"
            )
        return A

    def is_feasible(self, v, slack=FEASIBILITY_SLACK):
        if not self.anchors:
            return True
        A = self.matrix(len(v))
        return bool(np.max(np.abs(A @ v)) <= self.theta + slack)


@dataclass(frozen=True)
class StationarityCertificate:
    """First-order diagnostics for a returned eigenpair.

    ``kkt_residual`` is the norm of ``T v^{tensor p-1} - lambda v`` with
    the components along active constraint tangent directions projected
    out; with no active slab it is exactly the unconstrained residual.
    Recomputable from ``(T, pair, cs)`` via :func:`stationarity_residual`.
    """

    objective: float
    kkt_residual: float
    active_constraints: tuple
    converged: bool
    iterations: int
    restarts: int
    degenerate: bool = False

    def __post_init__(self):
        if self.kkt_residual < 0:
            raise DataError("kkt_residual must be nonnegative")


def _kkt(g, f, v, A, theta, all_active=False):
    """Projected stationarity residual and the active anchor indices."""
    r = g - f * v
    if A.shape[0] == 0:
        return float(np.linalg.norm(r)), ()
    c = A @ v
    if all_active:
        act = np.ones(c.shape[0], dtype=bool)
    else:
        act = np.abs(np.abs(c) - theta) <= ACTIVE_TOL
    idx = np.nonzero(act)[0]
    if idx.size:
        tang = A[act] - np.outer(c[act], v)
        u, sv, _ = np.linalg.svd(tang.T, full_matrices=False)
        if sv.size and sv[0] > 0:
            basis = u[:, sv > 1e-12 * sv[0]]
            r = r - basis @ (basis.T @ r)
    return float(np.linalg.norm(r)), tuple(int(i) for i in idx)


def _feasible_start(rng, n, A, theta):
    for _ in range(64):
        x = rng.standard_normal(n)
        nx = np.linalg.norm(x)
        if nx < 1e-12:
            continue
        v, ok = kernels.project_sphere_slabs(
            x / nx, A, theta, _MAX_PASSES, PROJECT_SLACK
        )
        if ok:
            return v
    raise FeasibilityError(
        f"could not draw a feasible start after 64 attempts (theta={theta}, "
        f"{A.shape[0]} anchors)"
    )


def _ascend(flat, p, x0, A, theta, cfg, alpha0):
    """Monotone projected ascent from ``x0``; returns (v, f, iterations)."""
    alpha = alpha0
    v = x0
    g = kernels.apply_partial(flat, v, p)
    f = float(g @ v)
    kkt, _ = _kkt(g, f, v, A, theta)
    iters = 0
    while kkt > cfg.tol and iters < cfg.max_iters:
        iters += 1
        vc, gc, fc, ok = kernels.ascent_step(
            flat, v, g, alpha, p, A, theta, _MAX_PASSES, PROJECT_SLACK
        )
        if not ok or fc < f - 1e-12 * (1.0 + abs(f)):
            alpha *= 2.0
            if alpha > 1e12 * alpha0:
                break
            continue
        v, g, f = vc, gc, fc
        kkt, _ = _kkt(g, f, v, A, theta)
        alpha = max(alpha * 0.7, 1e-6 * alpha0)
    return v, f, iters


# How many distinct leading candidates get an SLSQP polish.
_POLISH_TOP = 8
_NEAR_TIE = 1e-12


def _polish_leaders(runs, flat, p, n, A, theta):
    """SLSQP-polish the best few distinct ascent candidates in place.

    The projected ascent is a reliable globalizer but a slow finisher
    near slab boundaries, so each leading basin gets a local polish; the
    polished point replaces its candidate only when it is feasible and
    at least as good.
    """
    data_nd = flat.reshape((n,) * p)
    order = sorted(range(len(runs)), key=lambda i: -runs[i][0])
    seen = []
    for i in order:
        f, s, v, iters = runs[i]
        basin = next(
            (b for b in seen if b[0] == s and np.linalg.norm(b[1] - v) < 1e-3),
            None,
        )
        if basin is not None:
            # same basin as an already-polished leader: share its result,
            # otherwise the tie-break below could pick this cruder iterate
            if basin[2] is not None and basin[2][0] >= f - _NEAR_TIE * (
                1.0 + abs(f)
            ):
                runs[i] = basin[2] + (iters,)
            continue
        if len(seen) >= _POLISH_TOP:
            continue
        entry = [s, v, None]
        seen.append(entry)
        w = _slsqp_polish(data_nd, v.copy(), A, theta, s)
        if w is None:
            continue
        if A.shape[0]:
            w, ok = kernels.project_sphere_slabs(
                w, A, theta, _MAX_PASSES, PROJECT_SLACK
            )
            if not ok:
                continue
        w = np.ascontiguousarray(w)
        fw = s * kernels.apply_full(flat, w, p)
        r = _newton_refine(data_nd, w, A, theta)
        if r is not None:
            r = np.ascontiguousarray(r)
            fr = s * kernels.apply_full(flat, r, p)
            # the refined point wins unless refinement drifted downhill
            if fr >= fw - 1e-9 * (1.0 + abs(fw)):
                w, fw = r, fr
        # near the max f is flat to second order, so a far more accurate
        # point can evaluate a few ulps lower; prefer it inside this band
        if fw >= f - _NEAR_TIE * (1.0 + abs(f)):
            entry[2] = (fw, s, w)
            runs[i] = (fw, s, w, iters)
    return runs


def _run_restarts(flat, p, n, A, theta, cfg, seed_key):
    """All restarts (both signs for even p) plus polish of the leading
    candidates; returns the winning (vector, iterations) by the
    first-within-TIE_TOL-of-best rule."""
    fro = float(np.linalg.norm(flat))
    alpha0 = cfg.shift if cfg.shift > 0 else 1.0 + p * fro
    signs = (1.0,) if p % 2 else (1.0, -1.0)
    neg = -flat if len(signs) == 2 else None
    runs = []
    for r in range(cfg.restarts):
        rng = np.random.default_rng([*seed_key, r])
        x0 = _feasible_start(rng, n, A, theta)
        for s in signs:
            dat = flat if s > 0 else neg
            v, f, iters = _ascend(dat, p, x0, A, theta, cfg, alpha0)
            runs.append((f, s, v, iters))
    runs = _polish_leaders(runs, flat, p, n, A, theta)
    best_f = max(f for f, _, _, _ in runs)
    for f, _, v, iters in runs:
        if f >= best_f - TIE_TOL:
            return v, iters


def _finalize(T, v, iters, A, theta, cfg, all_active=False):
    """Recompute value/gradient/KKT at the final vector and package."""
    flat = T._flat()
    p = T.order
    nv = np.linalg.norm(v)
    if nv < 1e-12:
        raise FeasibilityError("solver returned a near-zero vector")
    v = np.ascontiguousarray(v / nv)
    value = kernels.apply_full(flat, v, p)
    g = kernels.apply_partial(flat, v, p)
    kkt, active = _kkt(g, value, v, A, theta, all_active=all_active)
    # tol is relative to the objective scale: kkt grows with |value|
    converged = kkt <= cfg.tol * (1.0 + abs(value))
    if not converged:
        warnings.warn(
            f"rank-one solve stopped at kkt residual {kkt:.3e} > "
            f"{cfg.tol:.1e} * (1 + |{value:.3e}|); returning best iterate",
            ConvergenceWarning,
            stacklevel=3,
        )
    pair = EigenPair(value, v)
    cert = StationarityCertificate(
        objective=value,
        kkt_residual=kkt,
        active_constraints=active,
        converged=converged,
        iterations=iters,
        restarts=cfg.restarts,
    )
    return pair, cert


def _degenerate_vector(n, A, theta):
    """A deterministic feasible unit vector, for the zero tensor."""
    if A.shape[0] == 0:
        v = np.zeros(n)
        v[0] = 1.0
        return v
    if theta == 0.0:
        Q = scipy.linalg.null_space(A)
        if Q.shape[1] == 0:
            raise FeasibilityError("anchors leave no orthogonal direction")
        return np.ascontiguousarray(Q[:, 0] / np.linalg.norm(Q[:, 0]))
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        v, ok = kernels.project_sphere_slabs(e, A, theta, _MAX_PASSES, PROJECT_SLACK)
        if ok:
            return v
    return _feasible_start(np.random.default_rng([0]), n, A, theta)


def _degenerate_result(T, A, theta):
    v = _degenerate_vector(T.dim, A, theta)
    _, active = _kkt(np.zeros(T.dim), 0.0, v, A, theta)
    pair = EigenPair(0.0, v)
    cert = StationarityCertificate(
        objective=0.0,
        kkt_residual=0.0,
        active_constraints=active,
        converged=True,
        iterations=0,
        restarts=0,
        degenerate=True,
    )
    return pair, cert


def best_rank_one(T, cfg=None):
    """Best rank-one approximation of ``T`` over ``cfg.restarts`` runs.

    Returns ``(EigenPair, StationarityCertificate)`` with
    ``pair.value = apply_full(T, pair.vector)`` by construction.  The zero
    tensor yields value 0 with a degenerate flag.  Identical inputs give
    bit-identical outputs.
    """
    if not isinstance(T, SymmetricTensor):
        raise TypeError("T must be a SymmetricTensor")
    cfg = cfg if cfg is not None else SolverConfig()
    A = np.zeros((0, T.dim), dtype=np.float64)
    if float(np.linalg.norm(T._flat())) == 0.0:
        return _degenerate_result(T, A, 1.0)
    v, iters = _run_restarts(T._flat(), T.order, T.dim, A, 1.0, cfg, (cfg.seed,))
    return _finalize(T, v, iters, A, 1.0, cfg)


def _solve_complement(T, cs, cfg):
    """theta = 0: optimize in the orthogonal complement of the anchors."""
    n, p = T.dim, T.order
    A = cs.matrix(n)
    Q = scipy.linalg.null_space(A)
    m = Q.shape[1]
    if m == 0:
        raise FeasibilityError(
            "anchors span the whole space; no orthogonal direction remains"
        )
    cur = np.asarray(T.data)
    for _ in range(p):
        cur = np.tensordot(cur, Q, axes=([0], [0]))
    reduced = symmetrize_array(np.ascontiguousarray(cur))
    rflat = np.ascontiguousarray(reduced.reshape(-1))
    if float(np.linalg.norm(rflat)) == 0.0:
        pair, cert = _degenerate_result(T, A, 0.0)
        return pair, cert
    empty = np.zeros((0, m), dtype=np.float64)
    u, iters = _run_restarts(rflat, p, m, empty, 1.0, cfg, (cfg.seed,))
    v = Q @ u
    return _finalize(T, v, iters, A, 0.0, cfg, all_active=True)


def constrained_rank_one(T, cs, cfg=None):
    """Best rank-one approximation under ``cs``'s slab constraints.

    The returned vector is unit within 1e-9 and satisfies every slab to
    1e-9 slack.  With no anchors this is exactly :func:`best_rank_one`.
    """
    if not isinstance(T, SymmetricTensor):
        raise TypeError("T must be a SymmetricTensor")
    if not isinstance(cs, ConstraintSet):
        raise TypeError("cs must be a ConstraintSet")
    cfg = cfg if cfg is not None else SolverConfig()
    if not cs.anchors:
        return best_rank_one(T, cfg)
    A = cs.matrix(T.dim)
    if cs.theta == 0.0:
        return _solve_complement(T, cs, cfg)
    if float(np.linalg.norm(T._flat())) == 0.0:
        return _degenerate_result(T, A, cs.theta)
    v, iters = _run_restarts(
        T._flat(), T.order, T.dim, A, cs.theta, cfg, (cfg.seed,)
    )
    return _finalize(T, v, iters, A, cs.theta, cfg)


def stationarity_residual(T, pair, cs=None):
    """Recompute the certificate's KKT residual from ``(T, pair, cs)``."""
    n = T.dim
    A = cs.matrix(n) if cs is not None and cs.anchors else np.zeros((0, n))
    theta = cs.theta if cs is not None else 1.0
    v = np.ascontiguousarray(pair.vector, dtype=np.float64)
    g = kernels.apply_partial(T._flat(), v, T.order)
    f = float(g @ v)
    res, _ = _kkt(g, f, v, A, theta, all_active=(theta == 0.0 and A.shape[0] > 0))
    return res


# --- brute-force oracle (independent of the ascent machinery) ---------------


def _sphere_grid(m, count):
    if m == 1:
        return np.array([[1.0], [-1.0]])
    if m == 2:
        ang = np.linspace(0.0, 2.0 * np.pi, count, endpoint=False)
        return np.stack([np.cos(ang), np.sin(ang)], axis=1)
    if m == 3:
        # golden-angle spiral: quasi-uniform deterministic cover of S^2
        i = np.arange(count) + 0.5
        z = 1.0 - 2.0 * i / count
        r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        phi = i * (np.pi * (3.0 - np.sqrt(5.0)))
        return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
    raise UnsupportedSizeError(f"grid supports dimension <= 3, got {m}")


def _poly_many(data_nd, V):
    """Evaluate T v^{tensor p} for every row v of V, via einsum."""
    p = data_nd.ndim
    letters = "ijklmr"[:p]
    spec = letters + "," + ",".join("a" + c for c in letters) + "->a"
    return np.einsum(spec, data_nd, *([V] * p))


def _poly_grad(data_nd, v):
    """p * T v^{tensor p-1}: the gradient of the polynomial, via einsum."""
    p = data_nd.ndim
    letters = "ijklmr"[:p]
    spec = letters + "," + ",".join(letters[1:]) + "->" + letters[0]
    return p * np.einsum(spec, data_nd, *([v] * (p - 1)))


def _slsqp_polish(data_nd, x0, A, theta, sign):
    n = x0.shape[0]
    # normalize the data scale so SLSQP's absolute ftol is meaningful
    fro = float(np.linalg.norm(data_nd.reshape(-1)))
    ds = data_nd / fro if fro > 0 else data_nd
    cons = [
        {
            "type": "eq",
            "fun": lambda v: np.dot(v, v) - 1.0,
            "jac": lambda v: 2.0 * v,
        }
    ]
    for a in A:
        cons.append(
            {
                "type": "ineq",
                "fun": lambda v, a=a: theta**2 - np.square(np.dot(a, v)),
                "jac": lambda v, a=a: -2.0 * np.dot(a, v) * a,
            }
        )
    # the solution is a unit vector, so a generous coordinate box cannot
    # exclude it; it only stops line searches from escaping to overflow
    with np.errstate(over="ignore", invalid="ignore"):
        res = scipy.optimize.minimize(
            lambda v: -sign * float(_poly_many(ds, v[None, :])[0]),
            x0,
            jac=lambda v: -sign * _poly_grad(ds, v),
            method="SLSQP",
            bounds=[(-1.5, 1.5)] * n,
            constraints=cons,
            options={"maxiter": 300, "ftol": 1e-14},
        )
    v = np.asarray(res.x, dtype=np.float64)
    nv = np.linalg.norm(v)
    if not np.all(np.isfinite(v)) or nv < 1e-9:
        return None
    v = v / nv
    if A.shape[0] and np.max(np.abs(A @ v)) > theta + 1e-7:
        return None
    return v


# Activity detection for Newton refinement: SLSQP locates the point only
# to ~1e-6, so a slab this close to its cap is treated as active.
_REFINE_ACTIVE_TOL = 1e-5


def _tensor_matrix(data_nd, v):
    """T v^{tensor p-2} as an (n, n) matrix."""
    cur = data_nd
    for _ in range(data_nd.ndim - 2):
        cur = np.tensordot(cur, v, axes=([cur.ndim - 1], [0]))
    return cur


def _newton_refine(data_nd, v0, A, theta, max_steps=6):
    """Newton's method on the KKT system with the active set frozen.

    Treats slabs within ``_REFINE_ACTIVE_TOL`` of their cap as equalities
    ``<a_i, v> = sign_i theta`` and solves the stationarity system for
    ``(v, sphere multiplier, slab multipliers)``.  Returns the refined
    unit vector, or None when the system is singular, diverges, or the
    result leaves the feasible set.
    """
    n = v0.shape[0]
    p = data_nd.ndim
    if A.shape[0]:
        c = A @ v0
        act = np.abs(np.abs(c) - theta) <= _REFINE_ACTIVE_TOL
        As = np.sign(c[act])[:, None] * A[act]
    else:
        As = np.zeros((0, n))
    k = As.shape[0]
    if k >= n:
        return None
    x = np.concatenate([v0, np.zeros(1 + k)])
    # multipliers from least squares on the stationarity equation
    M = _tensor_matrix(data_nd, v0)
    basis = np.column_stack([v0, As.T]) if k else v0[:, None]
    x[n:], *_ = np.linalg.lstsq(basis, p * (M @ v0), rcond=None)

    prev = np.inf
    for _ in range(max_steps):
        v, nu, mu = x[:n], x[n], x[n + 1 :]
        M = _tensor_matrix(data_nd, v)
        F = np.concatenate(
            [
                p * (M @ v) - nu * v - (As.T @ mu if k else 0.0),
                [(v @ v - 1.0) / 2.0],
                As @ v - theta if k else [],
            ]
        )
        res = float(np.linalg.norm(F))
        if not np.isfinite(res) or res > 2.0 * prev:
            return None
        if res < 1e-13 * (1.0 + abs(nu)):
            break
        prev = res
        J = np.zeros((n + 1 + k, n + 1 + k))
        J[:n, :n] = p * (p - 1) * M - nu * np.eye(n)
        J[:n, n] = -v
        J[n, :n] = v
        if k:
            J[:n, n + 1 :] = -As.T
            J[n + 1 :, :n] = As
        try:
            x = x + np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            return None
    v = x[:n]
    nv = np.linalg.norm(v)
    if not np.all(np.isfinite(v)) or abs(nv - 1.0) > 1e-6:
        return None
    v = v / nv
    if A.shape[0] and np.max(np.abs(A @ v)) > theta + PROJECT_SLACK:
        return None
    return v


def brute_force_rank_one(T, cs=None, grid_points=8000):
    """Exhaustive-grid oracle for the (constrained) best rank-one problem.

    Dense angular grid over the feasible part of the sphere, followed by
    SLSQP polish from the best grid points; n <= 3 only.  With theta = 0
    the search runs inside the exact orthogonal complement of the anchors,
    so the output is orthogonal to them to machine precision.
    """
    if not isinstance(T, SymmetricTensor):
        raise TypeError("T must be a SymmetricTensor")
    n, p = T.dim, T.order
    if n > 3:
        raise UnsupportedSizeError(f"brute force supports n <= 3, got n = {n}")
    if grid_points < 100:
        raise ValueError("grid_points must be >= 100")
    data_nd = np.asarray(T.data)
    A = cs.matrix(n) if cs is not None and cs.anchors else np.zeros((0, n))
    theta = cs.theta if cs is not None else 1.0

    if A.shape[0] and theta == 0.0:
        Q = scipy.linalg.null_space(A)
        m = Q.shape[1]
        if m == 0:
            raise FeasibilityError("anchors leave no orthogonal direction")
        cur = data_nd
        for _ in range(p):
            cur = np.tensordot(cur, Q, axes=([0], [0]))
        red = symmetrize_array(np.ascontiguousarray(cur))
        grid_sub = _sphere_grid(m, grid_points)
        sub_pair = _grid_and_polish(red, grid_sub, np.zeros((0, m)), 1.0)
        v = Q @ sub_pair.vector
        v = v / np.linalg.norm(v)
        return EigenPair(float(_poly_many(data_nd, v[None, :])[0]), v)

    grid = _sphere_grid(n, grid_points)
    if A.shape[0]:
        mask = np.max(np.abs(grid @ A.T), axis=1) <= theta + 1e-12
        feas = grid[mask]
        if feas.shape[0] == 0:
            projected = []
            for gpt in grid[:: max(1, grid.shape[0] // 512)]:
                v, ok = kernels.project_sphere_slabs(
                    gpt, A, theta, _MAX_PASSES, PROJECT_SLACK
                )
                if ok:
                    projected.append(v)
            if not projected:
                raise FeasibilityError("no feasible grid point found")
            feas = np.stack(projected)
    else:
        feas = grid
    return _grid_and_polish(data_nd, feas, A, theta)


def _grid_and_polish(data_nd, feas, A, theta):
    vals = _poly_many(data_nd, feas)
    order = np.argsort(-np.abs(vals), kind="stable")
    top = order[: min(16, order.size)]
    best_v = feas[top[0]]
    best_val = float(vals[top[0]])
    for idx in top:
        for sign in (1.0, -1.0):
            v = _slsqp_polish(data_nd, feas[idx].copy(), A, theta, sign)
            if v is None:
                continue
            val = float(_poly_many(data_nd, v[None, :])[0])
            if abs(val) > abs(best_val):
                best_val, best_v = val, v
    best_v = best_v / np.linalg.norm(best_v)
    return EigenPair(float(_poly_many(data_nd, best_v[None, :])[0]), best_v)
