"""Pure NumPy implementations of the hot kernels.

These are the reference semantics for the compiled backend in
``_contract.pyx``; both expose the same four functions and are selected at
import time by :mod:`odeco.kernels`.  All kernels operate on the raveled
entries of a symmetric order-``p`` tensor over R^n (length ``n**p``,
C order) so the two backends can share one calling convention.

Symmetry of ``data`` is assumed, not checked: contractions always eat the
trailing axis, which only equals the axis-free mode product when the tensor
is symmetric.
"""

import numpy as np

__all__ = ["apply_full", "apply_partial", "project_sphere_slabs", "ascent_step"]


def apply_full(data, x, p):
    """Contract the tensor against ``x`` on all ``p`` axes.

    Parameters
    ----------
    data : ndarray
        Raveled entries, length ``len(x) ** p``.
    x : ndarray
        Vector of length n.
    p : int
        Tensor order.

    Returns
    -------
    float
        ``sum_{i1..ip} data[i1,..,ip] * x[i1] * ... * x[ip]``.
    """
    n = x.shape[0]
    v = data
    for _ in range(p):
        v = v.reshape(-1, n) @ x
    return float(v[0])


def apply_partial(data, x, p):
    """Contract the tensor against ``x`` on all axes but the first.

    Returns the gradient direction ``g`` with
    ``g[j] = sum_{i2..ip} data[j,i2,..,ip] * x[i2] * ... * x[ip]``,
    i.e. ``1/p`` times the gradient of ``apply_full`` at ``x``.
    """
    n = x.shape[0]
    v = data
    for _ in range(p - 1):
        v = v.reshape(-1, n) @ x
    return np.asarray(v, dtype=np.float64)


def project_sphere_slabs(y, anchors, theta, max_passes=100, slack=1e-12):
    """Project ``y`` onto the unit sphere intersected with the slabs
    ``|<v, anchors[i]>| <= theta``.

    Alternates clipping the offending anchor overlaps back to
    ``sign * theta`` with renormalization; for nearly orthonormal anchors
    the violations contract geometrically, so a modest pass budget
    suffices.

    Returns
    -------
    (ndarray, bool)
        The candidate vector and a feasibility flag.  When the flag is
        False the vector is the last iterate and must not be used.
    """
    v = np.array(y, dtype=np.float64)
    if anchors.shape[0] == 0:
        nv = np.linalg.norm(v)
        if nv < 1e-300:
            return v, False
        return v / nv, True
    for _ in range(max_passes):
        c = anchors @ v
        over = np.abs(c) > theta
        if np.any(over):
            v = v - anchors[over].T @ (c[over] - np.sign(c[over]) * theta)
        nv = np.linalg.norm(v)
        if nv < 1e-15:
            return v, False
        v = v / nv
        if np.max(np.abs(anchors @ v)) <= theta + slack:
            return v, True
    return v, False


def ascent_step(data, x, g, alpha, p, anchors, theta, max_passes=100, slack=1e-12):
    """One shifted power step ``x + g/alpha`` followed by feasibility
    projection, returning the new gradient and objective alongside.

    Returns
    -------
    (ndarray, ndarray, float, bool)
        ``(v, g_v, f_v, ok)`` where ``f_v = <g_v, v>`` is the objective at
        the candidate.  ``ok`` is False when projection failed, in which
        case the other values are meaningless.
    """
    y = x + g / alpha
    v, ok = project_sphere_slabs(y, anchors, theta, max_passes, slack)
    if not ok:
        return v, g, 0.0, False
    gv = apply_partial(data, v, p)
    fv = float(gv @ v)
    return v, gv, fv, True
