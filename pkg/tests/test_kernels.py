"""Backend kernel tests: einsum oracles, projection properties, parity.

The same flat-data kernels exist in pure NumPy and (when compiled) in
Cython; every numerical claim here is checked against straightforward
einsum/tensordot reference computations, and the two backends are
compared against each other on random inputs.
"""

import numpy as np
import pytest

from odeco import kernels
from odeco.tensor import symmetrize_array

BACKENDS = kernels.available_backends()


def _random_symmetric_flat(rng, n, p):
    raw = rng.standard_normal((n,) * p)
    return symmetrize_array(raw).reshape(-1)


def _einsum_full(flat, x, p):
    n = x.shape[0]
    T = flat.reshape((n,) * p)
    letters = "ijklmr"[:p]
    spec = letters + "," + ",".join(letters) + "->"
    return float(np.einsum(spec, T, *([x] * p)))


def _einsum_partial(flat, x, p):
    n = x.shape[0]
    T = flat.reshape((n,) * p)
    letters = "ijklmr"[:p]
    spec = letters + "," + ",".join(letters[1:]) + "->" + letters[0]
    return np.einsum(spec, T, *([x] * (p - 1)))


class TestContractionOracle:
    """apply_full/apply_partial against einsum on random tensors."""

    @pytest.mark.parametrize("backend", BACKENDS)
    @pytest.mark.parametrize("n,p", [(1, 3), (2, 3), (5, 3), (4, 4), (3, 5), (2, 6)])
    def test_apply_full_matches_einsum(self, backend, n, p):
        mod = kernels.get_backend(backend)
        rng = np.random.default_rng(100 * n + p)
        for _ in range(5):
            flat = _random_symmetric_flat(rng, n, p)
            x = rng.standard_normal(n)
            got = mod.apply_full(flat, x, p)
            np.testing.assert_allclose(got, _einsum_full(flat, x, p), rtol=1e-12)

    @pytest.mark.parametrize("backend", BACKENDS)
    @pytest.mark.parametrize("n,p", [(2, 3), (5, 3), (4, 4), (3, 5)])
    def test_apply_partial_matches_einsum(self, backend, n, p):
        mod = kernels.get_backend(backend)
        rng = np.random.default_rng(200 * n + p)
        for _ in range(5):
            flat = _random_symmetric_flat(rng, n, p)
            x = rng.standard_normal(n)
            got = mod.apply_partial(flat, x, p)
            np.testing.assert_allclose(got, _einsum_partial(flat, x, p), rtol=1e-12)

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_partial_contracts_to_full(self, backend):
        mod = kernels.get_backend(backend)
        rng = np.random.default_rng(7)
        flat = _random_symmetric_flat(rng, 4, 3)
        x = rng.standard_normal(4)
        np.testing.assert_allclose(
            float(mod.apply_partial(flat, x, 3) @ x),
            mod.apply_full(flat, x, 3),
            rtol=1e-12,
        )


class TestBackendParity:
    """Python and compiled kernels agree on identical inputs."""

    @pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend unavailable")
    @pytest.mark.parametrize("n,p", [(2, 3), (5, 3), (4, 4), (3, 6)])
    def test_contraction_parity(self, n, p):
        a = kernels.get_backend(BACKENDS[0])
        b = kernels.get_backend(BACKENDS[1])
        rng = np.random.default_rng(n * p)
        for _ in range(10):
            flat = _random_symmetric_flat(rng, n, p)
            x = rng.standard_normal(n)
            np.testing.assert_allclose(
                a.apply_full(flat, x, p), b.apply_full(flat, x, p), rtol=1e-12
            )
            np.testing.assert_allclose(
                a.apply_partial(flat, x, p), b.apply_partial(flat, x, p), rtol=1e-12
            )

    @pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend unavailable")
    def test_projection_parity(self):
        a = kernels.get_backend(BACKENDS[0])
        b = kernels.get_backend(BACKENDS[1])
        rng = np.random.default_rng(3)
        anchors = np.linalg.qr(rng.standard_normal((5, 5)))[0][:2].copy()
        for _ in range(20):
            y = rng.standard_normal(5)
            va, oka = a.project_sphere_slabs(y.copy(), anchors, 0.3, 100, 1e-12)
            vb, okb = b.project_sphere_slabs(y.copy(), anchors, 0.3, 100, 1e-12)
            assert oka == okb
            np.testing.assert_allclose(va, vb, atol=1e-12)


class TestProjection:
    """Sphere-with-slabs projection invariants."""

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_no_anchors_normalizes(self, backend):
        mod = kernels.get_backend(backend)
        y = np.array([3.0, 4.0, 0.0])
        v, ok = mod.project_sphere_slabs(y, np.zeros((0, 3)), 1.0, 100, 1e-12)
        assert ok
        np.testing.assert_allclose(v, [0.6, 0.8, 0.0], rtol=1e-15)

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_zero_vector_fails(self, backend):
        mod = kernels.get_backend(backend)
        _, ok = mod.project_sphere_slabs(
            np.zeros(3), np.zeros((0, 3)), 1.0, 100, 1e-12
        )
        assert not ok

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_result_is_feasible_unit(self, backend):
        mod = kernels.get_backend(backend)
        rng = np.random.default_rng(11)
        anchors = np.linalg.qr(rng.standard_normal((4, 4)))[0][:2].copy()
        theta = 0.25
        for _ in range(50):
            y = rng.standard_normal(4) * rng.uniform(0.1, 5.0)
            v, ok = mod.project_sphere_slabs(y, anchors, theta, 100, 1e-12)
            if not ok:
                continue
            np.testing.assert_allclose(np.linalg.norm(v), 1.0, rtol=1e-12)
            assert np.max(np.abs(anchors @ v)) <= theta + 1e-9

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_feasible_point_only_renormalized(self, backend):
        # a strictly feasible y must come back as y / ||y||
        mod = kernels.get_backend(backend)
        anchors = np.eye(4)[:1]
        y = np.array([0.05, 1.0, 0.5, -0.2])
        v, ok = mod.project_sphere_slabs(y.copy(), anchors, 0.5, 100, 1e-12)
        assert ok
        np.testing.assert_allclose(v, y / np.linalg.norm(y), rtol=1e-12)

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_violated_slab_lands_on_cap(self, backend):
        mod = kernels.get_backend(backend)
        anchors = np.eye(3)[:1]
        y = np.array([1.0, 0.3, 0.0])
        v, ok = mod.project_sphere_slabs(y, anchors, 0.5, 100, 1e-12)
        assert ok
        np.testing.assert_allclose(abs(v[0]), 0.5, atol=1e-9)
        np.testing.assert_allclose(np.linalg.norm(v), 1.0, rtol=1e-12)


class TestAscentStep:
    """One projected step: consistency of the returned triple."""

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_returns_consistent_gradient_and_value(self, backend):
        mod = kernels.get_backend(backend)
        rng = np.random.default_rng(5)
        flat = _random_symmetric_flat(rng, 4, 3)
        x = rng.standard_normal(4)
        x /= np.linalg.norm(x)
        g = mod.apply_partial(flat, x, 3)
        anchors = np.zeros((0, 4))
        v, gv, fv, ok = mod.ascent_step(flat, x, g, 10.0, 3, anchors, 1.0, 100, 1e-12)
        assert ok
        np.testing.assert_allclose(np.linalg.norm(v), 1.0, rtol=1e-12)
        np.testing.assert_allclose(gv, mod.apply_partial(flat, v, 3), rtol=1e-12)
        np.testing.assert_allclose(fv, float(gv @ v), rtol=1e-12)

    @pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend unavailable")
    def test_step_parity(self):
        a = kernels.get_backend(BACKENDS[0])
        b = kernels.get_backend(BACKENDS[1])
        rng = np.random.default_rng(17)
        flat = _random_symmetric_flat(rng, 5, 3)
        anchors = np.linalg.qr(rng.standard_normal((5, 5)))[0][:1].copy()
        x = rng.standard_normal(5)
        x /= np.linalg.norm(x)
        g = a.apply_partial(flat, x, 3)
        ra = a.ascent_step(flat, x, g, 50.0, 3, anchors, 0.4, 100, 1e-12)
        rb = b.ascent_step(flat, x, g, 50.0, 3, anchors, 0.4, 100, 1e-12)
        assert ra[3] == rb[3]
        np.testing.assert_allclose(ra[0], rb[0], atol=1e-12)
        np.testing.assert_allclose(ra[2], rb[2], rtol=1e-12)


class TestBackendSelection:
    def test_reported_backend_is_available(self):
        assert kernels.BACKEND in BACKENDS

    def test_get_backend_rejects_unknown(self):
        with pytest.raises(ValueError):
            kernels.get_backend("fortran")
