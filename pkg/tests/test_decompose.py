"""Decomposition pipeline tests: the three deflation schemes, component
matching, and the residual metric."""

import numpy as np
import pytest

from odeco import (
    AdaptiveSearchError,
    DataError,
    Decomposition,
    DecompositionError,
    EigenPair,
    MatchReport,
    ShapeError,
    SolverConfig,
    SymmetricTensor,
    ada_sroa_cd,
    match_components,
    match_components_exhaustive,
    rank_one_tensor,
    residual_metric,
    sroa_cd,
    sroa_rd,
)

CFG = SolverConfig(restarts=8, seed=0)


def _sod(values, basis, order):
    T = SymmetricTensor.zero(len(values), order)
    pairs = []
    for lam, v in zip(values, basis):
        T = T + rank_one_tensor(lam, v, order)
        pairs.append(EigenPair(lam, v))
    return T, pairs


def _random_basis(n, seed):
    q, r = np.linalg.qr(np.random.default_rng(seed).standard_normal((n, n)))
    return q * np.sign(np.diag(r))


class TestExactRecovery:
    @pytest.mark.parametrize("method", ["rd", "cd", "ada"])
    @pytest.mark.parametrize("order", [3, 4])
    def test_random_basis_sod(self, method, order):
        values = (5.0, -3.0, 2.0) if order == 3 else (5.0, 3.0, 2.0)
        basis = _random_basis(3, 42).T
        T, truth = _sod(values, basis, order)
        if method == "rd":
            dec = sroa_rd(T, CFG)
        elif method == "cd":
            dec = sroa_cd(T, 0.5, CFG)
        else:
            dec = ada_sroa_cd(T, CFG)
        rep = match_components(truth, dec)
        assert rep.max_value_error < 1e-8
        assert rep.max_vector_error < 1e-8
        assert dec.residual < 1e-8

    def test_rd_values_in_magnitude_order(self):
        # residual deflation peels eigenvalues largest magnitude first;
        # for odd order (value, vector) is determined up to a joint flip,
        # so only |value| is canonical
        T, _ = _sod((7.0, -4.0, 1.0), np.eye(3), 3)
        dec = sroa_rd(T, CFG)
        mags = np.abs(dec.values)
        assert np.all(np.diff(mags) <= 1e-9)
        np.testing.assert_allclose(sorted(mags), [1.0, 4.0, 7.0], atol=1e-10)

    def test_step_residuals_telescope(self):
        T, _ = _sod((7.0, -4.0, 1.0), _random_basis(3, 1).T, 3)
        dec = sroa_rd(T, CFG)
        assert len(dec.step_residuals) == 3
        assert dec.step_residuals[-1] == dec.residual
        # orthonormal terms: dropping one leaves the unexplained energy
        np.testing.assert_allclose(
            dec.step_residuals[0], np.sqrt(4.0**2 + 1.0**2), rtol=1e-9
        )
        np.testing.assert_allclose(dec.step_residuals[1], 1.0, rtol=1e-8)

    def test_cd_respects_slabs_between_steps(self):
        T, _ = _sod((5.0, 4.0, 3.0, 2.0), _random_basis(4, 7).T, 3)
        theta = 0.3
        dec = sroa_cd(T, theta, CFG)
        V = dec.vectors
        overlap = np.abs(V @ V.T) - np.eye(4)
        assert np.max(overlap) <= theta + 1e-9

    def test_cd_theta_zero_orthonormal_output(self):
        T, truth = _sod((5.0, 4.0, 3.0), _random_basis(3, 9).T, 3)
        dec = sroa_cd(T, 0.0, CFG)
        gram = dec.vectors @ dec.vectors.T
        np.testing.assert_allclose(gram, np.eye(3), atol=1e-10)
        assert match_components(truth, dec).max_vector_error < 1e-8

    def test_cd_rejects_bad_theta(self):
        T, _ = _sod((1.0, 1.0), np.eye(2), 3)
        for theta in (-0.5, 1.5):
            with pytest.raises(DataError):
                sroa_cd(T, theta, CFG)

    def test_ada_keeps_theta_at_start_when_unchallenged(self):
        # well separated orthogonal components trigger no shrinkage
        T, _ = _sod((5.0, 4.0, 3.0), _random_basis(3, 11).T, 3)
        dec = ada_sroa_cd(T, CFG)
        assert dec.thetas == (0.5, 0.5, 0.5)

    def test_ada_floor_breach_raises(self):
        # a pure rank-one input starves later steps: every candidate
        # hugs the first eigenvector's slab and is rejected forever
        T = rank_one_tensor(5.0, np.eye(3)[0], 3)
        T = SymmetricTensor(T.data)
        with pytest.raises(AdaptiveSearchError) as exc:
            ada_sroa_cd(T, SolverConfig(restarts=2, seed=0), theta_floor=0.3)
        assert exc.value.step == 1

    def test_deterministic_rerun(self):
        T, _ = _sod((5.0, -4.0, 3.0), _random_basis(3, 13).T, 3)
        d1 = sroa_cd(T, 0.4, CFG)
        d2 = sroa_cd(T, 0.4, CFG)
        np.testing.assert_array_equal(d1.values, d2.values)
        np.testing.assert_array_equal(d1.vectors, d2.vectors)
        assert d1.step_residuals == d2.step_residuals

    def test_rejects_non_tensor(self):
        for fn in (sroa_rd, lambda x: sroa_cd(x, 0.5), ada_sroa_cd):
            with pytest.raises(TypeError):
                fn(np.zeros((2, 2, 2)))


class TestDecomposition:
    def _pairs(self, n=3):
        return tuple(EigenPair(float(i + 1), np.eye(n)[i]) for i in range(n))

    def test_requires_dim_many_pairs(self):
        with pytest.raises(ShapeError):
            Decomposition(pairs=self._pairs(3)[:2], order=3)

    def test_requires_nonempty(self):
        with pytest.raises(DataError):
            Decomposition(pairs=(), order=3)

    def test_thetas_length_checked(self):
        with pytest.raises(ShapeError):
            Decomposition(pairs=self._pairs(3), order=3, thetas=(0.5,))

    def test_reconstruction_and_values(self):
        dec = Decomposition(pairs=self._pairs(3), order=3, method="rd")
        np.testing.assert_array_equal(dec.values, [1.0, 2.0, 3.0])
        recon = dec.reconstruction()
        for i in range(3):
            assert recon.data[i, i, i] == i + 1.0

    def test_dict_round_trip(self):
        dec = Decomposition(
            pairs=self._pairs(2),
            order=3,
            method="ada",
            thetas=(0.5, 0.48),
            residual=0.25,
            step_residuals=(1.0, 0.25),
        )
        back = Decomposition.from_dict(dec.to_dict())
        assert back.method == "ada"
        assert back.thetas == (0.5, 0.48)
        assert back.residual == 0.25
        assert back.step_residuals == (1.0, 0.25)
        assert back.certificates is None
        np.testing.assert_array_equal(back.vectors, dec.vectors)

    def test_from_dict_rejects_garbage(self):
        with pytest.raises(DataError):
            Decomposition.from_dict({"method": "rd"})


class TestMatchReport:
    def test_rejects_non_bijection(self):
        with pytest.raises(DataError):
            MatchReport((0, 0), (1, 1), (0.0, 0.0), (0.0, 0.0))

    def test_rejects_bad_signs(self):
        with pytest.raises(DataError):
            MatchReport((0, 1), (1, 2), (0.0, 0.0), (0.0, 0.0))

    def test_rejects_out_of_range_errors(self):
        with pytest.raises(DataError):
            MatchReport((0, 1), (1, 1), (-0.1, 0.0), (0.0, 0.0))
        with pytest.raises(DataError):
            MatchReport((0, 1), (1, 1), (0.0, 0.0), (3.0, 0.0))

    def test_round_trip_and_maxima(self):
        rep = MatchReport((1, 0), (1, -1), (0.1, 0.2), (0.3, 0.4))
        back = MatchReport.from_dict(rep.to_dict())
        assert back.permutation == (1, 0)
        assert back.max_value_error == 0.2
        assert back.max_vector_error == 0.4


class TestMatching:
    def _truth(self, n, seed):
        basis = _random_basis(n, seed).T
        return [EigenPair(float(n - i), basis[i]) for i in range(n)]

    def test_shuffled_sign_flipped_truth_matches_exactly(self):
        truth = self._truth(5, 3)
        perm = [3, 0, 4, 1, 2]
        flips = [1, -1, 1, -1, -1]
        est = [
            EigenPair(truth[i].value, s * truth[i].vector)
            for i, s in zip(perm, flips)
        ]
        rep = match_components(truth, est)
        assert rep.permutation == tuple(perm)
        assert rep.signs == tuple(flips)
        assert rep.max_value_error == 0.0
        assert rep.max_vector_error == 0.0

    def test_greedy_agrees_with_exhaustive(self):
        rng = np.random.default_rng(4)
        for trial in range(10):
            truth = self._truth(4, 100 + trial)
            est = [
                EigenPair(p.value + 0.01 * rng.standard_normal(),
                          _perturb_unit(p.vector, rng, 0.05))
                for p in truth
            ]
            rng.shuffle(est)
            g = match_components(truth, est)
            e = match_components_exhaustive(truth, est)
            assert g.max_vector_error <= e.max_vector_error + 1e-12

    def test_exhaustive_optimal_on_adversarial_overlaps(self):
        # two estimates both nearest the same truth vector: greedy order
        # must still produce a bijection, exhaustive the minimax one
        e1, e2 = np.eye(2)
        truth = [EigenPair(1.0, e1), EigenPair(1.0, e2)]
        mid = np.array([np.cos(0.6), np.sin(0.6)])
        near = np.array([np.cos(0.1), np.sin(0.1)])
        est = [EigenPair(1.0, near), EigenPair(1.0, mid)]
        rep = match_components_exhaustive(truth, est)
        assert sorted(rep.permutation) == [0, 1]
        alt = max(
            np.linalg.norm(e1 - near), np.linalg.norm(e2 - mid)
        )
        swapped = max(
            np.linalg.norm(e2 - near), np.linalg.norm(e1 - mid)
        )
        assert rep.max_vector_error <= min(alt, swapped) + 1e-12

    def test_length_mismatch_rejected(self):
        with pytest.raises(ShapeError):
            match_components(self._truth(3, 0), self._truth(4, 0))

    def test_exhaustive_size_guard(self):
        truth = self._truth(9, 0)
        with pytest.raises(ShapeError):
            match_components_exhaustive(truth, truth)


def _perturb_unit(v, rng, scale):
    w = v + scale * rng.standard_normal(v.shape)
    return w / np.linalg.norm(w)


class TestResidualMetric:
    def test_zero_for_exact_decomposition(self):
        T, truth = _sod((5.0, 4.0, 3.0), _random_basis(3, 5).T, 3)
        assert residual_metric(T, truth) < 1e-12

    def test_known_value_for_scaled_axis(self):
        T = rank_one_tensor(3.0, np.eye(2)[0], 3) + rank_one_tensor(
            1.0, np.eye(2)[1], 3
        )
        est = [EigenPair(2.0, np.eye(2)[0]), EigenPair(1.0, np.eye(2)[1])]
        np.testing.assert_allclose(residual_metric(T, est), 1.0, rtol=1e-12)

    def test_dimension_guard(self):
        T = SymmetricTensor.zero(3, 3)
        with pytest.raises(ShapeError):
            residual_metric(T, [EigenPair(1.0, np.eye(2)[0])] * 2)


class TestDecompositionError:
    def test_message_carries_step(self):
        e = DecompositionError(2, "solver failed")
        assert e.step == 2
        assert "2" in str(e) and "solver failed" in str(e)

    def test_adaptive_error_fields(self):
        e = AdaptiveSearchError(1, 0.0999, 0.1)
        assert e.step == 1 and e.theta == 0.0999 and e.floor == 0.1
