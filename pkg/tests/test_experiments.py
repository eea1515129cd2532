"""Experiment harness tests: instance generation, the three benchmark
drivers, report aggregation, and worker independence."""

import numpy as np
import pytest

from odeco import (
    DataError,
    InstanceSpec,
    SolverConfig,
    UnsupportedSizeError,
    apply_full,
    gen_perturbation,
    gen_sod,
    run_experiment,
    run_sweep,
    validate_document,
)

FAST = SolverConfig(restarts=4, seed=0)


class TestInstanceSpec:
    def test_rejects_bad_sizes(self):
        with pytest.raises(DataError):
            InstanceSpec(0, 3, ())
        with pytest.raises(DataError):
            InstanceSpec(2, 1, (1.0, 1.0))

    def test_rejects_count_mismatch(self):
        with pytest.raises(DataError):
            InstanceSpec(3, 3, (1.0, 2.0))

    def test_rejects_zero_eigenvalue(self):
        with pytest.raises(DataError):
            InstanceSpec(2, 3, (1.0, 0.0))

    def test_rejects_unknown_basis(self):
        with pytest.raises(DataError):
            InstanceSpec(2, 3, (1.0, 1.0), basis="hadamard")

    def test_coerces_eigenvalues(self):
        spec = InstanceSpec(2, 3, [1, 2])
        assert spec.eigenvalues == (1.0, 2.0)


class TestGenSod:
    def test_identity_basis_is_diagonal(self):
        T, truth = gen_sod(InstanceSpec(3, 3, (5.0, -2.0, 1.0)))
        for i, lam in enumerate((5.0, -2.0, 1.0)):
            assert T.data[i, i, i] == lam
            assert truth[i].value == lam
        off = T.data.copy()
        for i in range(3):
            off[i, i, i] = 0.0
        assert np.all(off == 0.0)

    def test_random_basis_orthonormal(self):
        spec = InstanceSpec(5, 3, (300.0,) * 5, basis="random", seed=7)
        T, truth = gen_sod(spec)
        V = np.stack([p.vector for p in truth])
        np.testing.assert_allclose(V @ V.T, np.eye(5), atol=1e-12)
        # eigenpair identity holds for each component
        for p in truth:
            np.testing.assert_allclose(apply_full(T, p.vector), 300.0, rtol=1e-12)

    def test_seeded_basis_deterministic(self):
        spec = InstanceSpec(4, 3, (1.0,) * 4, basis="random", seed=3)
        T1, _ = gen_sod(spec)
        T2, _ = gen_sod(spec)
        np.testing.assert_array_equal(T1.data, T2.data)


class TestGenPerturbation:
    def test_deterministic(self):
        E1, eps1 = gen_perturbation(3, 3, 11, cfg=FAST)
        E2, eps2 = gen_perturbation(3, 3, 11, cfg=FAST)
        np.testing.assert_array_equal(E1.data, E2.data)
        assert eps1 == eps2

    def test_scale_is_linear(self):
        E1, eps1 = gen_perturbation(3, 3, 5, scale=1.0, cfg=FAST)
        E2, eps2 = gen_perturbation(3, 3, 5, scale=2.0, cfg=FAST)
        np.testing.assert_allclose(E2.data, 2.0 * E1.data, rtol=1e-15)
        np.testing.assert_allclose(eps2, 2.0 * eps1, rtol=1e-9)

    def test_output_is_symmetric_with_positive_norm(self):
        E, eps = gen_perturbation(4, 3, 0, cfg=FAST)
        np.testing.assert_array_equal(E.data, np.swapaxes(E.data, 0, 1))
        assert eps > 0

    def test_size_cap(self):
        with pytest.raises(UnsupportedSizeError):
            gen_perturbation(50, 5, 0)


class TestRunExperiment:
    def test_rejects_unknown_id(self):
        with pytest.raises(ValueError):
            run_experiment("4")
        with pytest.raises(ValueError):
            run_experiment("")

    def test_rejects_bad_instance_count(self):
        with pytest.raises(ValueError):
            run_experiment("1", instances=0)

    def test_e1_records_and_schema(self):
        rep = run_experiment("1", instances=2, cfg=FAST, seed=0)
        assert rep.experiment_id == "E1"
        assert len(rep.records) == 2
        for rec in rep.records:
            assert 0 <= rec["value_stat"]
            assert 0 <= rec["vector_stat"]
            assert rec["eps"] > 0
            assert isinstance(rec["value_ok"], bool)
        validate_document(rep.to_dict(), "experiment-report")

    def test_e1_histogram_counts_sum_to_instances(self):
        rep = run_experiment("1", instances=3, cfg=FAST, seed=1)
        h = rep.summary["histogram"]
        assert sum(h["value_counts"]) + h["value_overflow"] == 3
        assert sum(h["vector_counts"]) + h["vector_overflow"] == 3
        assert len(h["edges"]) == len(h["value_counts"]) + 1
        assert rep.summary["count"] == 3

    def test_e2_summary_counts_wins(self):
        rep = run_experiment("2", instances=2, cfg=FAST, seed=0)
        wins = sum(1 for r in rep.records if r["constrained_wins"])
        assert rep.summary["constrained_wins"] == wins
        assert rep.summary["win_fraction"] == wins / 2
        for rec in rep.records:
            diff = rec["metric_orthogonal"] - rec["metric_constrained"]
            np.testing.assert_allclose(rec["difference"], diff, rtol=1e-12)
        validate_document(rep.to_dict(), "experiment-report")

    def test_e3_record_structure(self):
        rep = run_experiment("3", cfg=FAST, seed=1)
        assert rep.instances == 1
        rec = rep.records[0]
        assert len(rec["half_values"]) == 5
        assert set(rec["theta_half"]) >= {"pairs", "thetas", "method"}
        assert rec["twentieth_max_value_error"] < 1e-6
        validate_document(rep.to_dict(), "experiment-report")

    def test_deterministic_across_reruns(self):
        a = run_experiment("1", instances=2, cfg=FAST, seed=5)
        b = run_experiment("1", instances=2, cfg=FAST, seed=5)
        assert a.to_dict() == b.to_dict()

    def test_worker_count_does_not_change_results(self):
        a = run_experiment("2", instances=2, cfg=FAST, seed=3, workers=1)
        b = run_experiment("2", instances=2, cfg=FAST, seed=3, workers=2)
        assert a.to_dict() == b.to_dict()

    def test_seed_changes_results(self):
        a = run_experiment("1", instances=1, cfg=FAST, seed=0)
        b = run_experiment("1", instances=1, cfg=FAST, seed=1)
        assert a.records[0]["eps"] != b.records[0]["eps"]


class TestRunSweep:
    def test_grid_shape_and_fields(self):
        rep = run_sweep((3,), (0.5, 1.0), instances=1, cfg=FAST, seed=0)
        assert rep.experiment_id == "sweep"
        assert len(rep.records) == 2
        for rec in rep.records:
            assert rec["n"] == 3
            assert rec["eps_mean"] > 0
            assert rec["max_vector_error"] >= 0
            assert rec["theta"] == 0.5

    def test_explicit_theta_recorded(self):
        rep = run_sweep((3,), (0.5,), instances=1, cfg=FAST, seed=0, theta=0.2)
        assert rep.records[0]["theta"] == 0.2
