"""Unit tests for the oracle validation suite."""

import math

import numpy as np
import pytest

from src.core.model import FieldMatterPoint, ModelParams
from src.core.optimizer import SearchConfig
from src.core.sacs_surface import ParitySector, StableExponent
from src.oracle.validation import (
    ValidationOptions,
    richardson_gradient,
    run_validation,
    sample_points,
)

SMALL = ValidationOptions(params=ModelParams(1.0, 0.552, 4), gradient_samples=5,
                          embedding_samples=5, nu_max=40)


class TestSamplePoints:
    """Test random interior points."""

    def test_count_and_domain(self):
        """Test points avoid the singular ring."""
        points = sample_points(ModelParams(), 20, np.random.default_rng(1))

        assert len(points) == 20
        for point in points:
            assert 0.1 <= point.theta <= 1.3

    def test_planar(self):
        """Test planar points have p = phi = 0."""
        points = sample_points(ModelParams(), 5, np.random.default_rng(1), planar=True)
        assert all(p.p == 0.0 and p.phi == 0.0 for p in points)

    def test_odd_points_avoid_origin(self):
        """Test odd-sector samples keep 1 - overlap away from zero."""
        params = ModelParams(1.0, 0.5, 4)
        points = sample_points(params, 10, np.random.default_rng(2), ParitySector.ODD)
        for point in points:
            assert StableExponent.from_point(params, point).one_plus(-1) >= 1e-2

    def test_deterministic(self):
        """Test the same seed gives the same points."""
        first = sample_points(ModelParams(), 3, np.random.default_rng(7))
        second = sample_points(ModelParams(), 3, np.random.default_rng(7))
        assert first == second


class TestRichardsonGradient:
    """Test the extrapolated finite difference."""

    def test_quadratic(self):
        """Test the gradient of a separable quadratic."""
        def energy(x):
            return x.q ** 2 + 3.0 * x.theta ** 2

        grad = richardson_gradient(energy, FieldMatterPoint(1.0, 0.0, 0.5), 1e-3)
        np.testing.assert_allclose(grad, [2.0, 0.0, 3.0, 0.0], atol=1e-8)


class TestRunValidation:
    """Test the suite runner."""

    def test_structural_checks_pass(self):
        """Test parity blocks and the decoupled spectrum pass."""
        report = run_validation(SMALL, only=["parity", "decoupled"])

        assert [c.name for c in report.checks] == ["parity_blocks", "decoupled_spectrum"]
        assert report.passed
        assert report.failures == []

    def test_decoupled_check_covers_parity_gap(self):
        """Test the decoupled check includes the gap min(1, omega_a) between the sectors."""
        options = ValidationOptions(params=ModelParams(0.5, 0.3, 4))
        check = run_validation(options, only=["decoupled"]).checks[0]

        assert check.passed
        assert check.residual <= 1e-12
        assert "parity gap" in check.detail

    def test_gradient_and_embedding_checks_pass(self):
        """Test analytic gradients and embeddings agree with their references."""
        report = run_validation(SMALL, only=["gradient", "stationarity", "embedding"])

        assert len(report.checks) == 6
        assert report.passed, [(c.name, c.residual) for c in report.failures]

    def test_truncation_monotonic(self):
        """Test the variational cutoff ladder never raises the energy."""
        report = run_validation(SMALL, only=["truncation"])
        assert report.passed

    def test_flipped_coupling_is_detected(self):
        """Test a sign-flipped coupling fails the embedding check."""
        options = ValidationOptions(params=SMALL.params, embedding_samples=5, nu_max=40,
                                    coupling_sign=-1.0)
        report = run_validation(options, only=["embedding_coherent"])

        assert not report.passed
        assert report.failures[0].name == "embedding_coherent"
        assert report.failures[0].residual > options.embed_tol

    def test_flipped_coupling_keeps_parity_blocks(self):
        """Test the sign flip leaves the block structure intact."""
        options = ValidationOptions(params=SMALL.params, nu_max=40, coupling_sign=-1.0)
        assert run_validation(options, only=["parity_blocks"]).passed

    def test_seeded_runs_repeat(self):
        """Test residuals are reproducible for a fixed seed."""
        first = run_validation(SMALL, only=["embedding_sacs_even"])
        second = run_validation(SMALL, only=["embedding_sacs_even"])
        assert first.checks[0].residual == second.checks[0].residual

    def test_errors_become_failed_checks(self):
        """Test a check that raises is reported as failed with NaN residual."""
        options = ValidationOptions(params=SMALL.params, embedding_samples=3, nu_max=1)
        report = run_validation(options, only=["embedding_coherent"])

        check = report.checks[0]
        assert not check.passed
        assert math.isnan(check.residual)
        assert "InsufficientCutoffError" in check.detail


@pytest.mark.slow
class TestVariationalBound:
    """Test the exact ground state lies below the even SACS minimum."""

    def test_bound(self):
        options = ValidationOptions(params=ModelParams(1.0, 0.552, 6), bound_gammas=(0.4, 0.6))
        assert run_validation(options, only=["variational_bound"]).passed

    def test_bound_on_fine_grid(self):
        """Test the bound at every one of 61 couplings across the N = 20 transition."""
        options = ValidationOptions(params=ModelParams(1.0, 0.552, 20),
                                    bound_gammas=tuple(float(g) for g in np.linspace(0.4, 0.7, 61)),
                                    search=SearchConfig(grid_q=21, grid_theta=21))
        assert run_validation(options, only=["variational_bound"]).passed
