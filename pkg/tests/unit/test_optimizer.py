"""Unit tests for the multi-start minimizer and surface tabulation."""

import math

import numpy as np
import pytest

from src.core.mean_field import mean_field_critical_points
from src.core.model import FieldMatterPoint, ModelParams
from src.core.optimizer import (
    BasinLabel,
    LocalMinimum,
    SearchConfig,
    Surface,
    find_local_minima,
    minima_near,
    label_basins,
    numerical_hessian,
    order_parameters,
    surface_energy,
    surface_gradient,
    surface_grid,
    two_minima_section,
)
from src.core.sacs_surface import ParitySector

# Coarser grid for quick tests; every start is still refined to 1e-8.
QUICK_SEARCH = SearchConfig(grid_q=15, grid_theta=15)


def _minimum(q, theta, energy, surface=Surface.SACS_EVEN, n_atoms=20):
    point = FieldMatterPoint(q, 0.0, theta)
    return LocalMinimum(
        point=point,
        total_energy=energy,
        hessian_eigs=(1.0, 2.0),
        order_params=order_parameters(ModelParams(n_atoms=n_atoms), point),
        gradient_norm=1e-10,
        surface=surface,
    )


class TestSurface:
    """Test the Surface enum."""

    def test_parse(self):
        """Test parsing is case-insensitive."""
        assert Surface.parse("SACS_EVEN") is Surface.SACS_EVEN
        assert Surface.parse(Surface.EXACT) is Surface.EXACT

    def test_sector(self):
        """Test SACS surfaces know their sector."""
        assert Surface.SACS_EVEN.sector is ParitySector.EVEN
        assert Surface.SACS_ODD.sector is ParitySector.ODD
        assert Surface.MEAN_FIELD.sector is None

    def test_for_sector(self):
        """Test the surface of a sector."""
        assert Surface.for_sector("odd") is Surface.SACS_ODD
        assert Surface.for_sector(ParitySector.EVEN) is Surface.SACS_EVEN

    def test_is_variational(self):
        """Test only the exact source has no landscape."""
        assert not Surface.EXACT.is_variational
        assert Surface.MEAN_FIELD.is_variational


class TestSearchConfig:
    """Test the search domain."""

    def test_q_max_scales_with_sqrt_n_gamma(self):
        """Test q range 3 sqrt(N) gamma."""
        params = ModelParams(1.0, 0.5, 20)
        assert SearchConfig().q_max(params) == pytest.approx(3.0 * math.sqrt(20) * 0.5)

    def test_q_max_floor(self):
        """Test gamma = 0 keeps a non-empty q range."""
        assert SearchConfig().q_max(ModelParams(1.0, 0.0, 20)) == 1.0

    def test_theta_max(self):
        """Test theta stays below pi/2."""
        assert SearchConfig().theta_max() == pytest.approx(0.5 * math.pi - 1e-6)


class TestOrderParameters:
    """Test order parameters of a point."""

    def test_values(self):
        """Test photon number per atom, excited fraction and raw pair."""
        order = order_parameters(ModelParams(n_atoms=20), FieldMatterPoint(2.0, 0.0, math.pi / 3))

        assert order.photon_per_atom == pytest.approx(0.1)
        assert order.excited_fraction == pytest.approx(0.25)
        assert order.half_q == 1.0
        assert order.cos_theta == pytest.approx(0.5)
        assert order.as_pair() == (order.photon_per_atom, order.excited_fraction)

    def test_accepts_minimum(self):
        """Test a LocalMinimum is accepted as well as a point."""
        minimum = _minimum(1.0, 0.4, -10.0)
        assert order_parameters(ModelParams(n_atoms=20), minimum) == minimum.order_params


class TestSurfaceHelpers:
    """Test planar energy, gradient and Hessian helpers."""

    def test_gradient_of_mean_field(self):
        """Test the planar gradient picks (dE/dq, dE/dtheta)."""
        params = ModelParams(1.0, 0.5, 20)
        grad = surface_gradient(params, Surface.MEAN_FIELD, np.array([1.0]), np.array([0.0]))

        # dE/dq = q, dE/dtheta = sqrt(2N) gamma q at theta = 0
        np.testing.assert_allclose(grad[0], [1.0, math.sqrt(40.0) * 0.5])

    def test_hessian_is_symmetric(self):
        """Test the central-difference Hessian is symmetrized."""
        params = ModelParams(1.0, 0.55, 20)
        hess = numerical_hessian(params, Surface.SACS_EVEN, np.array([0.7]), np.array([0.4]), 1e-5)

        assert hess.shape == (1, 2, 2)
        assert hess[0, 0, 1] == hess[0, 1, 0]

    def test_mean_field_hessian_at_origin(self):
        """Test the exact quadratic form at the origin."""
        params = ModelParams(1.0, 0.3, 20)
        hess = numerical_hessian(params, Surface.MEAN_FIELD, np.array([0.0]), np.array([0.0]),
                                 1e-5)[0]
        off = math.sqrt(40.0) * 0.3

        np.testing.assert_allclose(hess, [[1.0, off], [off, 10.0]], rtol=1e-6)


class TestFindLocalMinima:
    """Test the multi-start search."""

    def test_mean_field_normal_phase(self):
        """Test the origin is the only minimum below gamma_c."""
        params = ModelParams(1.0, 0.3, 20)
        minima = find_local_minima(params, Surface.MEAN_FIELD, QUICK_SEARCH)

        assert len(minima) == 1
        assert minima[0].total_energy == pytest.approx(-10.0, abs=1e-9)
        assert abs(minima[0].point.q) < 1e-6
        assert minima[0].point.theta < 1e-6
        assert minima[0].basin_label is None

    def test_mean_field_superradiant_phase(self):
        """Test the refined minimum matches the closed form above gamma_c."""
        params = ModelParams(1.0, 0.7, 20)
        minima = find_local_minima(params, "mean_field", QUICK_SEARCH)
        closed = mean_field_critical_points(params)[0]

        assert len(minima) == 1
        assert minima[0].total_energy == pytest.approx(closed.total_energy, rel=1e-10)
        assert minima[0].point.q == pytest.approx(closed.point.q, abs=1e-6)
        assert minima[0].point.theta == pytest.approx(closed.point.theta, abs=1e-6)

    def test_even_sacs_minima_are_valid(self):
        """Test every reported minimum is stationary, stable and sorted."""
        params = ModelParams(1.0, 0.55, 20)
        search = SearchConfig(grid_q=21, grid_theta=21)
        minima = find_local_minima(params, Surface.SACS_EVEN, search)

        assert minima
        energies = [m.total_energy for m in minima]
        assert energies == sorted(energies)
        for m in minima:
            assert m.gradient_norm < search.grad_tol
            assert min(m.hessian_eigs) > 0
            assert m.point.theta >= 0
            assert m.surface is Surface.SACS_EVEN

    def test_even_sacs_never_above_origin(self):
        """Test the global minimum is at most the decoupled energy."""
        params = ModelParams(1.0, 0.3, 20)
        minima = find_local_minima(params, Surface.SACS_EVEN, QUICK_SEARCH)

        assert minima[0].total_energy <= -10.0 + 1e-9

    def test_exact_surface_rejected(self):
        """Test the exact source has no landscape to search."""
        with pytest.raises(ValueError):
            find_local_minima(ModelParams(1.0, 0.5, 20), Surface.EXACT)

    def test_empty_grid_rejected(self):
        """Test a search grid without starts is rejected."""
        with pytest.raises(ValueError):
            find_local_minima(ModelParams(1.0, 0.5, 20), Surface.MEAN_FIELD,
                              SearchConfig(grid_q=0))


class TestMinimaNear:
    """Test the seeded search around known minima."""

    def test_recovers_seed_minimum(self):
        """Test seeding from a found minimum returns that minimum."""
        params = ModelParams(1.0, 0.7, 20)
        full = find_local_minima(params, Surface.MEAN_FIELD, QUICK_SEARCH)
        seeded = minima_near(params, Surface.MEAN_FIELD, [full[0].point], QUICK_SEARCH)

        assert len(seeded) == 1
        assert seeded[0].total_energy == pytest.approx(full[0].total_energy, rel=1e-12)
        assert seeded[0].distance_to(full[0]) <= QUICK_SEARCH.dedup_tol

    def test_follows_a_moving_minimum(self):
        """Test a seed from a nearby coupling still reaches the shifted minimum."""
        seed = find_local_minima(ModelParams(1.0, 0.7, 20), Surface.MEAN_FIELD, QUICK_SEARCH)[0]
        params = ModelParams(1.0, 0.705, 20)
        seeded = minima_near(params, Surface.MEAN_FIELD, [seed.point], QUICK_SEARCH)
        closed = mean_field_critical_points(params)[0]

        assert seeded[0].total_energy == pytest.approx(closed.total_energy, rel=1e-10)

    def test_no_seeds(self):
        """Test an empty seed list searches nothing."""
        assert minima_near(ModelParams(1.0, 0.7, 20), Surface.MEAN_FIELD, []) == []

    def test_exact_surface_rejected(self):
        """Test the exact source is rejected like in the grid search."""
        with pytest.raises(ValueError):
            minima_near(ModelParams(1.0, 0.5, 20), Surface.EXACT, [FieldMatterPoint(0.0, 0.0, 0.0)])


class TestLabelBasins:
    """Test basin labelling by |q|."""

    def test_two_minima(self):
        """Test smallest |q| becomes low_q."""
        far = _minimum(-3.0, 0.8, -11.0)
        near = _minimum(0.5, 0.2, -10.5)
        labelled = label_basins([far, near])

        assert labelled[0].basin_label is BasinLabel.HIGH_Q
        assert labelled[1].basin_label is BasinLabel.LOW_Q

    def test_lone_minimum_unlabelled(self):
        """Test a single minimum keeps no label."""
        assert label_basins([_minimum(1.0, 0.3, -10.0)])[0].basin_label is None


class TestSections:
    """Test the two-minima section and the surface grid."""

    def test_section_passes_through_both_minima(self):
        """Test the straight line contains both minima."""
        params = ModelParams(1.0, 0.55, 20)
        first, second = _minimum(0.5, 0.2, -10.5), _minimum(3.0, 0.9, -11.0)
        section = two_minima_section(params, "sacs_even", first, second, samples=21, extend=0.5)

        assert section.q.shape == (21,)
        assert section.q[0] == pytest.approx(0.5 - 0.5 * 2.5)
        assert section.q[-1] == pytest.approx(3.0 + 0.5 * 2.5)
        assert 0.5 in np.round(section.q, 12)
        assert np.all(np.isfinite(section.energy))

    def test_grid_shape_and_masked_ring(self):
        """Test rows follow theta, columns follow q, and the ring is masked."""
        params = ModelParams(1.0, 0.3, 4)
        grid = surface_grid(params, Surface.MEAN_FIELD, (-2.0, 2.0), (0.0, 0.5 * math.pi),
                            (21, 16), QUICK_SEARCH)

        assert grid.energies.shape == (16, 21)
        assert grid.mask[-1].all()
        assert np.isnan(grid.energies[-1]).all()
        assert not grid.mask[:-1].any()
        assert grid.energies[0, 10] == pytest.approx(
            float(surface_energy(params, Surface.MEAN_FIELD, 0.0, 0.0)))

    def test_grid_minimum_at_origin(self):
        """Test the discrete minimum of the normal phase sits at the origin cell."""
        params = ModelParams(1.0, 0.3, 4)
        grid = surface_grid(params, Surface.MEAN_FIELD, (-2.0, 2.0), (0.0, 1.2),
                            (21, 13), QUICK_SEARCH)

        assert (0, 10) in grid.grid_minima
        assert len(grid.minima) == 1
        assert grid.section is None

    def test_grid_rejects_reversed_range(self):
        """Test an empty range is rejected."""
        with pytest.raises(ValueError):
            surface_grid(ModelParams(1.0, 0.3, 4), Surface.MEAN_FIELD, (2.0, -2.0),
                         (0.0, 1.0), (5, 5))


@pytest.mark.slow
class TestTwoBasinWindow:
    """Test the two competing even-surface minima around gamma_c at N = 20."""

    @staticmethod
    def _minima(gamma):
        return find_local_minima(ModelParams(1.0, gamma, 20), Surface.SACS_EVEN)

    def test_low_q_deeper_below_crossing(self):
        """Test two minima at 0.550 with the small-|q| one lower."""
        minima = self._minima(0.550)

        assert len(minima) == 2
        assert minima[0].abs_q < minima[1].abs_q

    def test_near_degenerate_at_crossing(self):
        """Test the two minima at 0.552 differ by less than 1e-3 per atom."""
        minima = self._minima(0.552)

        assert len(minima) == 2
        assert abs(minima[0].total_energy - minima[1].total_energy) < 1e-3 * 20

    @pytest.mark.parametrize("gamma", [0.555, 0.560])
    def test_high_q_global_above_crossing(self, gamma):
        """Test the global minimum has moved to the large-|q| basin."""
        minima = self._minima(gamma)

        assert minima[0].abs_q > 1.5
