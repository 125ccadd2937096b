"""Unit tests for the finite-N critical coupling search."""

import time

import pytest

from src.core.critical import critical_coupling, default_brackets, split_basins
from src.core.model import FieldMatterPoint, ModelParams, gamma_c_tdl
from src.core.optimizer import BasinLabel, LocalMinimum, Surface, order_parameters


def _minimum(q, theta, energy):
    point = FieldMatterPoint(q, 0.0, theta)
    return LocalMinimum(point, energy, (1.0, 1.0), order_parameters(ModelParams(), point),
                        1e-10, Surface.SACS_EVEN)


class TestHelpers:
    """Test bracket defaults and basin splitting."""

    def test_default_brackets(self):
        """Test brackets start at gamma_c_tdl with widths 0.3 and 0.6."""
        brackets = default_brackets(ModelParams(omega_a=1.0))

        assert brackets == [(0.5, pytest.approx(0.8)), (0.5, pytest.approx(1.1))]

    def test_default_brackets_follow_omega_a(self):
        """Test the lower end moves with sqrt(omega_a) / 2."""
        params = ModelParams(omega_a=4.0)
        assert default_brackets(params)[0][0] == gamma_c_tdl(params) == 1.0

    def test_split_basins(self):
        """Test the extreme |q| minima are returned as (low_q, high_q)."""
        low, high = split_basins([_minimum(-3.2, 0.9, -11.0), _minimum(0.4, 0.1, -10.9),
                                  _minimum(1.5, 0.5, -10.0)])

        assert low.point.q == 0.4 and low.basin_label is BasinLabel.LOW_Q
        assert high.point.q == -3.2 and high.basin_label is BasinLabel.HIGH_Q


class TestArguments:
    """Test argument validation."""

    def test_non_positive_tolerance(self):
        """Test tol <= 0 is rejected."""
        with pytest.raises(ValueError):
            critical_coupling(ModelParams(n_atoms=20), tol=0.0)

    def test_reversed_bracket(self):
        """Test a bracket with lo >= hi is rejected."""
        with pytest.raises(ValueError):
            critical_coupling(ModelParams(n_atoms=20), bracket=(0.6, 0.5))


@pytest.mark.slow
class TestCriticalCoupling:
    """Test the equal-depth coupling of the even surface."""

    @pytest.fixture(scope="class")
    def result(self):
        """gamma_c for the resonant N = 20 model with the default search."""
        return critical_coupling(ModelParams(1.0, 0.0, 20), "even", tol=1e-4)

    def test_location(self, result):
        """Test gamma_c lies above gamma_c_tdl at the known finite-N value."""
        assert 0.5 < result.gamma_c < 0.6
        assert result.gamma_c == pytest.approx(0.5523, abs=0.001)
        assert result.n_atoms == 20

    def test_bracket(self, result):
        """Test the final bracket is narrower than tol and contains gamma_c."""
        lo, hi = result.bracket
        assert hi - lo <= 1e-4
        assert lo <= result.gamma_c <= hi

    def test_equal_depth(self, result):
        """Test the two basins are degenerate within the gap tolerance."""
        assert abs(result.energy_gap_at_tol) <= result.gap_tolerance

    def test_basins_and_jump(self, result):
        """Test the crossing pairs a low-|q| and a high-|q| minimum."""
        low, high = result.minima_at_crossing

        assert low.basin_label is BasinLabel.LOW_Q
        assert high.basin_label is BasinLabel.HIGH_Q
        assert high.abs_q > low.abs_q
        assert result.order_param_jump[0] > 0
        assert result.order_param_jump[1] > 0

    def test_runs_within_budget(self):
        """Test a default N = 20 search finishes in under 10 s."""
        started = time.perf_counter()
        critical_coupling(ModelParams(1.0, 0.0, 20), "even", tol=1e-4)

        assert time.perf_counter() - started < 10.0


@pytest.mark.slow
class TestCriticalSequence:
    """Test gamma_c(N) approaches gamma_c_tdl from above."""

    ATOMS = (10, 20, 40, 80)

    @pytest.fixture(scope="class")
    def gammas(self):
        return [critical_coupling(ModelParams(1.0, 0.0, n), "even", tol=1e-4).gamma_c
                for n in self.ATOMS]

    def test_above_thermodynamic_limit(self, gammas):
        """Test every finite-N coupling lies above 1/2."""
        assert all(g > 0.5 for g in gammas)

    def test_strictly_decreasing(self, gammas):
        """Test gamma_c shrinks as N grows."""
        assert all(a > b for a, b in zip(gammas, gammas[1:]))

    def test_known_values(self, gammas):
        """Test the sequence matches 0.5822, 0.5523, 0.5344, 0.5232."""
        assert gammas == pytest.approx([0.5822, 0.5523, 0.5344, 0.5232], abs=0.002)
