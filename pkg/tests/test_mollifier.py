import warnings

import numpy as np
import pytest
from scipy import integrate

from src.egorovga.algebra.domain import Domain
from src.egorovga.algebra.mollifier import Kernel, build_kernel, cutoff_eval, kernel_eval, moment
from src.egorovga.algebra.quadrature import tanh_sinh_legendre
from src.egorovga.core.config import EgorovConfig
from src.egorovga.core.exceptions import ConditioningError, KernelError


class TestKernelBuild:
    def test_vanishing_moments(self, kernel):
        """Given the m=2 kernel, When its moments are integrated independently, Then moments 1 through 5 vanish."""
        assert kernel.q == 5
        assert moment(kernel, 0) == pytest.approx(1.0, abs=1e-10)
        for order in range(1, 6):
            assert abs(moment(kernel, order)) < 1e-10

    def test_first_nonvanishing_moment(self, kernel):
        """Given the m=2 kernel, When the sixth moment is integrated, Then it does not vanish."""
        assert abs(moment(kernel, 6)) > 1e-6

    def test_evaluation_rule_reproduces_moments(self, kernel):
        """Given the default per-axis rule, When the even moments of psi are summed on it, Then they are 1, 0, 0 to round-off."""
        nodes, weights = tanh_sinh_legendre(EgorovConfig().quadrature.nodes_per_axis)
        for k in range(kernel.m + 1):
            value = float(np.sum(weights * kernel.psi(nodes) * nodes ** (2 * k)))
            assert value == pytest.approx(1.0 if k == 0 else 0.0, abs=1e-12)

    def test_high_moment_integrates_without_warnings(self, kernel):
        """Given the sixth moment, When integrated adaptively, Then no IntegrationWarning escapes."""
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            assert abs(moment(kernel, 6)) > 1e-6
            assert abs(moment(kernel, 7)) < 1e-10

    def test_profile_is_even(self, kernel):
        """Given the profile psi, When evaluated at +-t, Then the values agree."""
        t = np.linspace(0.0, 0.99, 11)
        np.testing.assert_allclose(kernel.psi(t), kernel.psi(-t), rtol=1e-13, atol=1e-15)

    def test_too_many_moments_is_refused(self):
        """Given m above the supported maximum, When building, Then ConditioningError is raised."""
        with pytest.raises(ConditioningError):
            build_kernel(m=9)

    def test_negative_m_is_refused(self):
        """Given m=-1, When building, Then KernelError is raised."""
        with pytest.raises(KernelError):
            build_kernel(m=-1)

    def test_kernel_data_restores_polynomial(self, kernel):
        """Given a serialized kernel, When loaded back, Then the polynomial coefficients are unchanged."""
        restored = Kernel.from_dict(kernel.to_dict())
        assert restored.poly_coeffs == kernel.poly_coeffs
        assert restored.m == kernel.m


class TestKernelEvaluation:
    def test_support_is_rho_ball(self, kernel):
        """Given rho = 0.2, When evaluated at 0.3, Then the kernel is exactly zero."""
        assert kernel_eval(kernel, (0,), [[0.3]], 0.2)[0] == 0.0

    def test_scaling(self, kernel):
        """Given rho, When evaluated at the origin, Then the value is psi(0)/rho."""
        assert kernel_eval(kernel, (0,), [[0.0]], 0.1)[0] == pytest.approx(kernel.psi(0.0) / 0.1)

    def test_antiderivative_limits(self, kernel):
        """Given Psi, When evaluated at -1, 0 and 1, Then it returns 0, 1/2 and 1."""
        values = kernel.antiderivative(np.array([-1.0, 0.0, 1.0]))
        np.testing.assert_allclose(values, [0.0, 0.5, 1.0], atol=1e-8)


class TestCutoff:
    def test_plateau_and_boundary_layer(self, kernel):
        """Given (-1, 1) and rho = 0.01, When the cutoff is evaluated, Then it is 1 inside and 0 near the boundary."""
        dom = Domain.interval(-1.0, 1.0)
        values = cutoff_eval(kernel, dom, [[0.0], [0.5], [0.985], [-0.99]], 0.01)
        assert values[0] == pytest.approx(1.0, abs=1e-9)
        assert values[1] == pytest.approx(1.0, abs=1e-9)
        assert values[2] == 0.0
        assert values[3] == 0.0

    @pytest.mark.parametrize("x", [-0.975, -0.96, 0.0, 0.962, 0.968])
    def test_matches_direct_convolution(self, kernel, x):
        """Given (-1, 1) and rho = 0.01, When the indicator is convolved directly, Then it matches the cutoff."""
        rho = 0.01
        lower, upper = max(-1.0 + 3 * rho, x - rho), min(1.0 - 3 * rho, x + rho)
        direct, _ = integrate.quad(
            lambda y: float(kernel_eval(kernel, (0,), [[x - y]], rho)[0]),
            lower,
            upper,
            points=[x] if lower < x < upper else None,
            epsabs=1e-12,
            limit=200,
        )
        value = cutoff_eval(kernel, Domain.interval(-1.0, 1.0), [[x]], rho)[0]
        assert value == pytest.approx(direct, abs=1e-7)
