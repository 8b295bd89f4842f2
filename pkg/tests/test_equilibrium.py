import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from kfks.equilibrium import (
    discrete_maxwellian,
    discrete_maxwellian_field,
    maxwellian_pointwise,
)
from kfks.errors import DegenerateMomentsError, DomainError
from kfks.grids import VelocityGrid


def test_pointwise_at_mean():
    assert maxwellian_pointwise(1.0, 0.0, 5.0, 0.0) == pytest.approx(
        1.0 / math.sqrt(10.0 * math.pi), rel=1e-14
    )


def test_pointwise_scales_with_density():
    T, u = 3.7, 1.2
    assert maxwellian_pointwise(2.0, u, T, u) == pytest.approx(
        2.0 / math.sqrt(2.0 * math.pi * T), rel=1e-14
    )


def test_pointwise_standard_normal():
    assert maxwellian_pointwise(1.0, 0.0, 1.0, 1.0) == pytest.approx(
        math.exp(-0.5) / math.sqrt(2.0 * math.pi), rel=1e-14
    )


def test_pointwise_domain_errors():
    with pytest.raises(DomainError):
        maxwellian_pointwise(0.0, 0.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        maxwellian_pointwise(1.0, 0.0, -2.0, 0.0)


def _brute_moments(params, vg):
    a, b, c = params.a, params.b, params.c
    m0 = m1 = m2 = 0.0
    for vk in vg.velocities:
        e = math.exp(a + b * vk + c * vk * vk)
        m0 += e
        m1 += e * vk
        m2 += e * vk * vk / 2.0
    return vg.dv * m0, vg.dv * m1, vg.dv * m2


def test_discrete_maxwellian_matches_moments_exactly():
    vg = VelocityGrid(50, 15.0)
    E, params = discrete_maxwellian((1.0, 0.0, 2.5), vg)
    m0, m1, m2 = _brute_moments(params, vg)
    assert m0 == pytest.approx(1.0, rel=1e-12)
    assert m1 == pytest.approx(0.0, abs=1e-12)
    assert m2 == pytest.approx(2.5, rel=1e-12)
    assert np.all(E > 0)


def test_discrete_maxwellian_symmetric_for_zero_velocity():
    vg = VelocityGrid(50, 15.0)
    E, params = discrete_maxwellian((1.0, 0.0, 2.5), vg)
    assert abs(params.b) < 1e-14
    assert_allclose(E, E[::-1], rtol=1e-12)


def test_corrected_params_close_to_analytic():
    # quadrature error of the rectangle rule is tiny for T=5 on [-15, 15],
    # so the Newton correction barely moves the analytic seed
    vg = VelocityGrid(50, 15.0)
    _, params = discrete_maxwellian((1.0, 0.0, 2.5), vg)
    a_ref = math.log(1.0 / math.sqrt(10.0 * math.pi))
    # brute-force check that the analytic seed is already nearly consistent
    from kfks.equilibrium import EquilibriumParams

    m0, m1, m2 = _brute_moments(EquilibriumParams(a_ref, 0.0, -0.1), vg)
    assert abs(m0 - 1.0) < 1e-8 and abs(m2 - 2.5) < 1e-8
    assert abs(params.a - a_ref) < 1e-6
    assert abs(params.b - 0.0) < 1e-6
    assert abs(params.c - (-0.1)) < 1e-6


def test_fixed_point_of_own_moments():
    vg = VelocityGrid(40, 12.0)
    E, _ = discrete_maxwellian((1.3, 0.52, 2.0), vg)
    rho = vg.dv * E.sum()
    mom = vg.dv * (E @ vg.velocities)
    en = 0.5 * vg.dv * (E @ (vg.velocities**2))
    E2, _ = discrete_maxwellian((rho, mom, en), vg)
    assert_allclose(E2, E, rtol=1e-10)


def test_density_scaling_shifts_a_only():
    vg = VelocityGrid(50, 15.0)
    _, p1 = discrete_maxwellian((1.0, 0.4, 2.5), vg)
    _, p2 = discrete_maxwellian((2.0, 0.8, 5.0), vg)  # same (u, T), rho doubled
    assert p2.a - p1.a == pytest.approx(math.log(2.0), rel=1e-10)
    assert p2.b == pytest.approx(p1.b, rel=1e-10)
    assert p2.c == pytest.approx(p1.c, rel=1e-10)


def test_degenerate_inputs_rejected():
    vg = VelocityGrid(20, 10.0)
    with pytest.raises(DegenerateMomentsError):
        discrete_maxwellian((-1.0, 0.0, 1.0), vg)
    with pytest.raises(DegenerateMomentsError):
        discrete_maxwellian((1.0, 0.0, 0.0), vg)  # T = 0


def test_narrow_lattice_warns_on_tail_mass():
    vg = VelocityGrid(50, 6.0)  # T = 5 Maxwellian leaves ~0.7% mass past +/-6
    with pytest.warns(RuntimeWarning, match="tail mass"):
        E, _ = discrete_maxwellian_field(np.array([1.0]), np.array([0.0]), np.array([5.0]), vg)
    # the correction still restores the moments exactly
    assert vg.dv * E.sum() == pytest.approx(1.0, rel=1e-12)


def test_infeasible_target_raises_correction_failure():
    from kfks.errors import EquilibriumCorrectionError

    # on [-3, 3] no decaying exponential family reaches T = 5 (flat limit ~3)
    vg = VelocityGrid(50, 3.0)
    with pytest.raises(EquilibriumCorrectionError) as exc_info:
        with pytest.warns(RuntimeWarning, match="tail mass"):
            discrete_maxwellian_field(np.array([1.0]), np.array([0.0]), np.array([5.0]), vg)
    assert exc_info.value.residual is not None


def test_field_batch_matches_singletons():
    rng = np.random.default_rng(11)
    vg = VelocityGrid(50, 15.0)
    rho = rng.uniform(0.2, 2.0, size=7)
    u = rng.uniform(-1.5, 1.5, size=7)
    T = rng.uniform(1.0, 7.0, size=7)
    E, params = discrete_maxwellian_field(rho, u, T, vg)
    for j in range(7):
        en = 0.5 * rho[j] * (u[j] ** 2 + T[j])
        Ej, pj = discrete_maxwellian((rho[j], rho[j] * u[j], en), vg)
        assert_allclose(E[j], Ej, rtol=1e-12)
        assert params[j, 2] == pytest.approx(pj.c, rel=1e-10)
