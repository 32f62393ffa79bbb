import math

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from fractunnel.errors import (
    AlphaOutOfRange,
    EnergyAtBarrierTop,
    NegativeWidth,
    NonPositive,
    RegimeMismatch,
)
from fractunnel.finite_diff import fd_derivative
from fractunnel.params import diffusion_coefficient, geometry, kinematics, validate_config

alphas = st.floats(min_value=1.05, max_value=2.0)
energies = st.floats(min_value=0.5, max_value=9.5)
velocities = st.sampled_from([1e-4, 1e-2, 0.37, 1.0])


def test_validate_accepts_reference_parameters():
    cfg = validate_config(2, 10, 9, 1e-4, 1)
    assert (cfg.alpha, cfg.V, cfg.E, cfg.u, cfg.b) == (2.0, 10.0, 9.0, 1e-4, 1.0)
    assert cfg.regime == "forbidden"


@pytest.mark.parametrize("alpha", [1, 1.0, 0.5, 2.0000001, 3, float("nan"), float("inf")])
def test_alpha_out_of_range(alpha):
    with pytest.raises(AlphaOutOfRange):
        validate_config(alpha, 10, 9, 1e-4, 1)


@pytest.mark.parametrize("V,E,u", [(0, 9, 1e-4), (10, 0, 1e-4), (10, 9, 0), (-1, 9, 1e-4), (10, 9, -1e-4)])
def test_non_positive(V, E, u):
    with pytest.raises(NonPositive):
        validate_config(1.5, V, E, u, 1)


def test_negative_width():
    with pytest.raises(NegativeWidth):
        validate_config(1.5, 10, 9, 1e-4, -0.1)


def test_energy_at_barrier_top():
    with pytest.raises(EnergyAtBarrierTop) as info:
        validate_config(1.5, 10, 10, 1e-4, 1)
    assert info.value.param == "energy"


def test_diffusion_coefficient_alpha2():
    assert diffusion_coefficient(2, 1e-4) == 1.0
    assert diffusion_coefficient(2, 0.37) == 1.0


def test_diffusion_coefficient_alpha15_high_precision():
    mp.mp.dps = 40
    ref = mp.sqrt(mp.mpf("1e-4")) * mp.sqrt(2) / mp.mpf("1.5")
    assert diffusion_coefficient(1.5, 1e-4) == pytest.approx(float(ref), rel=1e-14)
    assert diffusion_coefficient(1.5, 1e-4) == pytest.approx(9.4281e-3, rel=1e-4)


def test_diffusion_continuity_at_two():
    for u in (1e-4, 1e-2, 1.0):
        d = diffusion_coefficient(2 - 1e-6, u)
        assert abs(d - 1.0) <= 1e-4


def test_kinematics_alpha2_reduces_to_standard():
    kin = kinematics(2, 9, 10, 1e-4)
    assert kin.k_alpha == pytest.approx(3.0, rel=1e-15)
    assert kin.q_alpha == pytest.approx(1.0, rel=1e-15)
    assert kin.eps == pytest.approx(3.0, rel=1e-15)
    assert kin.eps_plus == pytest.approx(10 / 3, rel=1e-15)
    assert kin.eps_minus == pytest.approx(8 / 3, rel=1e-15)
    assert kin.beta == kin.gamma == math.pi / 2
    assert kin.deps_minus == pytest.approx(50 / 27, rel=1e-14)


def test_eps_minus_derivative_alpha2_oracle():
    # V**2 / (2 k**3 q**3) with k = 3, q = 1
    closed = 10.0 ** 2 / (2 * 27)
    fd, _ = fd_derivative(lambda e: kinematics(2, e, 10, 1e-4).eps_minus, 9.0, lo=0, hi=10)
    assert fd == pytest.approx(closed, rel=1e-9)
    assert kinematics(2, 9, 10, 1e-4).deps_minus == pytest.approx(fd, rel=1e-9)


def test_kinematics_alpha15_high_precision():
    # 50-digit reference values
    kin = kinematics(1.5, 9, 10, 1e-4)
    assert kin.D_alpha == pytest.approx(0.0094280904158206336586779, rel=1e-13)
    assert kin.k_alpha == pytest.approx(96.949561051434767479168, rel=1e-13)
    assert kin.q_alpha == pytest.approx(22.407023732785823543737, rel=1e-13)
    assert kin.eps == pytest.approx(2.0800838230519041145300, rel=1e-13)
    assert kin.beta == pytest.approx(math.pi / 3, rel=1e-15)
    assert kin.gamma == pytest.approx(2 * math.pi / 3, rel=1e-15)


def test_allowed_regime_fields():
    kin = kinematics(2, 13, 10, 1e-4)
    assert kin.regime == "allowed"
    assert kin.q_alpha is None and kin.dq_dE is None
    assert kin.kbar_alpha == pytest.approx(math.sqrt(3), rel=1e-15)
    assert kin.eps == pytest.approx(math.sqrt(13 / 3), rel=1e-14)
    with pytest.raises(RegimeMismatch):
        geometry(kin, 1.0)


def test_geometry_examples():
    kin2 = kinematics(2, 9, 10, 1e-4)
    g = geometry(kin2, 5)
    assert (g.eta, g.xi) == (0.0, pytest.approx(5.0, rel=1e-15))
    g0 = geometry(kinematics(1.5, 9, 10, 1e-4), 0)
    assert g0.eta == 0.0 and g0.xi == 0.0
    g = geometry(kinematics(1.5, 9, 10, 1e-4), 0.1)
    assert g.eta == pytest.approx(-1.1203511866392911771, rel=1e-13)
    assert g.xi == pytest.approx(1.9405051775793342522, rel=1e-13)


@settings(max_examples=200, deadline=None)
@given(alphas, energies, velocities)
def test_eps_algebra_and_angles(alpha, E, u):
    kin = kinematics(alpha, E, 10, u)
    assert kin.eps_plus >= 2.0 - 1e-15
    assert kin.eps_plus ** 2 - kin.eps_minus ** 2 == pytest.approx(4.0, rel=1e-12)
    assert kin.beta + kin.gamma == pytest.approx(math.pi, abs=4 * math.ulp(math.pi))
    assert 0 < kin.beta <= math.pi / 2 and math.pi / 2 <= kin.gamma < math.pi
    assert kin.dq_dE < 0 < kin.dk_dE


@settings(max_examples=60, deadline=None)
@given(alphas, energies, velocities)
def test_closed_derivatives_match_richardson(alpha, E, u):
    kin = kinematics(alpha, E, 10, u)
    grab = lambda name: (lambda e: getattr(kinematics(alpha, e, 10, u), name))
    for value, name in [(kin.deps_plus, "eps_plus"), (kin.deps_minus, "eps_minus"),
                        (kin.dk_dE, "k_alpha"), (kin.dq_dE, "q_alpha")]:
        fd, _ = fd_derivative(grab(name), E, lo=0, hi=10)
        # eps+ is stationary where eps == 1; compare absolutely there
        assert abs(value - fd) <= 1e-8 * max(abs(fd), abs(kin.deps_minus))


@settings(max_examples=100, deadline=None)
@given(alphas, energies, st.floats(min_value=0, max_value=5))
def test_geometry_invariants(alpha, E, b):
    kin = kinematics(alpha, E, 10, 1e-2)
    g = geometry(kin, b)
    assert g.xi >= 0
    assert g.eta <= 0 if alpha < 2 else g.eta == 0
    assert g.eta ** 2 + g.xi ** 2 == pytest.approx((kin.q_alpha * b) ** 2, rel=1e-12, abs=1e-300)
