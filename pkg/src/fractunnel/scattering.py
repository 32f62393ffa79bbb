"""Transmission amplitude and the real X/Y split of the barrier denominator.

In the forbidden regime the denominator is written X - iY with

    X = cos(eta) cosh(xi) - 1/2 [eps+ cos(eta) sinh(xi) cos(beta)
                                 - eps- sin(eta) cosh(xi) sin(beta)]
    Y = -sin(eta) sinh(xi) + 1/2 [eps+ sin(eta) cosh(xi) cos(beta)
                                  + eps- cos(eta) sinh(xi) sin(beta)]

For xi > SCALE_XI every hyperbolic factor carries a common e**-xi so the
numbers stay finite; phases and ratios are unaffected by the shared factor.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import RegimeMismatch
from .params import ALLOWED, FORBIDDEN, Geometry, Kinematics, geometry, kinematics, require_forbidden, validate_config

SCALE_XI = 350.0


@dataclass(frozen=True)
class PhaseDecomposition:
    """X, Y and v are stored divided by e**log_scale (resp. e**(2 log_scale))."""

    X: float
    Y: float
    theta: float
    v: float
    b: float
    log_scale: float = 0.0

    @property
    def scaled(self) -> bool:
        return self.log_scale != 0.0


@dataclass(frozen=True)
class Transmission:
    amplitude: complex
    probability: float
    theta: float
    Phi: float
    regime: str


def hyperbolic(xi, scaled=False):
    """(cosh xi, sinh xi), optionally times e**-xi."""
    if scaled:
        t = math.exp(-2.0 * xi)
        return 0.5 * (1.0 + t), -0.5 * math.expm1(-2.0 * xi)
    return math.cosh(xi), math.sinh(xi)


def mu(kin: Kinematics, regime=None) -> complex:
    if regime is None:
        regime = kin.regime
    if regime not in (ALLOWED, FORBIDDEN):
        raise ValueError(f"unknown regime {regime!r}")
    if regime != kin.regime:
        raise RegimeMismatch(
            f"regime {regime!r} requested but E={kin.E!r}, V={kin.V!r} is {kin.regime}",
            param="energy",
        )
    if regime == ALLOWED:
        return complex(0.5 * kin.eps_plus, 0.0)
    return complex(0.5 * kin.eps_plus * math.cos(kin.beta),
                   -0.5 * kin.eps_minus * math.sin(kin.beta))


def xy_components(kin: Kinematics, geo: Geometry, scaled=False):
    require_forbidden(kin)
    ce, se = math.cos(geo.eta), math.sin(geo.eta)
    ch, sh = hyperbolic(geo.xi, scaled)
    cb, sb = math.cos(kin.beta), math.sin(kin.beta)
    ep, em = kin.eps_plus, kin.eps_minus
    X = ce * ch - 0.5 * (ep * ce * sh * cb - em * se * ch * sb)
    Y = -se * sh + 0.5 * (ep * se * ch * cb + em * ce * sh * sb)
    return X, Y


def v_denominator(kin: Kinematics, geo: Geometry, scaled=False) -> float:
    """Squared modulus of the denominator, from its trigonometric expansion."""
    require_forbidden(kin)
    ep2, em2 = kin.eps_plus ** 2, kin.eps_minus ** 2
    c2b = math.cos(2.0 * kin.beta)
    ch2, sh2 = hyperbolic(2.0 * geo.xi, scaled)
    damp = math.exp(-2.0 * geo.xi) if scaled else 1.0
    return (
        (8.0 - em2 - ep2 - (ep2 - em2) * c2b) * math.cos(2.0 * geo.eta) * damp
        + (8.0 + em2 + ep2 + (ep2 - em2) * c2b) * ch2
        + 8.0 * kin.eps_minus * math.sin(kin.beta) * math.sin(2.0 * geo.eta) * damp
        - 8.0 * kin.eps_plus * math.cos(kin.beta) * sh2
    ) / 16.0


def phase_decomposition(kin: Kinematics, geo: Geometry, scaled=None) -> PhaseDecomposition:
    if scaled is None:
        scaled = geo.xi > SCALE_XI
    X, Y = xy_components(kin, geo, scaled)
    return PhaseDecomposition(
        X=X, Y=Y, theta=math.atan2(Y, X), v=v_denominator(kin, geo, scaled),
        b=geo.b, log_scale=geo.xi if scaled else 0.0,
    )


def transmission(alpha, E, V, b, u) -> Transmission:
    cfg = validate_config(alpha, V, E, u, b)
    kin = kinematics(cfg.alpha, cfg.E, cfg.V, cfg.u)
    b = cfg.b
    plane = cmath.exp(-1j * kin.k_alpha * b)

    if kin.regime == ALLOWED:
        m = mu(kin).real
        arg = kin.kbar_alpha * b
        X, Y = math.cos(arg), m * math.sin(arg)
        theta = math.atan2(Y, X)
        return Transmission(plane / complex(X, -Y), 1.0 / (X * X + Y * Y),
                            theta, theta - kin.k_alpha * b, ALLOWED)

    pd = phase_decomposition(kin, geometry(kin, b))
    damp = math.exp(-pd.log_scale)
    # hypot first: X*X alone overflows just below the scaling threshold
    r = damp / math.hypot(pd.X, pd.Y)
    return Transmission(
        amplitude=plane * damp / complex(pd.X, -pd.Y),
        probability=r * r,
        theta=pd.theta,
        Phi=pd.theta - kin.k_alpha * b,
        regime=FORBIDDEN,
    )
