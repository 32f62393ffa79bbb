"""Stationary-phase tunneling time for the fractional rectangular barrier.

tau = d(theta)/dE - b k_alpha**(1-alpha)/(alpha D_alpha) + b/(2 sqrt(E))

d(theta)/dE = d/v, where d = X Y' - Y X' comes from differentiating the X/Y
expansion by the chain rule (the authoritative path). The printed closed
form for d is kept as ``d_numerator_closed`` purely for auditing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import AsymptoteNotValid, RegimeMismatch
from .finite_diff import fd_derivative
from .params import Geometry, Kinematics, geometry, kinematics, require_forbidden, validate_config
from .scattering import SCALE_XI, hyperbolic, phase_decomposition, v_denominator, xy_components

# full (possibly scaled) evaluation up to 2*xi = CROSSOVER_2XI, asymptote beyond
CROSSOVER_2XI = 600.0
# asymptotic form is only accepted once e**(-2 xi) < ASYMPTOTE_DAMPING
ASYMPTOTE_DAMPING = 1e-8

FULL = "full"
SCALED = "scaled"
ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class TimeBreakdown:
    dtheta_dE: float
    phase_b_term: float
    free_flight: float
    tau: float
    method: str


@dataclass(frozen=True)
class AsymptoteCoeffs:
    """Large-width coefficients: d(theta)/dE ~ b q' tau1 + tau2.

    ``tau2_literal`` evaluates the printed expression for the constant term,
    whose sin(2 beta) coefficient is twice the value obtained by expanding
    the phase; it is reported for comparison and never used.
    """

    tau1: float
    tau2: float
    slope: float
    tau2_literal: float


def _forbidden_kinematics(alpha, E, V, u, b=0.0):
    cfg = validate_config(alpha, V, E, u, b)
    kin = kinematics(cfg.alpha, cfg.E, cfg.V, cfg.u)
    if kin.q_alpha is None:
        raise RegimeMismatch(
            f"tunneling time needs E < V, got energy={E!r}, potential={V!r}", param="energy"
        )
    return kin, cfg.b


def _xy_derivatives(kin: Kinematics, geo: Geometry, scaled=False):
    """dX/dE and dY/dE through (eta, xi, eps+, eps-)."""
    ce, se = math.cos(geo.eta), math.sin(geo.eta)
    ch, sh = hyperbolic(geo.xi, scaled)
    cb, sb = math.cos(kin.beta), math.sin(kin.beta)
    ep, em = kin.eps_plus, kin.eps_minus

    deta = 0.0 if kin.alpha == 2.0 else kin.dq_dE * geo.b * math.cos(kin.gamma)
    dxi = kin.dq_dE * geo.b * math.sin(kin.gamma)

    # X and Y are the real and imaginary parts of a function of eta + i*xi,
    # hence X_eta = Y_xi and X_xi = -Y_eta
    x_eta = -se * ch + 0.5 * ep * cb * se * sh + 0.5 * em * sb * ce * ch
    x_xi = ce * sh - 0.5 * ep * cb * ce * ch + 0.5 * em * sb * se * sh
    y_eta, y_xi = -x_xi, x_eta

    x_ep, x_em = -0.5 * cb * ce * sh, 0.5 * sb * se * ch
    y_ep, y_em = 0.5 * cb * se * ch, 0.5 * sb * ce * sh

    dX = x_eta * deta + x_xi * dxi + x_ep * kin.deps_plus + x_em * kin.deps_minus
    dY = y_eta * deta + y_xi * dxi + y_ep * kin.deps_plus + y_em * kin.deps_minus
    return dX, dY


def d_numerator_direct(kin: Kinematics, geo: Geometry, scaled=False) -> float:
    """X dY/dE - Y dX/dE (times e**(-2 xi) when ``scaled``)."""
    require_forbidden(kin)
    X, Y = xy_components(kin, geo, scaled)
    dX, dY = _xy_derivatives(kin, geo, scaled)
    return X * dY - Y * dX


def _exp(x):
    return math.exp(x) if x < 709.0 else math.inf


def d_numerator_closed(kin: Kinematics, geo: Geometry, b=None, scaled=False) -> float:
    """Seven-term printed expression for the numerator, evaluated verbatim."""
    require_forbidden(kin)
    b = geo.b if b is None else b
    eta, xi = geo.eta, geo.xi
    be, ga = kin.beta, kin.gamma
    ep, em, dep, dem, dq = kin.eps_plus, kin.eps_minus, kin.deps_plus, kin.deps_minus, kin.dq_dE
    ch2, sh2 = hyperbolic(2.0 * xi, scaled)
    damp = math.exp(-2.0 * xi) if scaled else 1.0
    c2e, s2e = math.cos(2.0 * eta) * damp, math.sin(2.0 * eta) * damp
    # the squared hyperbolics grow like e**(4 xi); one factor stays unscaled
    grow = _exp(2.0 * xi) if scaled else 1.0
    quad = (ch2 * ch2 * math.sin(eta) ** 2 + sh2 * sh2 * math.cos(eta) ** 2) * grow
    return (
        0.5 * b * ep * dq * math.cos(be) * math.cos(ga) * ch2
        + 0.5 * b * em * dq * math.sin(be) * math.sin(ga) * c2e
        + 0.25 * dep * math.cos(be) * s2e
        - 0.5 * b * dq * (math.sin(ga) * s2e + math.cos(ga) * sh2)
        + 0.125 * b * dq * (s2e * math.sin(ga) - sh2 * math.cos(ga))
        * (ep ** 2 * math.cos(be) ** 2 + em ** 2 * math.sin(be) ** 2)
        + 0.125 * math.sin(2.0 * be) * quad * (em * dep - ep * dem)
        + 0.25 * dem * math.sin(be) * sh2
    )


def theta_at(alpha, E, V, b, u) -> float:
    """Transmission phase theta = atan2(Y, X) at one energy."""
    kin, b = _forbidden_kinematics(alpha, E, V, u, b)
    return phase_decomposition(kin, geometry(kin, b)).theta


def _dtheta(kin, geo):
    scaled = geo.xi > SCALE_XI
    return d_numerator_direct(kin, geo, scaled) / v_denominator(kin, geo, scaled), scaled


def dtheta_dE(alpha, E, V, b, u) -> float:
    kin, b = _forbidden_kinematics(alpha, E, V, u, b)
    return _dtheta(kin, geometry(kin, b))[0]


def asymptote(alpha, E, V, u) -> AsymptoteCoeffs:
    kin, _ = _forbidden_kinematics(alpha, E, V, u)
    return _asymptote(kin)


def _asymptote(kin: Kinematics) -> AsymptoteCoeffs:
    ep, em, dep, dem = kin.eps_plus, kin.eps_minus, kin.deps_plus, kin.deps_minus
    cb, sb = math.cos(kin.beta), math.sin(kin.beta)
    s2b = math.sin(2.0 * kin.beta)
    den = 1.0 + (ep ** 2 + em ** 2 + (ep ** 2 - em ** 2) * math.cos(2.0 * kin.beta)) / 8.0 - ep * cb
    tau1 = math.cos(kin.gamma) * ((ep * cb - 1.0) - 0.25 * (ep ** 2 * cb ** 2 + em ** 2 * sb ** 2)) / den
    cross = em * dep - dem * ep
    tau2 = (0.125 * s2b * cross + 0.5 * dem * sb) / den
    tau2_literal = (0.25 * s2b * cross + 0.5 * dem * sb) / den
    slope = kin.dq_dE * tau1 - kin.dk_dE + 1.0 / (2.0 * kin.k_free)
    return AsymptoteCoeffs(tau1=tau1, tau2=tau2, slope=slope, tau2_literal=tau2_literal)


def asymptotic_time(alpha, E, V, b, u) -> float:
    kin, b = _forbidden_kinematics(alpha, E, V, u, b)
    geo = geometry(kin, b)
    if not math.exp(-2.0 * geo.xi) < ASYMPTOTE_DAMPING:
        raise AsymptoteNotValid(
            f"2*xi = {2.0 * geo.xi:.6g} is too small for the large-width form "
            f"(need e^(-2 xi) < {ASYMPTOTE_DAMPING:g})",
            param="width",
        )
    c = _asymptote(kin)
    return b * c.slope + c.tau2


def tunneling_time(alpha, E, V, b, u) -> TimeBreakdown:
    kin, b = _forbidden_kinematics(alpha, E, V, u, b)
    geo = geometry(kin, b)
    phase_b = -b * kin.dk_dE + 0.0  # no negative zero at b = 0
    free = b / (2.0 * kin.k_free)
    if 2.0 * geo.xi > CROSSOVER_2XI:
        c = _asymptote(kin)
        dth = b * kin.dq_dE * c.tau1 + c.tau2
        method = ASYMPTOTIC
    else:
        dth, scaled = _dtheta(kin, geo)
        method = SCALED if scaled else FULL
    return TimeBreakdown(dtheta_dE=dth, phase_b_term=phase_b, free_flight=free,
                         tau=dth + phase_b + free, method=method)


def _check_qm(E, V):
    validate_config(2.0, V, E, 1.0)
    if not E < V:
        raise RegimeMismatch(f"need 0 < E < V, got energy={E!r}, potential={V!r}", param="energy")


def standard_qm_phase(E, V, b) -> float:
    k, q = math.sqrt(E), math.sqrt(V - E)
    return math.atan((k * k - q * q) / (2.0 * k * q) * math.tanh(q * b))


def standard_qm_time(E, V, b) -> float:
    """Phase time of the ordinary square barrier, by finite differences.

    Shares nothing with the fractional machinery; used as a reference.
    """
    _check_qm(E, V)
    h = min(1e-5 * E, 0.25 * (V - E), 0.25 * E)
    h = max(h, min(1e-7, 0.25 * (V - E)))
    value, _ = fd_derivative(lambda e: standard_qm_phase(e, V, b), E, h, lo=0.0, hi=V)
    return value


def hartman_limit_qm(E, V) -> float:
    _check_qm(E, V)
    return 1.0 / (math.sqrt(V - E) * math.sqrt(E))
