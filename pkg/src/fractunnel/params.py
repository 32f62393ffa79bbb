"""Input validation and the energy-dependent scalars of a fractional barrier.

Units are fixed: hbar = 1, c = 1, 2m = 1 (so m = 1/2). Energies, widths and
times are dimensionless in these units and no function takes hbar or m.
The only physical scale left free is the characteristic velocity ``u``
entering the generalized diffusion coefficient.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import (
    AlphaOutOfRange,
    EnergyAtBarrierTop,
    NegativeWidth,
    NonPositive,
    RegimeMismatch,
)

MASS = 0.5

FORBIDDEN = "forbidden"
ALLOWED = "allowed"


@dataclass(frozen=True)
class Config:
    alpha: float
    V: float
    E: float
    u: float
    b: float

    @property
    def regime(self) -> str:
        return FORBIDDEN if self.E < self.V else ALLOWED


@dataclass(frozen=True)
class Kinematics:
    """Energy-dependent scalars for one (alpha, E, V, u).

    Forbidden-regime fields (``q_alpha``, ``dq_dE``, ``deps_plus``,
    ``deps_minus``) are None when E > V; ``kbar_alpha`` is None when E < V.
    In the allowed regime ``eps`` is (k_alpha / kbar_alpha)**(alpha - 1).
    """

    alpha: float
    E: float
    V: float
    u: float
    D_alpha: float
    k_alpha: float
    k_free: float
    dk_dE: float
    eps: float
    eps_plus: float
    eps_minus: float
    beta: float
    gamma: float
    q_alpha: Optional[float] = None
    dq_dE: Optional[float] = None
    deps_plus: Optional[float] = None
    deps_minus: Optional[float] = None
    kbar_alpha: Optional[float] = None

    @property
    def regime(self) -> str:
        return FORBIDDEN if self.E < self.V else ALLOWED


@dataclass(frozen=True)
class Geometry:
    eta: float
    xi: float
    b: float


def _check_real(name, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise NonPositive(f"{name} must be a real number, got {value!r}", param=name)
    if not math.isfinite(value):
        raise NonPositive(f"{name} must be finite, got {value!r}", param=name)


def validate_alpha(alpha):
    if isinstance(alpha, bool) or not isinstance(alpha, (int, float)) or not math.isfinite(alpha):
        raise AlphaOutOfRange(f"alpha must be a finite real in (1, 2], got {alpha!r}", param="alpha")
    if not 1.0 < alpha <= 2.0:
        raise AlphaOutOfRange(f"alpha must lie in (1, 2], got {alpha!r}", param="alpha")
    return float(alpha)


def validate_config(alpha, V, E, u, b=0.0) -> Config:
    """Gate every public entry point goes through.

    >>> validate_config(2, 10, 9, 1e-4, 1)
    Config(alpha=2.0, V=10.0, E=9.0, u=0.0001, b=1.0)
    """
    alpha = validate_alpha(alpha)
    for name, value in (("potential", V), ("energy", E), ("u", u)):
        _check_real(name, value)
        if value <= 0:
            raise NonPositive(f"{name} must be > 0, got {value!r}", param=name)
    _check_real("width", b)
    if b < 0:
        raise NegativeWidth(f"width must be >= 0, got {b!r}", param="width")
    if E == V:
        raise EnergyAtBarrierTop(
            f"energy equals the barrier height ({E!r}); the decay wavenumber vanishes",
            param="energy",
        )
    return Config(alpha, float(V), float(E), float(u), float(b))


def diffusion_coefficient(alpha: float, u: float) -> float:
    """D_alpha = u**(2 - alpha) / (alpha * m**(alpha - 1)) with m = 1/2.

    >>> diffusion_coefficient(2, 1e-4)
    1.0
    """
    return u ** (2.0 - alpha) / (alpha * MASS ** (alpha - 1.0))


def kinematics(alpha, E, V, u) -> Kinematics:
    cfg = validate_config(alpha, V, E, u)
    alpha, E, V, u = cfg.alpha, cfg.E, cfg.V, cfg.u
    D = diffusion_coefficient(alpha, u)
    k = (E / D) ** (1.0 / alpha)
    dk = k ** (1.0 - alpha) / (alpha * D)
    beta = (alpha - 1.0) / alpha * math.pi
    gamma = math.pi / alpha
    common = dict(alpha=alpha, E=E, V=V, u=u, D_alpha=D, k_alpha=k,
                  k_free=math.sqrt(E), dk_dE=dk, beta=beta, gamma=gamma)

    if E > V:
        kbar = ((E - V) / D) ** (1.0 / alpha)
        eps = (k / kbar) ** (alpha - 1.0)
        return Kinematics(eps=eps, eps_plus=eps + 1.0 / eps, eps_minus=eps - 1.0 / eps,
                          kbar_alpha=kbar, **common)

    q = ((V - E) / D) ** (1.0 / alpha)
    dq = -q ** (1.0 - alpha) / (alpha * D)
    eps = (k / q) ** (alpha - 1.0)
    # d(eps)/dE; eps+ pairs with (1 - eps**-2), eps- with (1 + eps**-2)
    deps = (alpha - 1.0) / alpha * V / (V - E) ** 2 * eps ** (1.0 / (1.0 - alpha))
    return Kinematics(
        eps=eps,
        eps_plus=eps + 1.0 / eps,
        eps_minus=eps - 1.0 / eps,
        q_alpha=q,
        dq_dE=dq,
        deps_plus=deps * (1.0 - eps ** -2),
        deps_minus=deps * (1.0 + eps ** -2),
        **common,
    )


def require_forbidden(kin: Kinematics):
    if kin.q_alpha is None:
        raise RegimeMismatch(
            f"energy {kin.E!r} is above the barrier {kin.V!r}; this needs E < V",
            param="energy",
        )


def geometry(kin: Kinematics, b: float) -> Geometry:
    require_forbidden(kin)
    if b < 0:
        raise NegativeWidth(f"width must be >= 0, got {b!r}", param="width")
    qb = kin.q_alpha * b
    # cos(pi/2) is 6e-17 in binary64; pin eta to zero at alpha = 2
    eta = 0.0 if kin.alpha == 2.0 else qb * math.cos(kin.gamma)
    return Geometry(eta=eta, xi=qb * math.sin(kin.gamma), b=float(b))
