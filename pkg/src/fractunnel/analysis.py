"""Parameter sweeps and peak location of tau(b)."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from functools import partial
from typing import List, Optional, Tuple

import numpy as np

from .chronometry import tunneling_time
from .errors import BracketTooNarrow, FractunnelError, InvalidRange, NoInteriorMaximum
from .params import geometry, kinematics, validate_alpha, validate_config
from .scattering import transmission

VARIABLES = ("width", "alpha", "energy")
INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
SCAN_POINTS = 256
# default search reaches xi = DEFAULT_XI_MAX, well into the linear regime
DEFAULT_XI_MAX = 30.0


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    V: float
    E: float
    u: float
    b: float
    tau: float
    dtheta_dE: float
    phase_b_term: float
    free_flight: float
    probability: float
    method: str


COLUMNS = tuple(f.name for f in fields(SweepRow))


@dataclass(frozen=True)
class SweepTable:
    variable: str
    rows: List[SweepRow]

    def column(self, name):
        return np.array([getattr(r, name) for r in self.rows])


@dataclass(frozen=True)
class PeakResult:
    b_max: float
    tau_max: float
    bracket: Tuple[float, float]
    iterations: int
    tolerance: float


@dataclass(frozen=True)
class PeakRow:
    alpha: float
    V: float
    E: float
    u: float
    b_max: float
    tau_max: float
    iterations: int


PEAK_COLUMNS = tuple(f.name for f in fields(PeakRow))


def evaluate_point(alpha, V, E, u, b) -> SweepRow:
    t = tunneling_time(alpha, E, V, b, u)
    p = transmission(alpha, E, V, b, u).probability
    return SweepRow(alpha=float(alpha), V=float(V), E=float(E), u=float(u), b=float(b),
                    tau=t.tau, dtheta_dE=t.dtheta_dE, phase_b_term=t.phase_b_term,
                    free_flight=t.free_flight, probability=p, method=t.method)


def _point(variable, fixed, x):
    params = dict(fixed)
    params[{"width": "b", "alpha": "alpha", "energy": "E"}[variable]] = float(x)
    try:
        return evaluate_point(**params)
    except FractunnelError as exc:
        raise type(exc)(f"{exc} (at {variable}={float(x)!r})", param=exc.param) from exc


def sweep(variable, start, stop, steps, *, alpha=None, V=10.0, E=9.0, u=1e-4, b=None,
          workers=1) -> SweepTable:
    """Evaluate the tunneling time on a uniform grid, endpoints included.

    The swept quantity is ignored among the keyword parameters. Rows come
    back in grid order whatever ``workers`` is.
    """
    if variable not in VARIABLES:
        raise InvalidRange(f"unknown sweep variable {variable!r}; pick one of {VARIABLES}", param="var")
    if isinstance(steps, bool) or int(steps) != steps or steps < 2:
        raise InvalidRange(f"steps must be an integer >= 2, got {steps!r}", param="steps")
    if not (math.isfinite(start) and math.isfinite(stop) and start < stop):
        raise InvalidRange(f"need from < to, got from={start!r} to={stop!r}", param="from")

    fixed = {"alpha": alpha, "V": V, "E": E, "u": u, "b": b}
    missing = [k for k, v in fixed.items()
               if v is None and k != {"width": "b", "alpha": "alpha", "energy": "E"}[variable]]
    if missing:
        raise InvalidRange(f"missing fixed parameter(s): {', '.join(missing)}", param=missing[0])

    grid = np.linspace(start, stop, int(steps))
    func = partial(_point, variable, fixed)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(func, grid))
    else:
        rows = [func(x) for x in grid]
    return SweepTable(variable=variable, rows=rows)


def _sign_changes(values):
    s = np.sign(np.diff(values))
    s = s[s != 0]
    return np.nonzero(s[1:] != s[:-1])[0].size, s


def default_bracket(alpha, E, V, u):
    kin = kinematics(alpha, E, V, u)
    geo = geometry(kin, 1.0)
    return 0.0, DEFAULT_XI_MAX / geo.xi


def golden_max(f, a, b, tol):
    """Golden-section search for the maximum of a unimodal f on [a, b].

    Returns (x, f(x), iterations) with x the best point seen.
    """
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    best = max((fc, c), (fd, d))
    n = 0
    while b - a > tol:
        n += 1
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
            best = max(best, (fc, c))
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
            best = max(best, (fd, d))
    return best[1], best[0], n


def find_peak(alpha, E, V, u, bracket: Optional[Tuple[float, float]] = None, tol=1e-8,
              scan_points=SCAN_POINTS) -> PeakResult:
    alpha = validate_alpha(alpha)
    validate_config(alpha, V, E, u)
    if alpha == 2.0:
        raise NoInteriorMaximum("alpha = 2 approaches the Hartman plateau; tau(b) has no interior peak",
                                param="alpha")
    lo, hi = default_bracket(alpha, E, V, u) if bracket is None else map(float, bracket)
    if lo < 0:
        raise BracketTooNarrow(f"bracket must start at b >= 0, got {lo!r}", param="bracket-lo")
    if not hi - lo > 10.0 * tol:
        raise BracketTooNarrow(f"bracket [{lo!r}, {hi!r}] is narrower than 10*tol", param="bracket-hi")

    def tau(b):
        return tunneling_time(alpha, E, V, b, u).tau

    grid = np.linspace(lo, hi, max(int(scan_points), SCAN_POINTS))
    values = np.array([tau(b) for b in grid])
    changes, signs = _sign_changes(values)
    if changes != 1 or signs.size == 0 or signs[0] < 0:
        raise NoInteriorMaximum(
            f"tau(b) on [{lo:g}, {hi:g}] is not rise-then-fall "
            f"({changes} sign change(s) of the discrete slope) at alpha={alpha!r}",
            param="alpha",
        )
    i = int(np.argmax(values))
    if i == 0 or i == grid.size - 1:
        raise NoInteriorMaximum(f"maximum sits on the bracket edge at alpha={alpha!r}", param="alpha")
    b_max, tau_max, iters = golden_max(tau, grid[i - 1], grid[i + 1], tol)
    return PeakResult(b_max=float(b_max), tau_max=float(tau_max), bracket=(lo, hi),
                      iterations=iters, tolerance=tol)


def peak_curve(alpha_from, alpha_to, alpha_steps, E, V, u, tol=1e-8) -> List[PeakRow]:
    if isinstance(alpha_steps, bool) or int(alpha_steps) != alpha_steps or alpha_steps < 1:
        raise InvalidRange(f"steps must be an integer >= 1, got {alpha_steps!r}", param="steps")
    if alpha_steps == 1:
        alphas = np.array([float(alpha_from)])
    else:
        if not alpha_from < alpha_to:
            raise InvalidRange(f"need from < to, got {alpha_from!r}, {alpha_to!r}", param="from")
        alphas = np.linspace(alpha_from, alpha_to, int(alpha_steps))
    rows = []
    for a in alphas:
        a = float(a)
        if not 1.0 < a < 2.0:
            raise InvalidRange(f"peak curve needs alpha inside (1, 2), got {a!r}", param="alpha")
        try:
            p = find_peak(a, E, V, u, tol=tol)
        except FractunnelError as exc:
            raise type(exc)(f"{exc} (at alpha={a!r})", param=exc.param) from exc
        rows.append(PeakRow(alpha=a, V=float(V), E=float(E), u=float(u),
                            b_max=p.b_max, tau_max=p.tau_max, iterations=p.iterations))
    return rows


def unwrapped_phase(table: SweepTable) -> np.ndarray:
    """Net phase Phi along a sweep, unwrapped for reporting only."""
    phis = [transmission(r.alpha, r.E, r.V, r.b, r.u).Phi for r in table.rows]
    return np.unwrap(phis)
