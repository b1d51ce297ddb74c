"""Scalar ODE comparison machinery: solutions of v' = G(v), the
decay-from-infinity profile via the tail-integral identity
int_{v(t)}^inf du/(-G(u)) = t, the bounded/unbounded dichotomy, and the
largest root of G with the long-time limit."""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad, solve_ivp as _scipy_solve_ivp
from scipy.optimize import brentq

from .errors import (
    BlowUpError,
    ConvergenceError,
    InconclusiveError,
    NoRootError,
    NotOsgoodError,
    SignError,
    TangencyWarning,
)
from .nonlinearity import tail_integral

__all__ = [
    "OdeMethod",
    "OdeSolution",
    "RootReport",
    "Dichotomy",
    "solve_ivp",
    "v_infinity",
    "dichotomy",
    "largest_root",
    "longtime_limit",
]

_OVERFLOW_GUARD = 1e100


class OdeMethod(Enum):
    AdaptiveIVP = "AdaptiveIVP"
    IntegralInversion = "IntegralInversion"


@dataclass(frozen=True)
class OdeSolution:
    """Solution values of v' = G(v) on an increasing time grid."""

    G_eval: Callable[[float], float]
    c: float  # initial condition; math.inf for the inverted profile
    t_grid: np.ndarray
    values: np.ndarray
    method: OdeMethod
    tol: float

    def __call__(self, t: float) -> float:
        return float(np.interp(t, self.t_grid, self.values))

    def to_csv(self, g_id: str = "G") -> str:
        """CSV (t, v) with header metadata lines."""
        buf = io.StringIO()
        buf.write(f"# G={g_id}\n# c={self.c!r}\n# method={self.method.value}\n"
                  f"# tol={self.tol!r}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "v"])
        for t, v in zip(self.t_grid, self.values):
            w.writerow([repr(float(t)), repr(float(v))])
        return buf.getvalue()


def _guarded_rhs(G_eval):
    def rhs(t, y):
        return [G_eval(max(float(y[0]), 0.0))]
    return rhs


def solve_ivp(G_eval, c: float, t_end: float, tol: float = 1e-8,
              t_grid: Sequence[float] | None = None) -> OdeSolution:
    """Adaptive stiff-capable IVP solution of v' = G(v), v(0) = c >= 0.

    Dense output is sampled on ``t_grid`` (default: 201 uniform points).
    Raises BlowUpError if the solution exceeds the overflow guard.
    """
    if c < 0.0 or not math.isfinite(c):
        raise ValueError("c must be finite and nonnegative")
    if tol <= 0.0 or t_end <= 0.0:
        raise ValueError("tol and t_end must be positive")

    if t_grid is None:
        t_grid = np.linspace(0.0, t_end, 201)
    t_grid = np.asarray(t_grid, dtype=float)

    def blow_up(t, y):
        return y[0] - _OVERFLOW_GUARD
    blow_up.terminal = True
    blow_up.direction = 1.0

    sol = _scipy_solve_ivp(_guarded_rhs(G_eval), (0.0, t_end), [c],
                           method="LSODA", rtol=tol,
                           atol=tol * 1e-4 * max(1.0, c),
                           dense_output=True, events=blow_up)
    if sol.status == 1:
        raise BlowUpError(f"solution exceeded {_OVERFLOW_GUARD:g} before t={t_end}")
    if not sol.success:
        raise ConvergenceError(f"IVP solver failed: {sol.message}")

    values = np.maximum(sol.sol(t_grid)[0], 0.0)
    return OdeSolution(G_eval, c, t_grid, values, OdeMethod.AdaptiveIVP, tol)


# --------------------------------------------------------------------------
# largest root
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RootReport:
    c0: float
    bracket: tuple[float, float]
    residual: float


def largest_root(G_eval, search_hi: float = 1e6,
                 n_scan: int = 2048) -> RootReport:
    """Largest sign change of G below ``search_hi``, refined by Brent.

    Requires eventual negativity (G < 0 on [search_hi, 10 search_hi]
    probes).  c0 = 0 when G < 0 on all of (0, search_hi] and G(0) = 0.
    Near-tangential zeros trigger TangencyWarning.
    """
    for u in np.geomspace(search_hi, 10.0 * search_hi, 8):
        if G_eval(float(u)) >= 0.0:
            raise NoRootError(f"G({u}) >= 0: eventual negativity violated")

    grid = np.geomspace(search_hi * 1e-12, search_hi, n_scan)
    vals = np.array([G_eval(float(u)) for u in grid])

    idx = None
    for i in range(len(grid) - 2, -1, -1):
        if vals[i] == 0.0:
            return RootReport(float(grid[i]), (float(grid[i]), float(grid[i])), 0.0)
        if vals[i] > 0.0 and vals[i + 1] < 0.0:
            idx = i
            break

    if idx is None:
        g0 = G_eval(0.0)
        if np.all(vals < 0.0):
            # a tangential zero shows as a value at machine zero relative to
            # its neighbors, without a sign change
            near = [i for i in range(1, len(grid) - 1)
                    if abs(vals[i]) <= 1e-14 * max(1.0, abs(vals[i - 1]),
                                                   abs(vals[i + 1]))]
            if near:
                j = near[-1]
                warnings.warn("near-tangential zero without sign change",
                              TangencyWarning)
                return RootReport(float(grid[j]),
                                  (float(grid[j]), float(grid[j])),
                                  float(abs(vals[j])))
            if abs(g0) <= 1e-12:
                return RootReport(0.0, (0.0, float(grid[0])), abs(g0))
        raise NoRootError("no sign change found below search_hi and G(0) != 0")

    lo, hi = float(grid[idx]), float(grid[idx + 1])
    c0 = float(brentq(G_eval, lo, hi, xtol=1e-13, rtol=4e-15, maxiter=300))
    return RootReport(c0, (lo, hi), abs(G_eval(c0)))


# --------------------------------------------------------------------------
# v_infinity by tail-integral inversion
# --------------------------------------------------------------------------

#: relative offset above the largest root where inversion hands off to the IVP
_HANDOFF_DELTA = 1e-3


def _tail_from(G_eval, v: float) -> float:
    """int_v^inf du/(-G(u)), head in u-space + doubling log-space tail."""
    res = tail_integral(G_eval, v, classify=False)
    if not res.convergent:
        raise NotOsgoodError("tail integral diverges")
    return res.value


def _root_floor(G_eval, search_hi: float) -> float:
    """Inversion floor c0 (1 + delta); 0 when G has no positive root."""
    try:
        rep = largest_root(G_eval, search_hi)
        c0 = rep.c0
    except NoRootError:
        c0 = 0.0
    return c0 * (1.0 + _HANDOFF_DELTA)


def v_infinity(G_eval, t: float, tol: float = 1e-8,
               search_hi: float = 1e6) -> float:
    """The decay-from-infinity value v with int_v^inf du/(-G(u)) = t.

    Inverts the monotone tail-integral map by bracketing plus Brent in
    log v; for t beyond the total integral down to the handoff level
    c0 (1 + delta) the remainder is integrated by the IVP, which is
    well-conditioned near roots.  Raises NotOsgoodError when the tail
    integral diverges.
    """
    if t <= 0.0:
        raise ValueError("t must be positive")

    floor = _root_floor(G_eval, search_hi)
    probe = max(10.0 * (floor + 1.0), 10.0)
    res = tail_integral(G_eval, probe, classify=True)
    if not res.convergent:
        raise NotOsgoodError("int^inf du/(-G) diverges; no finite profile exists")

    v_min = max(floor, 1e-12)
    t_total = None
    try:
        t_total = _tail_from(G_eval, v_min)
    except (NotOsgoodError, SignError):
        t_total = math.inf  # integrable at infinity but divergent at the floor

    if t_total is not None and t < t_total * (1.0 - 1e-12):
        # direct inversion: bracket in log v
        lo, hi = math.log(v_min), math.log(max(2.0 * v_min, 2.0))
        while _tail_from(G_eval, math.exp(hi)) > t:
            lo, hi = hi, hi + math.log(10.0)
            if hi > 700.0:
                raise ConvergenceError("bracket expansion exhausted")
        fn = lambda lv: _tail_from(G_eval, math.exp(lv)) - t
        if fn(lo) < 0.0:
            raise ConvergenceError("failed to bracket the inversion")
        lv = brentq(fn, lo, hi, xtol=max(tol * 1e-3, 1e-14), rtol=8.9e-16)
        return math.exp(lv)

    # handoff: invert down to the floor, then continue by IVP
    t_rem = t - t_total
    if t_rem <= 0.0:
        return v_min
    sol = solve_ivp(G_eval, v_min, t_rem, tol=min(tol, 1e-10),
                    t_grid=[0.0, t_rem])
    return float(sol.values[-1])


# --------------------------------------------------------------------------
# dichotomy and long-time limit
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Dichotomy:
    bounded: bool
    limit: float | None = None
    values: tuple = ()


def dichotomy(G_eval, t: float, c_sequence: Sequence[float],
              tol: float = 1e-6) -> Dichotomy:
    """Classify lim_{c->inf} v_c(t) as finite (with its value, cross-checked
    against v_infinity) or infinite.

    ``c_sequence`` must be increasing and span at least 6 decades.
    """
    cs = list(map(float, c_sequence))
    if any(b <= a for a, b in zip(cs, cs[1:])):
        raise ValueError("c_sequence must be increasing")
    if cs[-1] / cs[0] < 1e5:
        raise ValueError("c_sequence must reach across six decades of magnitude")

    vals = [solve_ivp(G_eval, c, t, tol=min(tol, 1e-9),
                      t_grid=[0.0, t]).values[-1] for c in cs]

    rel_change = abs(vals[-1] - vals[-2]) / max(1.0, abs(vals[-1]))
    if rel_change < tol:
        limit = float(vals[-1])
        try:
            vinf = v_infinity(G_eval, t, tol=min(tol, 1e-8))
        except NotOsgoodError:
            vinf = None
        if vinf is not None and abs(vinf - limit) > 10.0 * tol * max(1.0, abs(vinf)):
            raise InconclusiveError(
                f"IVP limit {limit} disagrees with inverted profile {vinf}")
        return Dichotomy(True, limit, tuple(vals))

    # not yet stabilized: judge by the per-decade increments.  A bounded
    # limit shows geometrically shrinking increments (extrapolate and
    # cross-check); escape to infinity shows increments that keep growing
    # with c.
    incs = [b - a for a, b in zip(vals, vals[1:])]
    increasing = all(d > 0.0 for d in incs)
    if increasing and incs[-1] > incs[-2] and incs[-1] > incs[0]:
        return Dichotomy(False, None, tuple(vals))
    if increasing and incs[-1] < incs[-2]:
        # slow convergence from below: v_c(t) lies on the same orbit as the
        # profile from infinity, delayed by tail(c) = int_c^inf du/(-G), so
        # v_c(t) = v_infinity(t + tail(c)) exactly.  Certify boundedness by
        # that identity at the largest c.
        try:
            vinf = v_infinity(G_eval, t, tol=min(tol, 1e-8))
            delay = tail_integral(G_eval, cs[-1], classify=False)
            pred = v_infinity(G_eval, t + delay.value, tol=min(tol, 1e-8)) \
                if delay.convergent else None
        except NotOsgoodError:
            pred = None
            vinf = None
        if pred is not None and abs(vals[-1] - pred) <= 10.0 * tol * max(1.0, abs(pred)):
            return Dichotomy(True, float(vinf), tuple(vals))
        if vinf is None and incs[-1] > 0.25 * incs[0]:
            # no profile from infinity exists, so the orbit identity
            # v_c(t) = v_inf(t + tail(c)) admits no finite limit; the
            # near-constant per-decade increments corroborate escape.
            return Dichotomy(False, None, tuple(vals))
    raise InconclusiveError(f"values at t neither stabilize nor diverge: {vals}")


def longtime_limit(G_eval, tol: float = 1e-6, t0: float = 1.0,
                   max_doublings: int = 60,
                   search_hi: float = 1e6) -> float:
    """lim_{t->inf} of the universal profile, cross-checked against the
    largest root of G.

    Uses v_infinity at doubling times; when the tail integral diverges the
    documented fallback is the IVP limit from a large initial value.
    """
    def probe(t: float) -> float:
        return v_infinity(G_eval, t, tol=min(tol * 1e-2, 1e-8),
                          search_hi=search_hi)

    try:
        prev = probe(t0)
        getter = probe
    except NotOsgoodError:
        def getter(t: float) -> float:
            return float(solve_ivp(G_eval, 1e6, t, tol=1e-10,
                                   t_grid=[0.0, t]).values[-1])
        prev = getter(t0)

    t = t0
    limit = None
    for _ in range(max_doublings):
        t *= 2.0
        cur = getter(t)
        if abs(cur - prev) < tol * max(1.0, abs(cur)):
            limit = cur
            break
        prev = cur
    if limit is None:
        raise ConvergenceError("doubling budget exhausted before stabilization")

    c0 = largest_root(G_eval, search_hi=search_hi).c0
    if abs(limit - c0) > 10.0 * tol * max(1.0, abs(c0)):
        raise ConvergenceError(
            f"long-time limit {limit} disagrees with largest root {c0}")
    return float(limit)
