"""Exact evaluation of the explicit super-solution families, their
derivative calculus, residual certification of the differential
inequalities, the numeric search for the time-growth constant K, and the
closed-form stationary-solution residual checks.

Two barrier families are implemented (1-D, where the radial constructions
specialize exactly):

* ``Thm1Barrier``: phi_R(x) = exp^(m+1)((R^2 - x^2)^-l), combined with the
  decay-from-infinity profile into the universal bound
  M_R(x,t) = exp(K(t+1)) phi_R(x) + v_inf(t).
* ``Thm3Barrier``: phi_R(x) = exp(((1+x^2)/(R^2-x^2))^l) and
  psi_R(x,t) = (phi_R(x) - 1) exp(K(t+1)), whose defining feature is that
  the certifying K does not depend on R.

Residual certificates are evaluated in scaled (division by the positive
factor exp(K(t+1)) phi_R) and log-space forms so that grids reaching the
blow-up rim stay inside double range.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DomainError,
    EnvelopeDominanceError,
    KExhaustedError,
)
from .nonlinearity import ReactionTerm, envelope
from .ode_oracle import v_infinity
from .operators import Operator1D

__all__ = [
    "BarrierFamily",
    "BarrierParams",
    "BarrierDerivatives",
    "ResidualReport",
    "StationaryWitness",
    "eval_phi",
    "eval_log_phi",
    "barrier_derivatives",
    "residual_thm1",
    "residual_thm3",
    "find_K",
    "origin_slice_min_K",
    "log_universal_bound",
    "residual_stationary",
    "annulus_barrier_Q",
    "model_absorption",
    "ex1_double_exp",
    "ex2_quadratic",
    "ex3_drifted",
    "barrier_grid",
]


class BarrierFamily(Enum):
    Thm1Barrier = "Thm1Barrier"
    Thm3Barrier = "Thm3Barrier"


@dataclass(frozen=True)
class BarrierParams:
    """Parameters (R, l, K, iterate level) of a super-solution family.

    The exponent must satisfy l*eps > 2 for the growth index eps of the
    absorption term the barrier is played against.
    """

    family: BarrierFamily
    R: float
    l: float
    K: float = 0.0
    iter_m: int = 0
    eps: float = 1.0

    def __post_init__(self):
        if self.R <= 0.0:
            raise ValueError("R must be positive")
        if self.family is BarrierFamily.Thm3Barrier and self.R <= 1.0:
            raise ValueError("Thm3Barrier requires R > 1")
        if self.l <= 0.0:
            raise ValueError("l must be positive")
        if self.iter_m < 0:
            raise ValueError("iter_m must be >= 0")
        if self.l * self.eps <= 2.0:
            raise ValueError(f"need l*eps > 2, got {self.l * self.eps}")

    def with_K(self, K: float) -> "BarrierParams":
        return BarrierParams(self.family, self.R, self.l, K, self.iter_m, self.eps)

    def with_R(self, R: float) -> "BarrierParams":
        return BarrierParams(self.family, R, self.l, self.K, self.iter_m, self.eps)


# --------------------------------------------------------------------------
# phi evaluation
# --------------------------------------------------------------------------

def _inner_h(params: BarrierParams, x: float) -> float:
    """The innermost exponent argument h(x) of the barrier."""
    R, l = params.R, params.l
    y = R * R - x * x
    if y <= 0.0:
        raise DomainError(f"|x| = {abs(x)} >= R = {R}")
    if params.family is BarrierFamily.Thm1Barrier:
        return y ** (-l)
    return ((1.0 + x * x) / y) ** l


def eval_log_phi(params: BarrierParams, x: float) -> float:
    """log phi_R(x) = exp^(m)(h(x)); finite whenever representable."""
    v = _inner_h(params, x)
    for _ in range(params.iter_m):
        v = math.exp(v)
    return v


def eval_phi(params: BarrierParams, x: float) -> float:
    """phi_R(x) = exp^(m+1)(h(x)).  Raises OverflowError (reported, not
    saturated) outside the representable window; use eval_log_phi there."""
    return math.exp(eval_log_phi(params, x))


# --------------------------------------------------------------------------
# derivative calculus
# --------------------------------------------------------------------------

def _h_derivatives(params: BarrierParams, x: float) -> tuple[float, float, tuple[float, float, float]]:
    """(h', h'', pieces of h'') at x.

    For Thm3Barrier the h'' pieces are the three closed-form summands that
    become the W_2, W_3, W_4 groups after the chain rule; for Thm1Barrier
    the split is (curvature, steepening, 0).
    """
    R, l = params.R, params.l
    y = R * R - x * x
    if y <= 0.0:
        raise DomainError(f"|x| = {abs(x)} >= R = {R}")
    if params.family is BarrierFamily.Thm1Barrier:
        h1 = 2.0 * l * x * y ** (-l - 1.0)
        p_a = 2.0 * l * y ** (-l - 1.0)
        p_b = 4.0 * l * (l + 1.0) * x * x * y ** (-l - 2.0)
        return h1, p_a + p_b, (p_a, p_b, 0.0)
    s = 1.0 + x * x
    Rp = R * R + 1.0
    h1 = 2.0 * l * x * s ** (l - 1.0) * Rp * y ** (-l - 1.0)
    p_w2 = 4.0 * l * (l - 1.0) * x * x * s ** (l - 2.0) * y ** (-l - 2.0) * Rp * Rp
    p_w3 = 8.0 * l * x * x * s ** (l - 1.0) * Rp * y ** (-l - 2.0)
    p_w4 = 2.0 * l * s ** (l - 1.0) * Rp * y ** (-l - 1.0)
    return h1, p_w2 + p_w3 + p_w4, (p_w2, p_w3, p_w4)


def _iterate_chain(params: BarrierParams, x: float) -> tuple[float, float]:
    """(D, dD/dh) where D = d exp^(m)/dh evaluated at h(x).

    D = prod_{j=1}^m E_j with E_j the j-fold exponential of h, and
    dD/dh = D * sum_j prod_{i<j} E_i.  For m = 0, D = 1 and dD/dh = 0.
    """
    m = params.iter_m
    if m == 0:
        return 1.0, 0.0
    h = _inner_h(params, x)
    Es = []
    v = h
    for _ in range(m):
        v = math.exp(v)
        Es.append(v)
    D = math.prod(Es)
    partial = 1.0
    acc = 0.0
    for j in range(m):
        acc += partial          # prod_{i=1}^{j-1} E_i
        partial *= Es[j]
    return D, D * acc


@dataclass(frozen=True)
class BarrierDerivatives:
    """Closed-form decomposition of L phi / phi at a point.

    ``w_terms`` holds the five-group split for Thm3Barrier
    (chain-squared, curvature, cross, trace, drift) and the analogous
    (second-order, drift) groups padded with zeros for Thm1Barrier.  The
    groups always sum to ``lphi_over_phi``.
    """

    lphi_over_phi: float
    w_terms: tuple[float, ...]
    dpsi_dt_over_psi: float  # K for Thm3Barrier; K for the Thm1 barrier part
    log_phi: float


def barrier_derivatives(params: BarrierParams, operator: Operator1D,
                        x: float, t: float = 0.0) -> BarrierDerivatives:
    """Exact 1-D derivative decomposition of the barrier at (x, t).

    L phi / phi = a(x) [D h'' + (D^2 + dD/dh) h'^2] + b(x) D h', where D is
    the iterate chain factor (D = 1 at iterate level 0).
    """
    a, b = operator.a(x), operator.b(x)
    h1, h2, pieces = _h_derivatives(params, x)
    D, D_h = _iterate_chain(params, x)
    w_sq = a * (D * D + D_h) * h1 * h1
    w_pieces = tuple(a * D * p for p in pieces)
    w_drift = b * D * h1
    total = w_sq + sum(w_pieces) + w_drift
    return BarrierDerivatives(
        lphi_over_phi=total,
        w_terms=(w_sq,) + w_pieces + (w_drift,),
        dpsi_dt_over_psi=params.K,
        log_phi=eval_log_phi(params, x),
    )


# --------------------------------------------------------------------------
# residual reports
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ResidualReport:
    """Grid certificate for a barrier differential inequality.

    ``residual_values`` are the scaled residuals (divided by the positive
    factor exp(K(t+1)) phi_R), so the sign certificate is unchanged and the
    numbers stay representable up to the grid margin.
    """

    family: BarrierFamily
    R: float
    l: float
    K_used: float
    xs: np.ndarray
    ts: np.ndarray
    residual_values: np.ndarray  # shape (nt, nx)
    max_residual: float
    sign_certified: bool
    worst_point: tuple[float, float]
    extras: dict = field(default_factory=dict)

    def to_json(self) -> str:
        margin = 1.0 - max(abs(float(self.xs[0])), abs(float(self.xs[-1]))) / self.R
        rec = {
            "schema": 1,
            "family": self.family.value,
            "R": self.R,
            "l": self.l,
            "K": self.K_used,
            "grid": {"nx": int(len(self.xs)), "nt": int(len(self.ts)),
                     "margins": margin},
            "max_residual": self.max_residual,
            "sign_certified": bool(self.sign_certified),
            "worst_point": list(self.worst_point),
            "extras": {k: v for k, v in self.extras.items()
                       if isinstance(v, (int, float, str, bool))},
        }
        return json.dumps(rec, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "t", "residual"])
        for i, t in enumerate(self.ts):
            for j, x in enumerate(self.xs):
                w.writerow([repr(float(x)), repr(float(t)),
                            repr(float(self.residual_values[i, j]))])
        return buf.getvalue()


def barrier_grid(R: float, nx: int, nt: int, T: float,
                 margin: float = 1e-3, t_min: float = 1e-3
                 ) -> tuple[np.ndarray, np.ndarray]:
    """Interior grid |x| <= R (1 - margin), t in [t_min, T]; the rim and
    t = 0 are covered by the monotone blow-up invariant, not evaluation."""
    xs = np.linspace(-R * (1.0 - margin), R * (1.0 - margin), nx)
    ts = np.linspace(t_min, T, nt)
    return xs, ts


def model_absorption(eps: float) -> Callable[[float], float]:
    """Q(u) = -u (log u)^(2+eps), the model absorption rate for u >= 1."""
    def Q(u: float) -> float:
        if u <= 0.0:
            raise DomainError("model absorption needs u > 0")
        lg = math.log(u)
        if lg < 0.0:
            return -u * lg * abs(lg) ** (1.0 + eps)  # odd extension below u=1
        return -u * lg ** (2.0 + eps)
    return Q


def _dominance_onset(env, majorant, probes) -> float | None:
    """Smallest probe above which env(u) <= majorant(u) holds at every
    larger probe; None when dominance never sets in."""
    ok_from = None
    for u in probes:
        if env(u) <= majorant(u) * (1.0 - 1e-12) + 1e-12:
            if ok_from is None:
                ok_from = u
        else:
            ok_from = None
    return ok_from


# --------------------------------------------------------------------------
# Thm1Barrier certificate
# --------------------------------------------------------------------------

def origin_slice_min_K(params: BarrierParams, operator: Operator1D) -> float:
    """Closed-form minimal K for the simplified majorant on the x = 0 slice:
    L phi / phi (0) - R^(-2l(2+eps))."""
    d = barrier_derivatives(params, operator, 0.0)
    return d.lphi_over_phi - (params.R ** 2) ** (-(2.0 + params.eps) * params.l)


def residual_thm1(params: BarrierParams, operator: Operator1D,
                  term: ReactionTerm, xs: np.ndarray, ts: np.ndarray,
                  u0: float | None = None,
                  with_true_residual: bool = True) -> ResidualReport:
    """Certify the universal-bound barrier inequality
    L M_R + f(x, M_R) - dM_R/dt <= 0 via the scaled simplified majorant
    B(x) = L phi/phi - (R^2-x^2)^(-(2+eps) l) - K.

    The envelope of ``term`` must be dominated by the model absorption
    -u (log u)^(2+eps) above u0 (checked on probes); exp(K) must exceed u0.
    Where the barrier is representable in doubles the true residual (with
    the decay-from-infinity profile of the model absorption) is evaluated
    as well and recorded in ``extras``.
    """
    if params.family is not BarrierFamily.Thm1Barrier:
        raise ValueError("residual_thm1 needs a Thm1Barrier")
    if params.iter_m != 0:
        raise NotImplementedError("thm1 certificate implemented at iterate level 0")
    eps = params.eps
    Q = model_absorption(eps)

    env = envelope(term, params.R)
    probes = np.geomspace(1.5, 1e8, 160)
    onset = _dominance_onset(env, Q, probes)
    if onset is None:
        raise EnvelopeDominanceError(
            "envelope is not dominated by -u (log u)^(2+eps) on probes")
    u0 = float(onset) if u0 is None else float(u0)
    if params.K <= math.log(max(u0, 1.0)):
        return ResidualReport(params.family, params.R, params.l, params.K,
                              xs, ts, np.full((len(ts), len(xs)), np.inf),
                              math.inf, False, (float(xs[0]), float(ts[0])),
                              {"reason": "exp(K) <= u0"})

    R, l, K = params.R, params.l, params.K
    B = np.empty(len(xs))
    for j, x in enumerate(xs):
        d = barrier_derivatives(params, operator, float(x))
        y = R * R - x * x
        B[j] = d.lphi_over_phi - y ** (-(2.0 + eps) * l) - K
    values = np.tile(B, (len(ts), 1))

    extras: dict = {"u0": u0, "scaled": True}
    if with_true_residual:
        vinf = {float(t): v_infinity(Q, float(t), tol=1e-9) for t in ts}
        worst_true = -math.inf
        n_pts = 0
        for i, t in enumerate(ts):
            expo = K * (t + 1.0)
            for j, x in enumerate(xs):
                lp = eval_log_phi(params, float(x))
                if expo + lp > 300.0:
                    continue
                bar = math.exp(expo + lp)
                M = bar + vinf[float(t)]
                d = barrier_derivatives(params, operator, float(x))
                res = bar * d.lphi_over_phi + term.evaluator(float(x), M) \
                    - K * bar - Q(vinf[float(t)])
                worst_true = max(worst_true, res / max(bar, 1.0))
                n_pts += 1
        extras["true_residual_points"] = n_pts
        extras["true_residual_max_scaled"] = worst_true if n_pts else None

    max_res = float(values.max())
    jmax = int(np.argmax(B))
    certified = max_res <= 0.0
    if certified and extras.get("true_residual_points"):
        certified = extras["true_residual_max_scaled"] <= 1e-9
    return ResidualReport(params.family, R, l, K, xs, ts, values, max_res,
                          certified, (float(xs[jmax]), float(ts[0])), extras)


# --------------------------------------------------------------------------
# Thm3Barrier certificate
# --------------------------------------------------------------------------

def _split_constants(term: ReactionTerm, eps: float,
                     M0: float | None, C0: float | None) -> tuple[float, float]:
    """Defaults for the linear/absorption split: f <= C0 u for u <= M0 and
    f <= -u (log u)^(2+eps) for u >= M0, checked on probes."""
    env = envelope(term, math.inf)
    Q = model_absorption(eps)
    if M0 is None:
        onset = _dominance_onset(env, Q, np.geomspace(1.5, 1e8, 160))
        if onset is None:
            raise EnvelopeDominanceError(
                "no M0 with env(u) <= -u (log u)^(2+eps) above it")
        M0 = max(float(onset), 1.0 + 1e-9)
    else:
        for u in np.geomspace(M0, 1e8, 80):
            if env(float(u)) > Q(float(u)) * (1.0 - 1e-12) + 1e-12:
                raise EnvelopeDominanceError(f"env({u}) above model absorption")
    if C0 is None:
        lows = np.geomspace(1e-8, M0, 80)
        C0 = max(1e-6, max(env(float(u)) / float(u) for u in lows))
    else:
        for u in np.geomspace(1e-8, M0, 80):
            if env(float(u)) > C0 * float(u) * (1.0 + 1e-9) + 1e-12:
                raise EnvelopeDominanceError(f"env({u}) above C0 u")
    return float(M0), float(C0)


def _log_expm1(h: np.ndarray) -> np.ndarray:
    """log(e^h - 1), stable across magnitudes."""
    out = np.empty_like(h)
    small = h < 30.0
    out[small] = np.log(np.expm1(h[small]))
    out[~small] = h[~small]
    return out


def residual_thm3(params: BarrierParams, operator: Operator1D,
                  term: ReactionTerm, xs: np.ndarray, ts: np.ndarray,
                  M0: float | None = None, C0: float | None = None
                  ) -> ResidualReport:
    """Certify the zero-data uniqueness barrier inequality
    L psi_R - dpsi_R/dt + f(x, psi_R) <= 0 through the five-way scaled
    split: at each grid point, each derivative group W_i must satisfy the
    linear-regime inequality (psi <= M0) or the absorption-regime
    inequality (psi >= M0); at the splice both are required.

    The residual values reported are the scaled aggregates; per-group worst
    cases land in ``extras``.
    """
    if params.family is not BarrierFamily.Thm3Barrier:
        raise ValueError("residual_thm3 needs a Thm3Barrier")
    if params.iter_m != 0:
        raise NotImplementedError("thm3 certificate implemented at iterate level 0")
    eps, K = params.eps, params.K
    M0, C0 = _split_constants(term, eps, M0, C0)
    operator.check_linear_growth(params.R)

    n_w = 5
    W = np.empty((n_w, len(xs)))
    h_arr = np.empty(len(xs))
    for j, x in enumerate(xs):
        d = barrier_derivatives(params, operator, float(x))
        W[:, j] = d.w_terms
        h_arr[j] = d.log_phi

    one_minus_inv_phi = -np.expm1(-h_arr)          # 1 - 1/phi
    log_phi_m1 = _log_expm1(h_arr)                 # log(phi - 1)
    log_M0 = math.log(M0)

    values = np.empty((len(ts), len(xs)))
    worst_group = np.full(n_w, -np.inf)
    certified = True
    worst = (-np.inf, (float(xs[0]), float(ts[0])))
    for i, t in enumerate(ts):
        log_psi = log_phi_m1 + K * (t + 1.0)
        in_a = log_psi <= log_M0 + 1e-12
        in_b = log_psi >= log_M0 - 1e-12
        lin = 0.2 * (K - C0) * one_minus_inv_phi
        absb = 0.2 * K * one_minus_inv_phi \
            + 0.2 * one_minus_inv_phi * np.maximum(log_psi, 0.0) ** (2.0 + eps)
        point_worst = np.full(len(xs), -np.inf)
        for g in range(n_w):
            ca = np.where(in_a, W[g] - lin, -np.inf)
            cb = np.where(in_b, W[g] - absb, -np.inf)
            both = np.maximum(ca, cb)
            point_worst = np.maximum(point_worst, both)
            worst_group[g] = max(worst_group[g], float(both.max()))
        # aggregate (sum of groups against the full right-hand side)
        agg_a = np.where(in_a, W.sum(axis=0) - 5.0 * lin, -np.inf)
        agg_b = np.where(in_b, W.sum(axis=0) - 5.0 * absb, -np.inf)
        agg = np.maximum(agg_a, agg_b)
        values[i] = np.maximum(point_worst, agg)
        jmax = int(np.argmax(values[i]))
        if values[i, jmax] > worst[0]:
            worst = (float(values[i, jmax]), (float(xs[jmax]), float(t)))

    max_res = float(values.max())
    certified = max_res <= 0.0 and K >= C0
    extras = {"M0": M0, "C0": C0,
              **{f"worst_W{g + 1}": float(worst_group[g]) for g in range(n_w)}}
    return ResidualReport(params.family, params.R, params.l, K, xs, ts,
                          values, max_res, certified, worst[1], extras)


# --------------------------------------------------------------------------
# K search
# --------------------------------------------------------------------------

def find_K(params: BarrierParams, operator: Operator1D, term: ReactionTerm,
           xs: np.ndarray, ts: np.ndarray,
           K_range: tuple[float, float] = (1.0, 1e18),
           rel_tol: float = 1e-3,
           ladder_doublings: int = 3) -> float:
    """Smallest certifying K on a doubling-then-bisection schedule.

    The candidate must certify on the given grid and survive one 2x grid
    refinement; for Thm3Barrier it must additionally certify, unchanged, on
    the radius ladder R * 2^j, j = 0..ladder_doublings (the R-uniformity
    that drives the R -> infinity limit).
    """
    thm3 = params.family is BarrierFamily.Thm3Barrier

    def certified(K: float, refine: bool = False) -> bool:
        grids = [(xs, ts)]
        if refine:
            grids.append((np.linspace(xs[0], xs[-1], 2 * len(xs) - 1),
                          np.linspace(ts[0], ts[-1], 2 * len(ts) - 1)))
        for gx, gt in grids:
            if thm3:
                for j in range(ladder_doublings + 1):
                    p = params.with_K(K).with_R(params.R * 2.0 ** j)
                    scale = p.R / params.R
                    rep = residual_thm3(p, operator, term, gx * scale, gt)
                    if not rep.sign_certified:
                        return False
            else:
                rep = residual_thm1(params.with_K(K), operator, term, gx, gt,
                                    with_true_residual=False)
                if not rep.sign_certified:
                    return False
        return True

    K_lo, K_hi = K_range
    K = max(K_lo, 1e-6)
    while not certified(K):
        K *= 2.0
        if K > K_hi:
            raise KExhaustedError(f"no certificate up to K = {K_hi:g}")
    good = K
    bad = K / 2.0 if K > max(K_lo, 1e-6) else 0.0
    while good - bad > rel_tol * good:
        mid = 0.5 * (good + bad)
        if certified(mid):
            good = mid
        else:
            bad = mid
    if not certified(good, refine=True):
        # refinement instability: pad until the refined grid certifies too
        while not certified(good, refine=True):
            good *= 1.25
            if good > K_hi:
                raise KExhaustedError("refinement-stable certificate not found")
    return good


def log_universal_bound(params: BarrierParams, x: float, t: float,
                        v_inf_value: float) -> float:
    """log M_R(x,t) = log(exp(K(t+1)) phi_R(x) + v_inf(t)), computed in
    log-space so enormous K remain usable."""
    lb = params.K * (t + 1.0) + eval_log_phi(params, x)
    lv = math.log(v_inf_value)
    hi, lo = max(lb, lv), min(lb, lv)
    return hi + math.log1p(math.exp(lo - hi))


# --------------------------------------------------------------------------
# stationary witnesses
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class StationaryWitness:
    """Closed-form unbounded stationary solution with its operator and
    reaction term; LW + f(x, W) vanishes identically."""

    name: str
    W_eval: Callable[[float], float]
    LW_eval: Callable[[float], float]
    f_eval: Callable[[float, float], float]
    operator: Operator1D
    excluded: tuple[float, float] | None = None  # open collar to skip


def _exp_tower_derivs(x: float, level: int) -> tuple[float, float, float]:
    """(W, W', W'') for the level-fold exponential tower of x."""
    v, d1, d2 = x, 1.0, 0.0
    for _ in range(level):
        e = math.exp(v)
        v, d1, d2 = e, e * d1, e * (d2 + d1 * d1)
    return v, d1, d2


def ex1_double_exp(level: int = 1, shift: float = 0.0) -> StationaryWitness:
    """W(x) = exp-tower of (x + shift) against L = d^2/dx^2.

    level 1: f(u) = -u((log u)^2 + log u);
    level 2: f(u) = -u((log u)^2 (loglog u)^2 + log u (loglog u)^2
    + log u loglog u) (the full product-rule expansion; see ledger)."""
    if level not in (1, 2):
        raise ValueError("implemented for tower levels 1 and 2")
    op = Operator1D(lambda x: 1.0, lambda x: 0.0, growth_cert=(1.0, 0.0))

    def W(x: float) -> float:
        return _exp_tower_derivs(x + shift, level + 1)[0]

    def LW(x: float) -> float:
        return _exp_tower_derivs(x + shift, level + 1)[2]

    if level == 1:
        def f(x: float, u: float) -> float:
            lg = math.log(u)
            return -u * (lg * lg + lg)
    else:
        def f(x: float, u: float) -> float:
            lg = math.log(u)
            ll = math.log(lg)
            return -u * (lg * lg * ll * ll + lg * ll * ll + lg * ll)

    return StationaryWitness(f"ex1_level{level}", W, LW, f, op)


def ex2_quadratic(eps: float = 1.0) -> StationaryWitness:
    """W(x) = 1 + x^2 against L = (1+x^2)^(1+eps) d^2/dx^2 and
    f(u) = -2 u^(1+eps)."""
    op = Operator1D(lambda x: (1.0 + x * x) ** (1.0 + eps), lambda x: 0.0)
    W = lambda x: 1.0 + x * x
    LW = lambda x: 2.0 * (1.0 + x * x) ** (1.0 + eps)
    f = lambda x, u: -2.0 * u ** (1.0 + eps)
    return StationaryWitness(f"ex2_eps{eps:g}", W, LW, f, op)


def ex3_drifted(eps: float = 1.0) -> StationaryWitness:
    """W(x) = x^2 against L = d^2/dx^2 + (1+x^2)^(1/2+eps) sgn(x) d/dx and
    f(x,u) = -2 - 2 (1+u)^(1/2+eps) u^(1/2); the sgn drift is discontinuous
    at 0, so a collar around the origin is excluded from residual grids."""
    op = Operator1D(lambda x: 1.0,
                    lambda x: (1.0 + x * x) ** (0.5 + eps) * math.copysign(1.0, x)
                    if x != 0.0 else 0.0)
    W = lambda x: x * x
    LW = lambda x: 2.0 + 2.0 * abs(x) * (1.0 + x * x) ** (0.5 + eps)
    f = lambda x, u: -2.0 - 2.0 * (1.0 + u) ** (0.5 + eps) * math.sqrt(u)
    return StationaryWitness(f"ex3_eps{eps:g}", W, LW, f, op,
                             excluded=(-1e-6, 1e-6))


def residual_stationary(witness: StationaryWitness,
                        grid: Sequence[float]) -> float:
    """max over the grid of |LW + f(x, W)| / max(1, |LW|), skipping the
    witness's excluded collar."""
    worst = 0.0
    for x in grid:
        x = float(x)
        if witness.excluded is not None and witness.excluded[0] < x < witness.excluded[1]:
            continue
        lw = witness.LW_eval(x)
        res = lw + witness.f_eval(x, witness.W_eval(x))
        worst = max(worst, abs(res) / max(1.0, abs(lw)))
    return worst


# --------------------------------------------------------------------------
# annulus barrier of the nonuniqueness construction
# --------------------------------------------------------------------------

def annulus_barrier_Q(m: int, W_eval: Callable[[float], float],
                      x: float) -> float:
    """Q(x) = (l^2 - (m+1+l-|x|)^2) W(x) with l = (m-1)/2 on the annulus
    m+1 <= |x| <= 2m; vanishes on the annulus boundary, equals
    (l^2 - 1/4) W at |x| = 3m/2."""
    if m < 4:
        raise ValueError("the annulus barrier requires m >= 4")
    r = abs(x)
    if r < m + 1 or r > 2 * m:
        raise DomainError(f"|x| = {r} outside the annulus [{m + 1}, {2 * m}]")
    l = 0.5 * (m - 1.0)
    return (l * l - (m + 1.0 + l - r) ** 2) * W_eval(x)
