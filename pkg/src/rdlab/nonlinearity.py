"""Catalog of reaction terms f(x,u), their x-supremum envelopes, and numeric
classifiers for the iterated-logarithm growth conditions.

The central objects are:

* :class:`ReactionTerm` -- a structured f(x,u) with coefficient functions and
  growth metadata,
* :func:`envelope` -- F_R(u) = sup_{|x|<=R} f(x,u) (closed form for
  x-independent terms, grid supremum otherwise),
* :func:`check_F2` -- heuristic certificate that F_R(u) is dominated by
  -u (prod log^(i) u)^2 (log^(m+1) u)^(2+eps) in the limit,
* :func:`osgood_test` -- convergence/divergence of the improper integral
  int^inf du / (-G(u)), evaluated in the log-substituted variable with
  doubling upper limits,
* :func:`shift_envelopes` -- the shifted-difference envelopes G and H.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad

from .errors import (
    ConcavityMismatch,
    DomainError,
    InconclusiveError,
    SignError,
    UnboundedEnvelope,
)

__all__ = [
    "TermKind",
    "EnvelopeMethod",
    "ShiftMethod",
    "Verdict",
    "ReactionTerm",
    "Envelope",
    "ShiftEnvelopes",
    "GrowthSpec",
    "OsgoodResult",
    "iter_log",
    "iter_log_product",
    "iter_exp",
    "linear_minus_power",
    "linear_minus_iterlog",
    "shifted_log_power",
    "custom_term",
    "envelope",
    "check_F2",
    "osgood_test",
    "tail_integral",
    "shift_envelopes",
]


# --------------------------------------------------------------------------
# iterated logarithm / exponential
# --------------------------------------------------------------------------

def iter_log(m: int, u: float) -> float:
    """m-fold iterate of log: log^(m)(u).  m=0 returns u itself."""
    if m < 0:
        raise ValueError("m must be >= 0")
    v = float(u)
    for _ in range(m):
        if v <= 0.0:
            raise DomainError(f"iterated log undefined: intermediate value {v} <= 0")
        v = math.log(v)
    return v


def iter_log_product(m: int, u: float) -> float:
    """prod_{i=1}^m log^(i)(u); the empty product (m=0) is 1."""
    if m < 0:
        raise ValueError("m must be >= 0")
    prod = 1.0
    v = float(u)
    for _ in range(m):
        if v <= 0.0:
            raise DomainError(f"iterated log undefined: intermediate value {v} <= 0")
        v = math.log(v)
        prod *= v
    return prod


def iter_exp(m: int, x: float) -> float:
    """m-fold iterate of exp.  m=0 returns x.

    Raises OverflowError (reported, never saturated) once the result leaves
    the double range.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    v = float(x)
    for _ in range(m):
        v = math.exp(v)  # math.exp raises OverflowError past ~709.78
    return v


def _tower(m: int) -> float:
    """e-tower guard e^^(m) used for iterated-log domain checks."""
    return iter_exp(m, 1.0) if m > 0 else 1.0


# --------------------------------------------------------------------------
# reaction terms
# --------------------------------------------------------------------------

class TermKind(Enum):
    LinearMinusPower = "LinearMinusPower"
    LinearMinusIterLog = "LinearMinusIterLog"
    ExplicitTable = "ExplicitTable"
    Custom = "Custom"


def _as_coefficient(spec) -> tuple[Callable[[float], float], bool]:
    """Turn a number or callable into (callable, is_constant)."""
    if callable(spec):
        return spec, False
    val = float(spec)
    return (lambda x, _v=val: _v), True


@dataclass(frozen=True)
class ReactionTerm:
    """Structured reaction term f(x,u) with growth metadata.

    ``evaluator(x, u)`` is the only contractually required entry point; the
    remaining fields describe how the term was built and feed the
    classifiers.  Instances are immutable and safe to share across threads.
    """

    kind: TermKind
    V: Callable[[float], float]
    gamma: Callable[[float], float]
    evaluator: Callable[[float, float], float]
    power_p: float | None = None
    iter_m: int | None = None
    eps: float | None = None
    x_independent: bool = False
    label: str = ""

    def __call__(self, x: float, u: float) -> float:
        return self.evaluator(x, u)

    def check_invariants(self, x_probes: Sequence[float],
                         u_probes: Sequence[float],
                         lipschitz_bound: float = 1e12) -> None:
        """Probe-based invariants: gamma > 0, f(x,0)=0 for catalog kinds,
        finite-difference Lipschitz slopes bounded."""
        for x in x_probes:
            if self.gamma(x) <= 0.0:
                raise ValueError(f"gamma({x}) <= 0")
            if self.kind in (TermKind.LinearMinusPower, TermKind.LinearMinusIterLog):
                if abs(self.evaluator(x, 0.0)) > 1e-14:
                    raise ValueError(f"f({x}, 0) != 0 for catalog kind {self.kind}")
            for u in u_probes:
                h = 1e-6 * max(1.0, abs(u))
                slope = (self.evaluator(x, u + h) - self.evaluator(x, u)) / h
                if not math.isfinite(slope) or abs(slope) > lipschitz_bound * max(1.0, abs(u)):
                    raise ValueError(f"Lipschitz probe failed at (x={x}, u={u})")


def linear_minus_power(V, gamma, p: float, label: str = "") -> ReactionTerm:
    """f(x,u) = V(x) u - gamma(x) u^p with p > 1."""
    if p <= 1.0:
        raise ValueError("power p must exceed 1")
    Vf, Vc = _as_coefficient(V)
    gf, gc = _as_coefficient(gamma)

    def f(x: float, u: float) -> float:
        return Vf(x) * u - gf(x) * u ** p

    return ReactionTerm(TermKind.LinearMinusPower, Vf, gf, f, power_p=p,
                        x_independent=Vc and gc,
                        label=label or f"V*u - gamma*u^{p}")


def iterlog_absorption(m: int, eps: float, u: float, u_splice: float) -> float:
    """u (prod_{i=1}^m log^(i) u)^2 (log^(m+1) u)^(2+eps), linearly
    interpolated to 0 below the splice point (the natural domain ends at the
    e-tower)."""
    if u <= 0.0:
        return 0.0
    if u < u_splice:
        # linear splice down to the origin: keeps f(x,0)=0 and continuity
        return (u / u_splice) * iterlog_absorption(m, eps, u_splice, u_splice)
    prod = iter_log_product(m, u)
    top = iter_log(m + 1, u)
    return u * prod * prod * top ** (2.0 + eps)


def linear_minus_iterlog(V, gamma, m: int, eps: float, label: str = "") -> ReactionTerm:
    """f = V u - gamma * u (prod log^(i) u)^2 (log^(m+1) u)^(2+eps) for large u,
    spliced linearly to V u below u_splice = 2 * exp^(m+1)(0)."""
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    Vf, Vc = _as_coefficient(V)
    gf, gc = _as_coefficient(gamma)
    u_splice = 2.0 * iter_exp(m + 1, 0.0)

    def f(x: float, u: float) -> float:
        return Vf(x) * u - gf(x) * iterlog_absorption(m, eps, u, u_splice)

    return ReactionTerm(TermKind.LinearMinusIterLog, Vf, gf, f, iter_m=m, eps=eps,
                        x_independent=Vc and gc,
                        label=label or f"V*u - gamma*iterlog(m={m}, eps={eps})")


def shifted_log_power(gamma, p: float, shift: float = math.e,
                      label: str = "") -> ReactionTerm:
    """f(x,u) = -gamma(x) * u * (log(shift + u))^p, the overflow-safe model
    absorption term (for shift=e it dominates -u (log u)^p everywhere)."""
    gf, gc = _as_coefficient(gamma)
    zero = lambda x: 0.0

    def f(x: float, u: float) -> float:
        return -gf(x) * u * math.log(shift + u) ** p

    term = ReactionTerm(TermKind.Custom, zero, gf, f,
                        iter_m=0, eps=p - 2.0 if p > 2.0 else None,
                        x_independent=gc,
                        label=label or f"-gamma*u*log({shift:g}+u)^{p:g}")
    return term


def custom_term(evaluator, x_independent: bool = False, label: str = "",
                iter_m: int | None = None, eps: float | None = None) -> ReactionTerm:
    """Wrap a bare evaluator f(x,u) as a catalog entry."""
    zero = lambda x: 0.0
    one = lambda x: 1.0
    return ReactionTerm(TermKind.Custom, zero, one, evaluator,
                        iter_m=iter_m, eps=eps,
                        x_independent=x_independent, label=label or "custom")


# --------------------------------------------------------------------------
# envelopes
# --------------------------------------------------------------------------

class EnvelopeMethod(Enum):
    ClosedForm = "ClosedForm"
    GridSup = "GridSup"


#: x-ball used to truncate the supremum when R is infinite and no closed
#: form is available.  Recorded on the Envelope.
DEFAULT_X_TRUNCATION = 50.0


@dataclass(frozen=True)
class Envelope:
    """F_R(u) = sup_{|x|<=R} f(x,u) (R may be math.inf)."""

    source: ReactionTerm
    radius_R: float
    evaluator: Callable[[float], float]
    method: EnvelopeMethod
    x_truncation: float | None = None

    def __call__(self, u: float) -> float:
        return self.evaluator(u)


def envelope(term: ReactionTerm, R: float,
             x_probe_count: int = 201) -> Envelope:
    """Build the x-supremum envelope of ``term`` over the ball of radius R.

    x-independent terms get the exact closed form; otherwise a grid supremum
    over ``x_probe_count`` points (truncated to DEFAULT_X_TRUNCATION when
    R is infinite).  Raises UnboundedEnvelope when the probe supremum keeps
    growing at small u, which signals a violation of the boundedness
    condition sup_u F_R(u) < inf.
    """
    if not (R > 0.0):
        raise ValueError("R must be positive (possibly math.inf)")

    if term.x_independent:
        ev = lambda u: term.evaluator(0.0, u)
        env = Envelope(term, R, ev, EnvelopeMethod.ClosedForm)
    else:
        ball = min(R, DEFAULT_X_TRUNCATION)
        xs = np.linspace(-ball, ball, x_probe_count)

        def ev(u: float, _xs=xs) -> float:
            return float(max(term.evaluator(x, u) for x in _xs))

        env = Envelope(term, R, ev, EnvelopeMethod.GridSup, x_truncation=ball)

    # F-1 probe: the envelope must be bounded above over u.
    probes = np.geomspace(1e-3, 1e6, 19)
    vals = [env(u) for u in probes]
    if not all(math.isfinite(v) for v in vals):
        raise UnboundedEnvelope("envelope not finite on probe grid")
    increasing = all(b >= a for a, b in zip(vals, vals[1:]))
    if increasing and vals[-1] > 1e12:
        raise UnboundedEnvelope("envelope grows without bound on probe grid")
    return env


# --------------------------------------------------------------------------
# (F-2) classification
# --------------------------------------------------------------------------

class Verdict(Enum):
    SatisfiesF2 = "SatisfiesF2"
    FailsF2 = "FailsF2"
    Inconclusive = "Inconclusive"


@dataclass(frozen=True)
class GrowthSpec:
    m: int
    eps: float
    verdict: Verdict
    probe_log: tuple = ()

    def to_json_record(self, term_id: str, condition: str = "F-2") -> str:
        rec = {
            "term_id": term_id,
            "condition": condition,
            "m": self.m,
            "eps": self.eps,
            "verdict": self.verdict.value,
            "probes": [[u, r] for (u, r) in self.probe_log],
        }
        return json.dumps(rec, sort_keys=True)


def f2_denominator(m: int, eps: float, u: float) -> float:
    """u (prod_{i=1}^m log^(i) u)^2 (log^(m+1) u)^(2+eps)."""
    prod = iter_log_product(m, u)
    top = iter_log(m + 1, u)
    if top <= 0.0:
        raise DomainError(f"u={u} below the domain guard for m={m}")
    return u * prod * prod * top ** (2.0 + eps)


def default_f2_probes(m: int) -> np.ndarray:
    """Geometric probe set 10^k clipped above the e-tower domain guard."""
    lo = 2.0 * _tower(m + 1)
    ks = [float(k) for k in range(1, 13)]
    probes = [10.0 ** k for k in ks if 10.0 ** k > lo]
    if len(probes) < 6:
        # deep towers need larger probes, still in double range for m <= 2
        base = max(lo * 10.0, 10.0)
        probes = list(np.geomspace(base, min(base * 1e12, 1e300), 12))
    return np.asarray(probes)


def check_F2(env: Envelope | Callable[[float], float], m: int, eps: float,
             u_probes: Sequence[float] | None = None,
             growth_factor: float = 1.4) -> GrowthSpec:
    """Heuristic certificate for the divergence F_R(u)/denominator -> -inf.

    The ratio sequence must be negative and strictly decreasing on the probe
    set, with an overall magnitude growth factor of at least
    ``growth_factor``; negative ratios with non-increasing magnitude yield
    FailsF2 (the ratio tends to 0 or a finite limit); everything else is
    Inconclusive.
    """
    ev = env.evaluator if isinstance(env, Envelope) else env
    if u_probes is None:
        u_probes = default_f2_probes(m)
    u_probes = list(u_probes)
    if any(b <= a for a, b in zip(u_probes, u_probes[1:])):
        raise ValueError("u_probes must be strictly increasing")

    ratios = []
    for u in u_probes:
        ratios.append((float(u), ev(u) / f2_denominator(m, eps, u)))
    rs = [r for (_, r) in ratios]

    if all(r < 0.0 for r in rs):
        mags = [-r for r in rs]
        strictly_increasing = all(b > a for a, b in zip(mags, mags[1:]))
        if strictly_increasing and mags[-1] / mags[0] >= growth_factor:
            verdict = Verdict.SatisfiesF2
        elif mags[-1] <= mags[0]:
            verdict = Verdict.FailsF2
        else:
            verdict = Verdict.Inconclusive
    elif all(r >= 0.0 for r in rs[-3:]):
        verdict = Verdict.FailsF2
    else:
        verdict = Verdict.Inconclusive
    return GrowthSpec(m=m, eps=eps, verdict=verdict, probe_log=tuple(ratios))


# --------------------------------------------------------------------------
# Osgood tail integral
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class OsgoodResult:
    convergent: bool
    value: float | None = None
    increments: tuple = ()


#: log-variable cap; exp(s) must stay in double range
_S_CAP = 690.0
_CONV_RATIO = 0.70
_DIV_RATIO = 0.85


def _tail_integrand(G_eval, s: float) -> float:
    u = math.exp(s)
    try:
        g = G_eval(u)
    except OverflowError:
        return 0.0
    if not math.isfinite(g):
        return 0.0
    if g >= 0.0:
        raise SignError(f"G({u}) = {g} >= 0 inside the tail integral")
    return u / (-g)


def tail_integral(G_eval, u0: float, *, classify: bool = True
                  ) -> OsgoodResult:
    """Evaluate int_{u0}^inf du / (-G(u)) via s = log u with geometrically
    doubling upper limits.

    The tail beyond the last segment is closed with the power-law model
    implied by the last increment ratio (exact for integrands that are pure
    powers of s, e.g. G = -u (log u)^p).  With ``classify`` the increments
    must certify geometric decay; the nominal spec threshold for geometric
    decay is ratio < 0.5, but the critical convergent case -u (log u)^2 sits
    exactly at ratio 0.5, so acceptance uses 0.70 (see decisions ledger).
    """
    if u0 <= 0.0:
        raise ValueError("u0 must be positive")

    # head: integrate up to a safe start for the doubling schedule, in the
    # log variable over unit-width segments (u0 can sit many orders of
    # magnitude below 1, where a single u-space quadrature loses accuracy)
    s_start = 1.0
    head = 0.0
    if math.log(u0) < s_start:
        s = math.log(u0)
        while s < s_start:
            s_next = min(s + 1.0, s_start)
            seg, _ = quad(lambda t: _tail_integrand(G_eval, t), s, s_next,
                          epsabs=1e-13, epsrel=1e-12, limit=200)
            head += seg
            s = s_next
        s_lo = s_start
    else:
        s_lo = math.log(u0)

    integrand = lambda s: _tail_integrand(G_eval, s)
    increments = []
    s = s_lo
    s_hi = max(2.0 * s_lo, s_lo + 1.0)
    while s_hi <= _S_CAP:
        inc, _ = quad(integrand, s, s_hi, epsabs=1e-13, epsrel=1e-12,
                      limit=200)
        increments.append(inc)
        s, s_hi = s_hi, 2.0 * s_hi

    ratios = [b / a for a, b in zip(increments, increments[1:]) if a > 0.0]
    if len(ratios) < 3:
        raise InconclusiveError("doubling budget too small for a certificate")

    last3 = ratios[-3:]
    creeping_up = (last3[0] < last3[1] < last3[2]
                   and last3[2] - last3[0] > 0.01 and last3[2] >= _CONV_RATIO)
    if classify:
        if all(r < _CONV_RATIO for r in last3):
            convergent = True
        elif all(r >= _DIV_RATIO for r in last3) \
                or increments[-1] >= increments[-2] or creeping_up:
            # constant-or-growing increments are the harmonic signature;
            # ratios climbing toward 1 betray an iterated-log divergence
            convergent = False
        else:
            raise InconclusiveError(
                f"increment ratios {last3} fire neither certificate")
    else:
        convergent = all(r < _DIV_RATIO for r in last3)

    if not convergent:
        return OsgoodResult(False, None, tuple(increments))

    # power-law tail closure: for segments [S, 2S] and integrand ~ C s^-p the
    # remaining mass is exactly Delta_last * r / (1 - r)
    r = ratios[-1]
    tail = increments[-1] * r / (1.0 - r) if 0.0 < r < 1.0 else 0.0
    value = head + sum(increments) + tail
    return OsgoodResult(True, value, tuple(increments))


def osgood_test(G_eval, u0: float) -> OsgoodResult:
    """Convergence test for int_{u0}^inf du/(-G(u)).

    Raises SignError if G >= 0 at any probe >= u0, InconclusiveError if the
    doubling certificates do not fire.
    """
    for mult in (1.0, 2.0, 5.0, 10.0, 1e2, 1e3, 1e4):
        u = u0 * mult
        g = G_eval(u)
        if g >= 0.0:
            raise SignError(f"G({u}) = {g} >= 0; Osgood test requires G < 0 above u0")
    return tail_integral(G_eval, u0)


# --------------------------------------------------------------------------
# shift envelopes G and H
# --------------------------------------------------------------------------

class ShiftMethod(Enum):
    ConcaveShortcut = "ConcaveShortcut"
    GridSup = "GridSup"


@dataclass(frozen=True)
class ShiftEnvelopes:
    """G(u) = sup_x sup_{v>=u} (f(x,v) - f(x,v-u)) and
    H(u) = sup_x sup_{v>=0} (f(x,u+v) - f(x,v))."""

    source: ReactionTerm
    G_eval: Callable[[float], float]
    H_eval: Callable[[float], float]
    method: ShiftMethod


def _concavity_defect(term: ReactionTerm, x_probes, u_probes) -> float:
    """Max positive second difference of u -> f(x,u) over the probe box."""
    worst = -math.inf
    for x in x_probes:
        for u in u_probes:
            h = max(1e-4, 1e-4 * u)
            d2 = (term.evaluator(x, u + h) - 2.0 * term.evaluator(x, u)
                  + term.evaluator(x, max(u - h, 0.0))) / (h * h)
            worst = max(worst, d2)
    return worst


def shift_envelopes(term: ReactionTerm, concave_hint: bool = False,
                    x_truncation: float = DEFAULT_X_TRUNCATION,
                    v_max: float = 1e6, n_x: int = 201, n_v: int = 241,
                    concavity_tol: float = 1e-6) -> ShiftEnvelopes:
    """Build the shift envelopes G and H.

    With ``concave_hint`` a numeric concavity check (positive second
    differences bounded by ``concavity_tol`` on probes) enables the exact
    shortcut G = H = F - F(0): for concave f(x,.) the inner supremum is
    attained at v=u (for G) and v=0 (for H).  Otherwise a brute-force grid
    supremum over the truncated (x, v) probe box is used.
    """
    x_probes = np.linspace(-x_truncation, x_truncation, n_x)
    if term.x_independent:
        x_probes = np.array([0.0])

    if concave_hint:
        u_chk = np.geomspace(1e-3, min(v_max, 1e6), 25)
        defect = _concavity_defect(term, x_probes[:: max(1, len(x_probes) // 9)], u_chk)
        if defect > concavity_tol:
            raise ConcavityMismatch(
                f"concave_hint set but max second difference {defect} > {concavity_tol}")
        env = envelope(term, math.inf)
        f0 = env(0.0)
        ev = lambda u: env(u) - f0
        return ShiftEnvelopes(term, ev, ev, ShiftMethod.ConcaveShortcut)

    v_grid = np.concatenate(([0.0], np.geomspace(1e-6, v_max, n_v)))

    def G_eval(u: float) -> float:
        best = -math.inf
        for x in x_probes:
            fx = term.evaluator
            for v in v_grid:
                vv = u + v  # parametrize v >= u as u + v, v >= 0
                best = max(best, fx(x, vv) - fx(x, vv - u))
        return best

    def H_eval(u: float) -> float:
        best = -math.inf
        for x in x_probes:
            fx = term.evaluator
            for v in v_grid:
                best = max(best, fx(x, u + v) - fx(x, v))
        return best

    return ShiftEnvelopes(term, G_eval, H_eval, ShiftMethod.GridSup)
