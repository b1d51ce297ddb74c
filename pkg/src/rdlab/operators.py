"""1-D elliptic operators L = a(x) d^2/dx^2 + b(x) d/dx."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ConditionL1Error

__all__ = ["Operator1D", "constant_operator", "power_diffusion_operator",
           "sgn_drift_operator"]


@dataclass(frozen=True)
class Operator1D:
    """Diffusion a(x) > 0 (length^2/time) and drift b(x) (length/time).

    ``growth_cert``, when present, is a pair (C_a, C_b) asserting
    a(x) <= C_a (1 + x^2) and |b(x)| <= C_b (1 + |x|) -- the coefficient
    growth condition under which the zero-data Cauchy problem is unique.
    """

    a: Callable[[float], float]
    b: Callable[[float], float]
    growth_cert: tuple[float, float] | None = None

    def validate(self, x_probes: Sequence[float]) -> None:
        """Nondegeneracy on probes; growth certificate verification when
        one is declared."""
        for x in x_probes:
            ax = self.a(x)
            if not (ax > 0.0) or not math.isfinite(ax):
                raise ValueError(f"a({x}) = {ax} is not strictly positive")
        if self.growth_cert is not None:
            C_a, C_b = self.growth_cert
            for x in x_probes:
                if self.a(x) > C_a * (1.0 + x * x) * (1.0 + 1e-12):
                    raise ConditionL1Error(f"a({x}) exceeds C_a (1+x^2)")
                if abs(self.b(x)) > C_b * (1.0 + abs(x)) * (1.0 + 1e-12) + 1e-300:
                    raise ConditionL1Error(f"|b({x})| exceeds C_b (1+|x|)")

    def check_linear_growth(self, x_span: float) -> None:
        """Probe the linear/quadratic growth bounds out to 10x the span.

        With a declared certificate this is a hard check; without one the
        empirical ratios a/(1+x^2) and |b|/(1+|x|) must not grow by more
        than an order of magnitude across the probed decades.
        """
        xs = np.geomspace(max(x_span, 1.0) * 1e-2, max(x_span, 1.0) * 10.0, 64)
        xs = np.concatenate((-xs[::-1], xs))
        if self.growth_cert is not None:
            self.validate(xs)
            return
        ra = [self.a(float(x)) / (1.0 + x * x) for x in xs]
        rb = [abs(self.b(float(x))) / (1.0 + abs(x)) for x in xs]
        if max(ra) > 10.0 * max(ra[len(ra) // 2 - 1: len(ra) // 2 + 1]):
            raise ConditionL1Error("a(x)/(1+x^2) grows across probe decades")
        if max(rb) > 10.0 * max(1e-300, *rb[len(rb) // 2 - 1: len(rb) // 2 + 1]):
            raise ConditionL1Error("|b(x)|/(1+|x|) grows across probe decades")


def constant_operator(a: float = 1.0, b: float = 0.0) -> Operator1D:
    return Operator1D(lambda x: a, lambda x: b, growth_cert=(max(a, 1e-300), abs(b)))


def power_diffusion_operator(eps: float) -> Operator1D:
    """L = (1+x^2)^(1+eps) d^2/dx^2; violates the quadratic growth bound."""
    return Operator1D(lambda x: (1.0 + x * x) ** (1.0 + eps), lambda x: 0.0)


def sgn_drift_operator(eps: float) -> Operator1D:
    """L = d^2/dx^2 + (1+x^2)^(1/2+eps) sgn(x) d/dx; super-linear drift."""
    return Operator1D(lambda x: 1.0,
                      lambda x: (1.0 + x * x) ** (0.5 + eps) * math.copysign(1.0, x)
                      if x != 0.0 else 0.0)
