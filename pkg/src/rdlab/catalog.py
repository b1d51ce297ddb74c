"""Named reaction terms, operators, right-hand sides and stationary
witnesses shared by the scenario runner and the test suite."""

from __future__ import annotations

import math
from typing import Callable

from . import barriers
from .errors import ConfigError
from .nonlinearity import (
    ReactionTerm,
    custom_term,
    linear_minus_iterlog,
    linear_minus_power,
    shifted_log_power,
)
from .operators import (
    Operator1D,
    constant_operator,
    power_diffusion_operator,
    sgn_drift_operator,
)

__all__ = ["get_term", "get_operator", "get_G", "get_witness",
           "TERM_NAMES", "OPERATOR_NAMES", "G_NAMES", "WITNESS_NAMES",
           "ex3_regularized_term"]


def ex3_regularized_term(eps: float = 1.0, delta: float = 1e-8) -> ReactionTerm:
    """Lipschitz regularization of f(u) = -2 - 2 (1+u)^(1/2+eps) sqrt(u):
    the constant sink becomes -2u/(u+delta) and sqrt(u) becomes
    u/sqrt(u+delta), so f(0) = 0 and the term is evolvable; both agree with
    the original to O(delta) for u >> delta."""
    def f(x: float, u: float) -> float:
        return (-2.0 * u / (u + delta)
                - 2.0 * (1.0 + u) ** (0.5 + eps) * u / math.sqrt(u + delta))
    return custom_term(f, x_independent=True,
                       label=f"ex3 regularized (eps={eps:g}, delta={delta:g})")


_TERMS: dict[str, Callable[[], ReactionTerm]] = {
    # model absorption of the universal-bound certificates
    "model_log_cubed": lambda: shifted_log_power(1.0, 3.0, label="-u*log(e+u)^3"),
    "quadratic": lambda: linear_minus_power(0.0, 1.0, 2.0, label="-u^2"),
    "double_quadratic": lambda: linear_minus_power(0.0, 2.0, 2.0, label="-2u^2"),
    "linear_decay": lambda: custom_term(lambda x, u: -u, x_independent=True,
                                        label="-u"),
    "logistic": lambda: custom_term(lambda x, u: u - u * u,
                                    x_independent=True, label="u - u^2"),
    "iterlog_m0": lambda: linear_minus_iterlog(0.0, 1.0, 0, 1.0),
    "iterlog_m1": lambda: linear_minus_iterlog(0.0, 1.0, 1, 1.0),
    "ex3_regularized": ex3_regularized_term,
}

_OPERATORS: dict[str, Callable[[], Operator1D]] = {
    "laplacian": lambda: constant_operator(1.0, 0.0),
    "half_diffusion": lambda: constant_operator(0.5, 0.0),
    "ex2_operator": lambda: power_diffusion_operator(1.0),
    "ex3_operator": lambda: sgn_drift_operator(1.0),
}


def _neg_u_logprod(m: int) -> Callable[[float], float]:
    def G(u: float) -> float:
        acc = u
        v = u
        for _ in range(m):
            v = math.log(v)
            acc *= v
        return -acc
    return G


_G_FUNCS: dict[str, Callable[[], Callable[[float], float]]] = {
    "neg_u_sq": lambda: (lambda u: -u * u),
    "neg_2u_sq": lambda: (lambda u: -2.0 * u * u),
    "neg_u": lambda: (lambda u: -u),
    "neg_u_log2": lambda: (lambda u: -u * math.log(u) ** 2),
    "neg_u_log3": lambda: (lambda u: -u * math.log(u) ** 3),
    "neg_u_logprod_m1": lambda: _neg_u_logprod(1),
    "neg_u_logprod_m2": lambda: _neg_u_logprod(2),
    "cubic_roots": lambda: (lambda u: -u * (u - 1.0) * (u - 2.0)),
    "one_minus_u": lambda: (lambda u: 1.0 - u),
}

_WITNESSES: dict[str, Callable[[], barriers.StationaryWitness]] = {
    "ex1_level1": lambda: barriers.ex1_double_exp(level=1),
    "ex1_level2": lambda: barriers.ex1_double_exp(level=2),
    "ex2": lambda: barriers.ex2_quadratic(eps=1.0),
    "ex3": lambda: barriers.ex3_drifted(eps=1.0),
}

TERM_NAMES = tuple(sorted(_TERMS))
OPERATOR_NAMES = tuple(sorted(_OPERATORS))
G_NAMES = tuple(sorted(_G_FUNCS))
WITNESS_NAMES = tuple(sorted(_WITNESSES))


def _lookup(table: dict, name: str, what: str):
    try:
        factory = table[name]
    except KeyError:
        raise ConfigError(
            f"unknown {what} {name!r}; known: {', '.join(sorted(table))}"
        ) from None
    return factory()


def get_term(name: str) -> ReactionTerm:
    return _lookup(_TERMS, name, "term")


def get_operator(name: str) -> Operator1D:
    return _lookup(_OPERATORS, name, "operator")


def get_G(name: str) -> Callable[[float], float]:
    return _lookup(_G_FUNCS, name, "G function")


def get_witness(name: str) -> barriers.StationaryWitness:
    return _lookup(_WITNESSES, name, "stationary witness")
