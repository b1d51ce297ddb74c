"""Exception and warning types shared across the package."""


class RdlabError(Exception):
    """Base class for all package-specific errors."""


class DomainError(RdlabError):
    """Input lies outside the mathematical domain of the function."""


class SignError(RdlabError):
    """A quantity required to be negative (or positive) has the wrong sign."""


class InconclusiveError(RdlabError):
    """Neither certificate fired within the configured budget."""


class NotOsgoodError(RdlabError):
    """The tail integral of 1/(-G) diverges, so the decay-from-infinity
    profile does not exist."""


class BlowUpError(RdlabError):
    """ODE solution exceeded the overflow guard before the requested time."""


class NoRootError(RdlabError):
    """No root found: the function is not eventually negative, or no sign
    change exists below the search bound."""


class ConvergenceError(RdlabError):
    """An iterative limit procedure exhausted its budget."""


class UnboundedEnvelope(RdlabError):
    """The x-supremum envelope appears unbounded over the probe set."""


class ConcavityMismatch(RdlabError):
    """A concavity hint was supplied but the numeric concavity check failed."""


class EnvelopeDominanceError(RdlabError):
    """The required envelope domination inequality fails on the probe set."""


class ConditionL1Error(RdlabError):
    """Operator coefficient growth probes violate the linear/quadratic
    growth bounds."""


class KExhaustedError(RdlabError):
    """The K search range was exhausted without obtaining a certificate."""


class StabilityError(RdlabError):
    """The time stepper produced NaN/inf values or negativity beyond
    tolerance."""


class NewtonDivergenceError(RdlabError):
    """The damped Newton reaction substep failed to converge."""


class NotConvergedError(RdlabError):
    """Domain-ladder extrapolation gaps failed to decay."""


class ConfigError(RdlabError):
    """Malformed scenario configuration."""


class ScenarioError(RdlabError):
    """A scenario failed; carries the scenario id."""

    def __init__(self, scenario_id, message):
        super().__init__(f"[{scenario_id}] {message}")
        self.scenario_id = scenario_id


class TangencyWarning(UserWarning):
    """The root scan detected a near-tangential zero (|G| small without a
    sign change)."""
