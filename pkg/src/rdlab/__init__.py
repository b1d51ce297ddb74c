"""Numerical laboratory for reaction-diffusion equations
u_t = L u + f(x, u) with super-linear absorption: growth classifiers,
decay-from-infinity ODE oracles, explicit super-solution barriers with
residual certification, a 1-D parabolic solver, and a scenario runner.
"""

from . import (  # noqa: F401
    barriers,
    catalog,
    errors,
    nonlinearity,
    ode_oracle,
    operators,
    pde_lab,
)

__version__ = "0.1.0"
