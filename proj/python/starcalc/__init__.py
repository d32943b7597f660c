"""Subset-lattice algebra, star calculus and Lebesgue-Poisson integration."""

import json as _json

from ._starcalc import (
    Kernel,
    PhaseSpace,
    SetFunction,
    StarcalcError,
    conv_crossover,
    conv_fast,
    conv_naive,
    d_x,
    evolve,
    exp_star,
    f_star_series,
    gram_star,
    inv_star,
    ln_star,
    mobius,
    number_op,
    resolvent,
    set_conv_crossover,
    star_fast,
    star_naive,
    star_power,
    unit,
    verify_all,
    young_check,
    zeta,
)
from ._starcalc import integrate as _integrate


def kernel(spec):
    """Kernel from a dict or JSON string, e.g. {"type": "lp_exponent", "f": "x0"}."""
    return Kernel.from_json(spec if isinstance(spec, str) else _json.dumps(spec))


def phase_space(spec):
    """Phase space from a dict or JSON string: {"dim", "box", "z", "density"?}."""
    return PhaseSpace.from_json(spec if isinstance(spec, str) else _json.dumps(spec))


def integrate(k, space, samples=100000, seed=1, monte_carlo=False):
    if not isinstance(k, Kernel):
        k = kernel(k)
    if not isinstance(space, PhaseSpace):
        space = phase_space(space)
    return _integrate(k, space, samples, seed, monte_carlo)


__all__ = [
    "Kernel",
    "PhaseSpace",
    "SetFunction",
    "StarcalcError",
    "conv_crossover",
    "conv_fast",
    "conv_naive",
    "d_x",
    "evolve",
    "exp_star",
    "f_star_series",
    "gram_star",
    "integrate",
    "inv_star",
    "kernel",
    "ln_star",
    "mobius",
    "number_op",
    "phase_space",
    "resolvent",
    "set_conv_crossover",
    "star_fast",
    "star_naive",
    "star_power",
    "unit",
    "verify_all",
    "young_check",
    "zeta",
]
